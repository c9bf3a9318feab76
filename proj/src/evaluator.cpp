#include "mhsense/evals/evaluator.hpp"

#include <array>
#include <fstream>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"
#include "mhsense/util.hpp"

namespace mhsense::evals {

using dialogue::Message;
using dialogue::Speaker;
using dialogue::Transcript;
using gateway::Bindings;
using nlohmann::ordered_json;

namespace {

constexpr int kEvalSchemaVersion = 1;

const std::array<std::string, 4> kMetricKeys = {"susceptibility", "severity", "benefits", "flow"};

const char* hbm_template(HbmMetric metric) {
    switch (metric) {
        case HbmMetric::Susceptibility: return "judge_susceptibility";
        case HbmMetric::Severity: return "judge_severity";
        case HbmMetric::Benefits: return "judge_benefits";
        case HbmMetric::FlowCorrectness: return "judge_flow";
    }
    return "";
}

}  // namespace

const std::string& hbm_metric_key(HbmMetric m) { return kMetricKeys[static_cast<std::size_t>(m)]; }

Evaluator::Evaluator(gateway::LlmClient judge_client, int max_tokens)
    : judge_(std::move(judge_client)), max_tokens_(max_tokens) {}

std::string Evaluator::render_conversation(const Transcript& transcript) {
    std::string out;
    for (const auto& m : transcript.messages) {
        out += m.speaker == Speaker::Patient ? "PATIENT: " : "SENSEMAKER: ";
        out += m.text;
        out += '\n';
    }
    return out;
}

LikertScore Evaluator::judge_likert(const Transcript& transcript, HbmMetric metric,
                                    const std::string& template_name) const {
    const auto parsed = judge_.call_labeled(
        template_name, {{"patient_sensemaker_conversation", render_conversation(transcript)}},
        max_tokens_, {"OUTPUT_REASONING", "OUTPUT_SCORE"}, {"OUTPUT_SCORE"},
        [](const gateway::LabeledOutput& out) {
            const long long score = out.number("OUTPUT_SCORE");
            if (score < 1 || score > 4) throw OutOfRangeScore(score);
        });
    LikertScore score;
    score.metric = metric;
    score.score = static_cast<int>(parsed.number("OUTPUT_SCORE"));
    score.reasoning = parsed.text("OUTPUT_REASONING");
    score.judge_model = judge_.model_id();
    return score;
}

LikertScore Evaluator::judge_hbm(const Transcript& transcript, HbmMetric metric) const {
    if (metric == HbmMetric::FlowCorrectness) return judge_flow(transcript);
    return judge_likert(transcript, metric, hbm_template(metric));
}

LikertScore Evaluator::judge_flow(const Transcript& transcript) const {
    return judge_likert(transcript, HbmMetric::FlowCorrectness, "judge_flow");
}

const Message& Evaluator::extract_diagnosis(const Transcript& transcript) {
    if (transcript.status != dialogue::TranscriptStatus::Complete)
        throw MissingDiagnosisMessage();
    for (const auto& m : transcript.messages) {
        if (m.speaker == Speaker::Sensemaker && m.stage == Stage::ProvidingInformation) return m;
    }
    throw MissingDiagnosisMessage();
}

std::pair<int, std::string> Evaluator::diag_accuracy(const std::string& diagnosis_msg,
                                                     const std::string& gt_diagnosis,
                                                     DiagMode mode) const {
    if (diagnosis_msg.empty() || gt_diagnosis.empty())
        throw Error("diagnosis and ground truth must be non-empty");
    const auto parsed = judge_.call_labeled(
        mode == DiagMode::Hard ? "judge_diagnosis_hard" : "judge_diagnosis_soft",
        {{"patient_diagnosis", diagnosis_msg}, {"gt_diagnosis", gt_diagnosis}}, max_tokens_,
        {"OUTPUT_REASONING", "OUTPUT_SCORE"}, {"OUTPUT_SCORE"},
        [](const gateway::LabeledOutput& out) {
            const long long score = out.number("OUTPUT_SCORE");
            if (score != 0 && score != 1) throw NonBinaryScore(score);
        });
    return {static_cast<int>(parsed.number("OUTPUT_SCORE")), parsed.text("OUTPUT_REASONING")};
}

EvalRecord Evaluator::evaluate_transcript(const Transcript& transcript) const {
    if (transcript.status != dialogue::TranscriptStatus::Complete)
        throw Error("only Complete transcripts are evaluated");

    EvalRecord record;
    record.conversation_id = transcript.conversation_id;
    record.model = transcript.sensemaker_model;
    record.persona = transcript.persona;
    for (const auto& m : transcript.messages) {
        if (m.speaker == Speaker::Sensemaker) ++record.sensemaker_message_count;
    }

    auto guarded = [&](const std::string& metric, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            record.errors[metric] = e.what();
            log::warn("metric '{}' failed for {}: {}", metric, transcript.conversation_id,
                      e.what());
        }
    };

    guarded("susceptibility",
            [&] { record.susceptibility = judge_hbm(transcript, HbmMetric::Susceptibility); });
    guarded("severity", [&] { record.severity = judge_hbm(transcript, HbmMetric::Severity); });
    guarded("benefits", [&] { record.benefits = judge_hbm(transcript, HbmMetric::Benefits); });
    guarded("flow", [&] { record.flow = judge_flow(transcript); });
    guarded("diagnosis", [&] {
        const Message& diagnosis_msg = extract_diagnosis(transcript);
        DiagnosisResult result;
        result.extracted_diagnosis = diagnosis_msg.text;
        auto [hard, hard_reasoning] =
            diag_accuracy(diagnosis_msg.text, transcript.gt_diagnosis, DiagMode::Hard);
        auto [soft, soft_reasoning] =
            diag_accuracy(diagnosis_msg.text, transcript.gt_diagnosis, DiagMode::Soft);
        result.hard = hard;
        result.hard_reasoning = std::move(hard_reasoning);
        result.soft = soft;
        result.soft_reasoning = std::move(soft_reasoning);
        if (result.hard == 1 && result.soft == 0) {
            // The judges are independent calls; an exact match that fails the
            // broader match breaks the judge contract. Keep both values.
            result.contract_warning = true;
            record.warnings.push_back("hard=1 with soft=0 for " + transcript.conversation_id);
            log::warn("diagnosis judge contract violation (hard=1, soft=0) for {}",
                      transcript.conversation_id);
        }
        record.diagnosis = std::move(result);
    });
    guarded("smog", [&] {
        std::vector<std::string> sensemaker_texts;
        for (const auto& m : transcript.messages) {
            if (m.speaker == Speaker::Sensemaker) sensemaker_texts.push_back(m.text);
        }
        record.smog = evals::smog(sensemaker_texts);
    });
    return record;
}

// ---- files ----

namespace {

ordered_json likert_to_json(const LikertScore& s) {
    return {{"score", s.score}, {"reasoning", s.reasoning}, {"judge_model", s.judge_model}};
}

LikertScore likert_from_json(HbmMetric metric, const ordered_json& j) {
    LikertScore s;
    s.metric = metric;
    s.score = j.at("score").get<int>();
    s.reasoning = j.value("reasoning", std::string{});
    s.judge_model = j.value("judge_model", std::string{});
    return s;
}

}  // namespace

void write_eval_records(const std::vector<EvalRecord>& records,
                        const std::filesystem::path& path, bool append) {
    std::ofstream out(path, append ? std::ios::app : std::ios::trunc);
    if (!out) throw IoError("cannot write eval records: " + path.string());
    for (const auto& r : records) {
        ordered_json j{
            {"schema_version", kEvalSchemaVersion},
            {"conversation_id", r.conversation_id},
            {"model", r.model},
            {"persona",
             {{"dominant_trait", corpus::trait_key(r.persona.dominant_trait)},
              {"literacy", corpus::literacy_key(r.persona.literacy)},
              {"intent", corpus::intent_key(r.persona.intent)},
              {"goal", corpus::goal_key(r.persona.goal)}}},
            {"sensemaker_message_count", r.sensemaker_message_count},
        };
        if (r.susceptibility) j["susceptibility"] = likert_to_json(*r.susceptibility);
        if (r.severity) j["severity"] = likert_to_json(*r.severity);
        if (r.benefits) j["benefits"] = likert_to_json(*r.benefits);
        if (r.flow) j["flow"] = likert_to_json(*r.flow);
        if (r.diagnosis) {
            j["diagnosis"] = {{"extracted_diagnosis", r.diagnosis->extracted_diagnosis},
                              {"hard", r.diagnosis->hard},
                              {"soft", r.diagnosis->soft},
                              {"hard_reasoning", r.diagnosis->hard_reasoning},
                              {"soft_reasoning", r.diagnosis->soft_reasoning},
                              {"contract_warning", r.diagnosis->contract_warning}};
        }
        if (r.smog) {
            j["smog"] = {{"grade", r.smog->grade},
                         {"polysyllable_count", r.smog->polysyllable_count},
                         {"sentence_count", r.smog->sentence_count}};
        }
        if (!r.errors.empty()) j["errors"] = r.errors;
        if (!r.warnings.empty()) j["warnings"] = r.warnings;
        out << j.dump() << '\n';
    }
}

std::vector<EvalRecord> read_eval_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read eval records: " + path.string());
    std::vector<EvalRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = ordered_json::parse(line);
            const long long version = j.at("schema_version").get<long long>();
            if (version != kEvalSchemaVersion) throw SchemaVersionMismatch(version);
            EvalRecord r;
            r.conversation_id = j.at("conversation_id").get<std::string>();
            r.model = j.value("model", std::string{});
            const auto& p = j.at("persona");
            r.persona.dominant_trait = corpus::trait_from_key(p.at("dominant_trait"));
            r.persona.literacy = corpus::literacy_from_key(p.at("literacy"));
            r.persona.intent = corpus::intent_from_key(p.at("intent"));
            r.persona.goal = corpus::goal_from_key(p.at("goal"));
            r.sensemaker_message_count = j.at("sensemaker_message_count").get<int>();
            if (j.contains("susceptibility"))
                r.susceptibility = likert_from_json(HbmMetric::Susceptibility, j["susceptibility"]);
            if (j.contains("severity"))
                r.severity = likert_from_json(HbmMetric::Severity, j["severity"]);
            if (j.contains("benefits"))
                r.benefits = likert_from_json(HbmMetric::Benefits, j["benefits"]);
            if (j.contains("flow"))
                r.flow = likert_from_json(HbmMetric::FlowCorrectness, j["flow"]);
            if (j.contains("diagnosis")) {
                const auto& d = j["diagnosis"];
                DiagnosisResult result;
                result.extracted_diagnosis = d.value("extracted_diagnosis", std::string{});
                result.hard = d.at("hard").get<int>();
                result.soft = d.at("soft").get<int>();
                result.hard_reasoning = d.value("hard_reasoning", std::string{});
                result.soft_reasoning = d.value("soft_reasoning", std::string{});
                result.contract_warning = d.value("contract_warning", false);
                r.diagnosis = std::move(result);
            }
            if (j.contains("smog")) {
                SmogScore s;
                s.grade = j["smog"].at("grade").get<double>();
                s.polysyllable_count = j["smog"].at("polysyllable_count").get<long>();
                s.sentence_count = j["smog"].at("sentence_count").get<long>();
                r.smog = s;
            }
            if (j.contains("errors"))
                r.errors = j["errors"].get<std::map<std::string, std::string>>();
            if (j.contains("warnings")) r.warnings = j["warnings"].get<std::vector<std::string>>();
            records.push_back(std::move(r));
        } catch (const SchemaVersionMismatch&) {
            throw;
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    return records;
}

}  // namespace mhsense::evals
