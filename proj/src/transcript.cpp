#include "mhsense/dialogue/transcript.hpp"

#include <fmt/core.h>

#include <array>
#include <fstream>
#include <set>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::dialogue {

using nlohmann::ordered_json;

namespace {
const std::array<std::string, 2> kSpeakerKeys = {"patient", "sensemaker"};
const std::array<std::string, 3> kStatusKeys = {"complete", "incomplete", "error"};
const std::array<std::string, 9> kFindingKeys = {
    "missing_stage",        "out_of_order_stages",         "non_alternating_speakers",
    "missing_diagnosis",    "duplicate_diagnosis",         "safety_cap_hit",
    "empty_message_text",   "bad_indexing",                "exit_not_terminal",
};
}  // namespace

const std::string& speaker_key(Speaker s) { return kSpeakerKeys[static_cast<std::size_t>(s)]; }
Speaker speaker_from_key(const std::string& key) {
    for (std::size_t i = 0; i < kSpeakerKeys.size(); ++i)
        if (kSpeakerKeys[i] == key) return static_cast<Speaker>(i);
    throw Error("unknown speaker: " + key);
}
const std::string& status_key(TranscriptStatus s) {
    return kStatusKeys[static_cast<std::size_t>(s)];
}
TranscriptStatus status_from_key(const std::string& key) {
    for (std::size_t i = 0; i < kStatusKeys.size(); ++i)
        if (kStatusKeys[i] == key) return static_cast<TranscriptStatus>(i);
    throw Error("unknown status: " + key);
}
const std::string& finding_kind_key(FindingKind k) {
    return kFindingKeys[static_cast<std::size_t>(k)];
}

std::vector<ValidationFinding> validate_transcript(const Transcript& transcript, int safety_cap) {
    std::vector<ValidationFinding> findings;
    const auto& messages = transcript.messages;

    for (std::size_t i = 0; i < messages.size(); ++i) {
        if (messages[i].index != static_cast<int>(i)) {
            findings.push_back({FindingKind::BadIndexing,
                                fmt::format("message {} carries index {}", i, messages[i].index)});
            break;
        }
    }

    std::set<Stage> seen;
    for (const auto& m : messages) seen.insert(m.stage);
    for (Stage stage : kStageOrder) {
        if (!seen.count(stage))
            findings.push_back({FindingKind::MissingStage,
                                fmt::format("no message in stage {}", stage_display_name(stage))});
    }

    for (std::size_t i = 1; i < messages.size(); ++i) {
        if (stage_index(messages[i].stage) < stage_index(messages[i - 1].stage)) {
            findings.push_back(
                {FindingKind::OutOfOrderStages,
                 fmt::format("{} follows {} at message {}",
                             stage_display_name(messages[i].stage),
                             stage_display_name(messages[i - 1].stage), i)});
            break;
        }
    }

    for (std::size_t i = 1; i < messages.size(); ++i) {
        if (messages[i].speaker == messages[i - 1].speaker) {
            findings.push_back({FindingKind::NonAlternatingSpeakers,
                                fmt::format("messages {} and {} share a speaker", i - 1, i)});
            break;
        }
    }

    int diagnosis_messages = 0;
    for (const auto& m : messages) {
        if (m.speaker == Speaker::Sensemaker && m.stage == Stage::ProvidingInformation)
            ++diagnosis_messages;
    }
    if (diagnosis_messages == 0)
        findings.push_back({FindingKind::MissingDiagnosisMessage,
                            "no sensemaker message in Providing Information"});
    else if (diagnosis_messages > 1)
        findings.push_back({FindingKind::DuplicateDiagnosisMessage,
                            fmt::format("{} sensemaker messages in Providing Information",
                                        diagnosis_messages)});

    const bool ends_with_exit = !messages.empty() &&
                                messages.back().stage == Stage::Exit &&
                                messages.back().speaker == Speaker::Sensemaker;
    if (static_cast<int>(messages.size()) > safety_cap ||
        (static_cast<int>(messages.size()) == safety_cap && !ends_with_exit)) {
        findings.push_back({FindingKind::SafetyCapHit,
                            fmt::format("{} messages against a cap of {}", messages.size(),
                                        safety_cap)});
    }

    for (const auto& m : messages) {
        if (trim(m.text).empty()) {
            findings.push_back(
                {FindingKind::EmptyMessageText, fmt::format("message {} is empty", m.index)});
            break;
        }
    }

    // Exit terminates the conversation: nothing may follow its first message,
    // and the speaker must be the sensemaker.
    for (std::size_t i = 0; i < messages.size(); ++i) {
        if (messages[i].stage != Stage::Exit) continue;
        if (i + 1 != messages.size() || messages[i].speaker != Speaker::Sensemaker)
            findings.push_back({FindingKind::ExitNotTerminal,
                                fmt::format("Exit message at index {} of {}", i, messages.size())});
        break;
    }

    return findings;
}

// ---- serialization ----

nlohmann::ordered_json transcript_to_json(const Transcript& t) {
    ordered_json messages = ordered_json::array();
    for (const auto& m : t.messages) {
        ordered_json jm{
            {"index", m.index},
            {"speaker", speaker_key(m.speaker)},
            {"stage", stage_key(m.stage)},
            {"text", m.text},
        };
        if (m.mode) jm["mode"] = actors::patient_mode_key(*m.mode);
        if (!m.used_facts.empty()) jm["used_facts"] = m.used_facts;
        messages.push_back(std::move(jm));
    }
    ordered_json counts = ordered_json::object();
    for (const auto& [stage, count] : t.stage_message_counts) counts[stage_key(stage)] = count;

    ordered_json j{
        {"schema_version", kDatasetSchemaVersion},
        {"conversation_id", t.conversation_id},
        {"case_id", t.case_id},
        {"persona",
         {{"dominant_trait", corpus::trait_key(t.persona.dominant_trait)},
          {"literacy", corpus::literacy_key(t.persona.literacy)},
          {"intent", corpus::intent_key(t.persona.intent)},
          {"goal", corpus::goal_key(t.persona.goal)}}},
        {"sensemaker_model", t.sensemaker_model},
        {"patient_model", t.patient_model},
        {"gt_diagnosis", t.gt_diagnosis},
        {"status", status_key(t.status)},
        {"seed", t.seed},
        {"stage_message_counts", std::move(counts)},
        {"messages", std::move(messages)},
    };
    if (t.error_turn) j["error_turn"] = *t.error_turn;
    if (!t.error_note.empty()) j["error_note"] = t.error_note;
    return j;
}

Transcript transcript_from_json(const nlohmann::ordered_json& j) {
    const long long version = j.at("schema_version").get<long long>();
    if (version != kDatasetSchemaVersion) throw SchemaVersionMismatch(version);

    Transcript t;
    t.conversation_id = j.at("conversation_id").get<std::string>();
    t.case_id = j.at("case_id").get<std::string>();
    const auto& p = j.at("persona");
    t.persona.dominant_trait = corpus::trait_from_key(p.at("dominant_trait"));
    t.persona.literacy = corpus::literacy_from_key(p.at("literacy"));
    t.persona.intent = corpus::intent_from_key(p.at("intent"));
    t.persona.goal = corpus::goal_from_key(p.at("goal"));
    t.sensemaker_model = j.at("sensemaker_model").get<std::string>();
    t.patient_model = j.at("patient_model").get<std::string>();
    t.gt_diagnosis = j.at("gt_diagnosis").get<std::string>();
    t.status = status_from_key(j.at("status"));
    t.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : j.at("stage_message_counts").items())
        t.stage_message_counts[stage_from_key(key)] = value.get<int>();
    for (const auto& jm : j.at("messages")) {
        Message m;
        m.index = jm.at("index").get<int>();
        m.speaker = speaker_from_key(jm.at("speaker"));
        m.stage = stage_from_key(jm.at("stage"));
        m.text = jm.at("text").get<std::string>();
        if (jm.contains("mode")) m.mode = actors::patient_mode_from_key(jm.at("mode"));
        if (jm.contains("used_facts")) m.used_facts = jm.at("used_facts").get<std::vector<std::size_t>>();
        t.messages.push_back(std::move(m));
    }
    if (j.contains("error_turn")) t.error_turn = j.at("error_turn").get<int>();
    if (j.contains("error_note")) t.error_note = j.at("error_note").get<std::string>();
    return t;
}

void write_dataset(const std::vector<Transcript>& transcripts,
                   const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot write dataset: " + path.string());
    for (const auto& t : transcripts) out << transcript_to_json(t).dump() << '\n';
}

std::vector<Transcript> read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read dataset: " + path.string());
    std::vector<Transcript> transcripts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            transcripts.push_back(transcript_from_json(ordered_json::parse(line)));
        } catch (const SchemaVersionMismatch&) {
            throw;
        } catch (const std::exception& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    return transcripts;
}

// ---- statistics ----

StageStats stage_statistics(const std::vector<Transcript>& transcripts) {
    if (transcripts.empty()) throw EmptyDataset();
    StageStats stats;
    stats.transcript_count = transcripts.size();
    double total = 0;
    for (Stage stage : kStageOrder) stats.mean_per_stage[stage] = 0;
    for (const auto& t : transcripts) {
        total += static_cast<double>(t.messages.size());
        for (const auto& m : t.messages) stats.mean_per_stage[m.stage] += 1;
    }
    for (auto& [stage, sum] : stats.mean_per_stage)
        sum /= static_cast<double>(transcripts.size());
    stats.overall_mean = total / static_cast<double>(transcripts.size());
    return stats;
}

std::string format_stage_table(const StageStats& stats) {
    std::string out =
        fmt::format("{:<28} {:>10}\n", "Stage", "Avg. msgs");
    for (Stage stage : kStageOrder)
        out += fmt::format("{:<28} {:>10.2f}\n", stage_display_name(stage),
                           stats.mean_per_stage.at(stage));
    out += fmt::format("{:<28} {:>10.2f}\n", "Overall", stats.overall_mean);
    return out;
}

}  // namespace mhsense::dialogue
