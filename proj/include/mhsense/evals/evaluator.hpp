#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhsense/dialogue/transcript.hpp"
#include "mhsense/evals/smog.hpp"
#include "mhsense/gateway/llm_client.hpp"

namespace mhsense::evals {

enum class HbmMetric { Susceptibility, Severity, Benefits, FlowCorrectness };

const std::string& hbm_metric_key(HbmMetric);

struct LikertScore {
    HbmMetric metric = HbmMetric::Susceptibility;
    int score = 0;  // 1-4
    std::string reasoning;
    std::string judge_model;

    bool operator==(const LikertScore&) const = default;
};

enum class DiagMode { Hard, Soft };

struct DiagnosisResult {
    std::string extracted_diagnosis;
    int hard = 0;
    int soft = 0;
    std::string hard_reasoning;
    std::string soft_reasoning;
    bool contract_warning = false;  // hard=1 with soft=0

    bool operator==(const DiagnosisResult&) const = default;
};

struct EvalRecord {
    std::string conversation_id;
    std::string model;  // sensemaker model tag, used by report --compare
    dialogue::PersonaSummary persona;
    std::optional<LikertScore> susceptibility;
    std::optional<LikertScore> severity;
    std::optional<LikertScore> benefits;
    std::optional<LikertScore> flow;
    std::optional<DiagnosisResult> diagnosis;
    std::optional<SmogScore> smog;
    int sensemaker_message_count = 0;
    std::map<std::string, std::string> errors;  // metric -> failure note
    std::vector<std::string> warnings;

    bool complete() const {
        return susceptibility && severity && benefits && flow && diagnosis && smog;
    }
};

// Scores transcripts on the six evaluation axes. Judges see the conversation
// as speaker-prefixed lines; SMOG is computed over sensemaker messages only.
class Evaluator {
public:
    explicit Evaluator(gateway::LlmClient judge_client, int max_tokens = 1000);

    LikertScore judge_hbm(const dialogue::Transcript&, HbmMetric metric) const;
    LikertScore judge_flow(const dialogue::Transcript&) const;

    // The sole sensemaker message in Providing Information. Throws
    // MissingDiagnosisMessage for transcripts without one (or not Complete).
    static const dialogue::Message& extract_diagnosis(const dialogue::Transcript&);

    // Binary accuracy with the judge's reasoning. Throws NonBinaryScore after
    // retries.
    std::pair<int, std::string> diag_accuracy(const std::string& diagnosis_msg,
                                              const std::string& gt_diagnosis,
                                              DiagMode mode) const;

    // All metrics; per-metric failures are flagged in the record and the rest
    // retained. The transcript itself is never modified.
    EvalRecord evaluate_transcript(const dialogue::Transcript&) const;

    static std::string render_conversation(const dialogue::Transcript&);

private:
    LikertScore judge_likert(const dialogue::Transcript&, HbmMetric metric,
                             const std::string& template_name) const;

    gateway::LlmClient judge_;
    int max_tokens_;
};

// EvalRecord JSON Lines.
void write_eval_records(const std::vector<EvalRecord>&, const std::filesystem::path& path,
                        bool append = false);
std::vector<EvalRecord> read_eval_records(const std::filesystem::path& path);

}  // namespace mhsense::evals
