#pragma once

#include <atomic>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mhsense/actors/prompt_assets.hpp"
#include "mhsense/actors/stage.hpp"
#include "mhsense/corpus/corpus.hpp"
#include "mhsense/gateway/llm_client.hpp"
#include "mhsense/util.hpp"

namespace mhsense::actors {

// Mutable per-conversation state owned by the dialogue engine. The fact store
// grows monotonically and own_messages is append-only.
struct StageState {
    Stage current = Stage::FosteringRelationship;
    std::vector<corpus::AtomicFact> facts;
    std::vector<std::string> own_messages;
    int turns_in_stage = 0;
    int medium_confidence_streak = 0;
};

enum class StageVerdict { Stay, Move };

struct StageDecision {
    StageVerdict verdict = StageVerdict::Stay;
    int confidence = 0;  // 1-10
    std::string reasoning;
};

struct CandidateSet {
    std::vector<std::string> candidates;  // pairwise distinct
    std::string reasoning;
};

enum class FactMatchLabel { FactPresent, FactNotPresent };

// Generates sensemaker utterances: updates the fact store from the patient
// message, decides stage transitions, produces three candidates, filters
// redundancy, and emits one non-redundant stage-appropriate message.
class SensemakerActor {
public:
    // The reasoning client drives stage determination and message generation;
    // the utility client drives fact extraction/matching and the redundancy
    // check.
    SensemakerActor(gateway::LlmClient reasoning_client, gateway::LlmClient utility_client,
                    const PromptAssets& assets, int reasoning_max_tokens = 15000,
                    int utility_max_tokens = 1000);

    // Third-person atomic facts stated in the patient message; empty for bare
    // acknowledgements.
    std::vector<corpus::AtomicFact> extract_facts(const std::string& patient_msg) const;

    // One label per input fact, order preserved, input text kept verbatim.
    // FactNotPresent facts are appended to memory by the caller.
    std::vector<std::pair<corpus::AtomicFact, FactMatchLabel>> match_new_facts(
        const std::vector<corpus::AtomicFact>& new_facts,
        const std::vector<corpus::AtomicFact>& memory) const;

    // Stage decision for the current turn. ProvidingInformation always moves
    // on, and a verdict/confidence conflict trusts the verdict (counted).
    StageDecision determine_next_stage(const StageState& state,
                                       const std::string& patient_msg) const;

    CandidateSet generate_candidates(const StageState& state,
                                     const std::string& patient_msg) const;

    // Candidates the judge labels RedundantNotStatement, order preserved.
    std::vector<std::string> filter_redundant(const CandidateSet& candidates,
                                              const std::vector<std::string>& memory) const;

    // One full sensemaker turn (fact update, stage decision, generation,
    // redundancy filter, seeded sampling). Returns no message when the stage
    // advanced to Exit; the engine then emits the Exit message.
    std::pair<std::optional<std::string>, StageState> sensemaker_step(
        StageState state, const std::string& patient_msg, SplitMix64& rng) const;

    // Concluding message, generated with the generic stage prompt bound to
    // the Exit goal. No patient reply follows it.
    std::string gen_exit_message(const StageState& state, const std::string& patient_msg,
                                 SplitMix64& rng) const;

    long stage_conflicts() const { return stage_conflicts_->load(); }

private:
    gateway::Bindings generation_bindings(const StageState& state,
                                          const std::string& patient_msg) const;
    std::vector<std::string> parse_candidates(const gateway::LabeledOutput& parsed) const;
    void apply_fact_update(StageState& state, const std::string& patient_msg) const;

    gateway::LlmClient reasoning_;
    gateway::LlmClient utility_;
    const PromptAssets& assets_;
    int reasoning_max_tokens_;
    int utility_max_tokens_;
    std::shared_ptr<std::atomic<long>> stage_conflicts_;
};

// Memory entries sharing text with the candidate (either containing it or
// contained in it); the all-redundant fallback picks the candidate with the
// fewest such overlaps.
std::size_t substring_overlaps(const std::string& candidate,
                               const std::vector<std::string>& memory);

}  // namespace mhsense::actors
