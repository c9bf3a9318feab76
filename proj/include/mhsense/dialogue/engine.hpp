#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mhsense/actors/patient_actor.hpp"
#include "mhsense/actors/sensemaker_actor.hpp"
#include "mhsense/dialogue/transcript.hpp"

namespace mhsense::dialogue {

struct EngineConfig {
    int safety_cap = kDefaultSafetyCap;  // total messages; beyond it the transcript is Incomplete
    std::uint64_t run_seed = 0;
    std::string sensemaker_model = "demo";
    std::string patient_model = "demo";
};

// Orchestrates the patient/sensemaker turn loop: start message first, then
// alternating turns until the Exit message (which takes no patient reply) or
// the safety cap. Every message is annotated with the sensemaker's stage at
// emission time; patient messages inherit the current stage.
class DialogueEngine {
public:
    DialogueEngine(actors::PatientActor patient, actors::SensemakerActor sensemaker,
                   EngineConfig config);

    Transcript run_conversation(const corpus::PatientPersona& persona) const;

private:
    actors::PatientActor patient_;
    actors::SensemakerActor sensemaker_;
    EngineConfig config_;
};

// Runs conversations over a bounded worker pool; output order matches input
// order regardless of scheduling.
std::vector<Transcript> run_conversations(const DialogueEngine& engine,
                                          const std::vector<corpus::PatientPersona>& personas,
                                          int parallelism);

}  // namespace mhsense::dialogue
