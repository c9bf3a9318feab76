#include "mhsense/dialogue/engine.hpp"

#include <atomic>
#include <thread>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"
#include "mhsense/util.hpp"

namespace mhsense::dialogue {

using actors::PatientMessage;
using actors::StageState;

DialogueEngine::DialogueEngine(actors::PatientActor patient, actors::SensemakerActor sensemaker,
                               EngineConfig config)
    : patient_(std::move(patient)), sensemaker_(std::move(sensemaker)), config_(config) {}

Transcript DialogueEngine::run_conversation(const corpus::PatientPersona& persona) const {
    Transcript t;
    t.conversation_id = persona.persona_id();
    t.case_id = persona.profile.case_study.id;
    t.persona = {persona.dominant_trait, persona.literacy, persona.profile.intent,
                 persona.profile.goal};
    t.sensemaker_model = config_.sensemaker_model;
    t.patient_model = config_.patient_model;
    t.gt_diagnosis = persona.profile.case_study.gt_diagnosis;
    t.seed = derive_seed(config_.run_seed, t.conversation_id);

    SplitMix64 rng(t.seed);
    StageState state;

    auto append = [&](Speaker speaker, const std::string& text, Stage stage,
                      std::optional<actors::PatientMode> mode,
                      std::vector<std::size_t> used_facts) {
        Message m;
        m.index = static_cast<int>(t.messages.size());
        m.speaker = speaker;
        m.stage = stage;
        m.text = text;
        m.mode = mode;
        m.used_facts = std::move(used_facts);
        t.messages.push_back(std::move(m));
        t.stage_message_counts[stage] += 1;
    };

    int turn = 0;
    try {
        const PatientMessage start = patient_.gen_start_message(persona);
        append(Speaker::Patient, start.text, state.current, start.mode, start.used_facts);

        std::string last_patient_text = start.text;
        bool capped = false;

        while (true) {
            if (static_cast<int>(t.messages.size()) >= config_.safety_cap) {
                capped = true;
                break;
            }
            ++turn;
            auto [message, new_state] = sensemaker_.sensemaker_step(state, last_patient_text, rng);
            state = std::move(new_state);

            if (!message) {
                // Stage ran past Responding to Emotions without an utterance;
                // conclude with the Exit message.
                const std::string exit_text =
                    sensemaker_.gen_exit_message(state, last_patient_text, rng);
                append(Speaker::Sensemaker, exit_text, Stage::Exit, std::nullopt, {});
                break;
            }
            append(Speaker::Sensemaker, *message, state.current, std::nullopt, {});
            if (state.current == Stage::Exit) break;

            if (static_cast<int>(t.messages.size()) >= config_.safety_cap) {
                capped = true;
                break;
            }
            const PatientMessage reply = patient_.patient_step(*message, persona, state.current);
            append(Speaker::Patient, reply.text, state.current, reply.mode, reply.used_facts);
            last_patient_text = reply.text;
        }

        const auto findings = validate_transcript(t, config_.safety_cap);
        t.status = (findings.empty() && !capped) ? TranscriptStatus::Complete
                                                 : TranscriptStatus::Incomplete;
    } catch (const Error& e) {
        t.status = TranscriptStatus::Error;
        t.error_turn = turn;
        t.error_note = e.what();
        log::warn("conversation {} failed at turn {}: {}", t.conversation_id, turn, e.what());
    }
    return t;
}

std::vector<Transcript> run_conversations(const DialogueEngine& engine,
                                          const std::vector<corpus::PatientPersona>& personas,
                                          int parallelism) {
    std::vector<Transcript> results(personas.size());
    if (personas.empty()) return results;

    const int workers =
        std::max(1, std::min<int>(parallelism, static_cast<int>(personas.size())));
    std::atomic<std::size_t> cursor{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = cursor.fetch_add(1);
                if (i >= personas.size()) return;
                results[i] = engine.run_conversation(personas[i]);
            }
        });
    }
    for (auto& thread : pool) thread.join();
    return results;
}

}  // namespace mhsense::dialogue
