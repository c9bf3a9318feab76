#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mhsense/actors/prompt_assets.hpp"
#include "mhsense/actors/stage.hpp"
#include "mhsense/corpus/corpus.hpp"
#include "mhsense/gateway/llm_client.hpp"

namespace mhsense::actors {

enum class PatientMode { Start, Factual, ClosedWorldDenial, Affirmative, Contextual };
enum class RequestType { Background, NonBackground };

const std::string& patient_mode_key(PatientMode);
PatientMode patient_mode_from_key(const std::string&);

// Outcome of the fact-selection judge: at most three facts, resolved against
// the persona's fact list by their original numbering.
struct FactSelection {
    std::vector<std::size_t> indices;  // 0-based into the persona fact list
    std::vector<corpus::AtomicFact> matched;
    std::string reasoning;

    bool empty() const { return matched.empty(); }
};

struct PatientMessage {
    std::string text;
    std::vector<std::size_t> used_facts;
    PatientMode mode = PatientMode::Contextual;
};

// Generates patient utterances: fact-grounded replies styled by persona,
// closed-world denials for unknown background information, affirmative
// replies for next-step questions.
class PatientActor {
public:
    PatientActor(gateway::LlmClient client, const PromptAssets& assets, int max_tokens = 400);

    FactSelection match_facts(const std::string& question,
                              const std::vector<corpus::AtomicFact>& facts) const;

    PatientMessage gen_start_message(const corpus::PatientPersona& persona) const;

    // Derived from the chosen branch of the no-fact reply judge: a negative
    // answer marks a background-information request, an affirmative one a
    // decision/emotion/next-step request.
    RequestType classify_request_type(const std::string& question,
                                      const corpus::PatientPersona& persona) const;

    // The closed-world clause is rendered only for stages up to and including
    // Decision Making.
    PatientMessage gen_reply_with_facts(const std::string& question, const FactSelection& selection,
                                        const corpus::PatientPersona& persona, Stage stage) const;

    PatientMessage gen_no_fact_reply(const std::string& question,
                                     const corpus::PatientPersona& persona,
                                     RequestType request_type) const;

    // One full patient turn: match facts, then either reply with facts or
    // branch on the request type.
    PatientMessage patient_step(const std::string& sensemaker_msg,
                                const corpus::PatientPersona& persona, Stage stage) const;

    static std::string render_fact_list(const std::vector<corpus::AtomicFact>& facts);

private:
    struct NoFactReply {
        RequestType request_type;
        std::string answer;
    };
    NoFactReply no_fact_judge(const std::string& question,
                              const corpus::PatientPersona& persona) const;
    gateway::Bindings persona_bindings(const corpus::PatientPersona& persona) const;

    gateway::LlmClient client_;
    const PromptAssets& assets_;
    int max_tokens_;
};

}  // namespace mhsense::actors
