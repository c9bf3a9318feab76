#include "mhsense/actors/patient_actor.hpp"

#include <array>
#include <cctype>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"
#include "mhsense/util.hpp"

namespace mhsense::actors {

using corpus::AtomicFact;
using corpus::PatientPersona;
using gateway::Bindings;

namespace {

constexpr std::size_t kMaxSelectedFacts = 3;

const std::array<std::string, 5> kModeKeys = {"start", "factual", "closed_world_denial",
                                              "affirmative", "contextual"};

// A no-fact answer counts as the negative branch when it opens with one of
// the denial patterns the prompt prescribes.
bool answer_is_negative(const std::string& answer) {
    const std::string t = trim(answer);
    if (starts_with_ci(t, "no") &&
        (t.size() == 2 || !std::isalnum(static_cast<unsigned char>(t[2]))))
        return true;
    return starts_with_ci(t, "i'm not sure") || starts_with_ci(t, "i am not sure") ||
           starts_with_ci(t, "i’m not sure");
}

}  // namespace

const std::string& patient_mode_key(PatientMode mode) {
    return kModeKeys[static_cast<std::size_t>(mode)];
}

PatientMode patient_mode_from_key(const std::string& key) {
    for (std::size_t i = 0; i < kModeKeys.size(); ++i) {
        if (kModeKeys[i] == key) return static_cast<PatientMode>(i);
    }
    throw Error("unknown patient mode: " + key);
}

PatientActor::PatientActor(gateway::LlmClient client, const PromptAssets& assets, int max_tokens)
    : client_(std::move(client)), assets_(assets), max_tokens_(max_tokens) {}

std::string PatientActor::render_fact_list(const std::vector<AtomicFact>& facts) {
    std::string out;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        out += std::to_string(i + 1);
        out += ". ";
        out += facts[i].text;
        if (i + 1 < facts.size()) out += '\n';
    }
    return out;
}

Bindings PatientActor::persona_bindings(const PatientPersona& persona) const {
    auto level = [&](corpus::Trait t) { return persona.trait_is_high(t) ? "High" : "Low"; };
    return {
        {"personality_trait_definitions", assets_.trait_definitions()},
        {"openness", level(corpus::Trait::Openness)},
        {"conscientiousness", level(corpus::Trait::Conscientiousness)},
        {"extraversion", level(corpus::Trait::Extraversion)},
        {"agreeableness", level(corpus::Trait::Agreeableness)},
        {"neuroticism", level(corpus::Trait::Neuroticism)},
        {"medical_literacy_level", corpus::literacy_display_name(persona.literacy) + "\n" +
                                       assets_.literacy_text(persona.literacy)},
    };
}

FactSelection PatientActor::match_facts(const std::string& question,
                                        const std::vector<AtomicFact>& facts) const {
    const auto parsed = client_.call_labeled("patient_fact_selection",
                                             {{"question", question},
                                              {"patient_info", render_fact_list(facts)}},
                                             max_tokens_, {"REASONING", "FACTS"});
    FactSelection selection;
    selection.reasoning = parsed.text("REASONING");

    const std::string& block = parsed.text("FACTS");
    if (block.find("NO MATCH") != std::string::npos) return selection;

    for (const auto& raw : split_lines(block)) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        std::size_t digits = 0;
        while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
            ++digits;
        if (digits == 0) continue;  // prose between listed facts
        const unsigned long number = std::stoul(line.substr(0, digits));
        if (number < 1 || number > facts.size()) throw UnresolvableFactIndex(line);
        const std::size_t index = number - 1;
        bool duplicate = false;
        for (std::size_t seen : selection.indices) duplicate |= (seen == index);
        if (duplicate) continue;
        if (selection.indices.size() == kMaxSelectedFacts) {
            log::warn("fact selection cited more than {} facts; keeping the first {}",
                      kMaxSelectedFacts, kMaxSelectedFacts);
            break;
        }
        selection.indices.push_back(index);
        selection.matched.push_back(facts[index]);
    }
    return selection;
}

PatientMessage PatientActor::gen_start_message(const PatientPersona& persona) const {
    Bindings bindings = persona_bindings(persona);
    bindings["patient_info"] = render_fact_list(persona.profile.facts);
    const auto parsed = client_.call_labeled("patient_start_message", bindings, max_tokens_,
                                             {"REASONING", "START_MESSAGE"});
    PatientMessage message;
    message.text = parsed.text("START_MESSAGE");
    message.mode = PatientMode::Start;
    return message;
}

PatientActor::NoFactReply PatientActor::no_fact_judge(const std::string& question,
                                                      const PatientPersona& persona) const {
    Bindings bindings = persona_bindings(persona);
    bindings["patient_info"] = render_fact_list(persona.profile.facts);
    bindings["question"] = question;
    const auto parsed = client_.call_labeled("patient_answer_no_facts", bindings, max_tokens_,
                                             {"REASONING", "ANSWER"});
    const std::string& answer = parsed.text("ANSWER");
    return {answer_is_negative(answer) ? RequestType::Background : RequestType::NonBackground,
            answer};
}

RequestType PatientActor::classify_request_type(const std::string& question,
                                                const PatientPersona& persona) const {
    return no_fact_judge(question, persona).request_type;
}

PatientMessage PatientActor::gen_reply_with_facts(const std::string& question,
                                                  const FactSelection& selection,
                                                  const PatientPersona& persona,
                                                  Stage stage) const {
    if (selection.empty()) throw Error("gen_reply_with_facts requires a non-empty selection");
    // Beyond Decision Making the closed-world instruction is dropped to let
    // the conversation flow naturally.
    const bool closed_world = stage_index(stage) <= stage_index(Stage::DecisionMaking);
    const std::string template_name =
        closed_world ? "patient_answer_with_facts" : "patient_answer_with_facts_late_stage";

    Bindings bindings = persona_bindings(persona);
    bindings["patient_info"] = render_fact_list(selection.matched);
    bindings["question"] = question;

    PatientMessage message;
    message.text = trim(client_.call_text(template_name, bindings, max_tokens_));
    message.used_facts = selection.indices;
    message.mode = PatientMode::Factual;
    return message;
}

PatientMessage PatientActor::gen_no_fact_reply(const std::string& question,
                                               const PatientPersona& persona,
                                               RequestType request_type) const {
    const NoFactReply reply = no_fact_judge(question, persona);
    PatientMessage message;
    message.text = reply.answer;
    message.mode = request_type == RequestType::Background ? PatientMode::ClosedWorldDenial
                                                           : PatientMode::Affirmative;
    return message;
}

PatientMessage PatientActor::patient_step(const std::string& sensemaker_msg,
                                          const PatientPersona& persona, Stage stage) const {
    const FactSelection selection = match_facts(sensemaker_msg, persona.profile.facts);
    if (!selection.empty()) return gen_reply_with_facts(sensemaker_msg, selection, persona, stage);

    // Request typing and the reply come from the same judge call.
    const NoFactReply reply = no_fact_judge(sensemaker_msg, persona);
    PatientMessage message;
    message.text = reply.answer;
    message.mode = reply.request_type == RequestType::Background ? PatientMode::ClosedWorldDenial
                                                                 : PatientMode::Affirmative;
    return message;
}

}  // namespace mhsense::actors
