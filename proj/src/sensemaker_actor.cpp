#include "mhsense/actors/sensemaker_actor.hpp"

#include <algorithm>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"

namespace mhsense::actors {

using corpus::AtomicFact;
using gateway::Bindings;
using gateway::LabeledOutput;

namespace {

constexpr int kMaxTurnsPerStage = 5;
constexpr int kMediumConfidenceLimit = 2;  // second consecutive medium-confidence Stay moves on
constexpr std::size_t kCandidateCount = 3;

std::string render_dash_list(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += "- ";
        out += items[i];
        if (i + 1 < items.size()) out += '\n';
    }
    return out;
}

std::string render_fact_lines(const std::vector<AtomicFact>& facts) {
    std::vector<std::string> texts;
    texts.reserve(facts.size());
    for (const auto& f : facts) texts.push_back(f.text);
    return render_dash_list(texts);
}

}  // namespace

std::size_t substring_overlaps(const std::string& candidate,
                               const std::vector<std::string>& memory) {
    std::size_t overlaps = 0;
    for (const auto& entry : memory) {
        if (entry.find(candidate) != std::string::npos ||
            candidate.find(entry) != std::string::npos)
            ++overlaps;
    }
    return overlaps;
}

SensemakerActor::SensemakerActor(gateway::LlmClient reasoning_client,
                                 gateway::LlmClient utility_client, const PromptAssets& assets,
                                 int reasoning_max_tokens, int utility_max_tokens)
    : reasoning_(std::move(reasoning_client)),
      utility_(std::move(utility_client)),
      assets_(assets),
      reasoning_max_tokens_(reasoning_max_tokens),
      utility_max_tokens_(utility_max_tokens),
      stage_conflicts_(std::make_shared<std::atomic<long>>(0)) {}

std::vector<AtomicFact> SensemakerActor::extract_facts(const std::string& patient_msg) const {
    if (patient_msg.empty()) throw Error("patient message is empty");
    const std::string reply =
        utility_.call_text("fact_extraction", {{"user_message", patient_msg}}, utility_max_tokens_);
    std::vector<AtomicFact> facts;
    try {
        for (auto& item : gateway::parse_hash_list(reply))
            facts.push_back({std::move(item), corpus::FactKind::General});
    } catch (const EmptyList&) {
        // acknowledgements carry no factual content
    }
    return facts;
}

std::vector<std::pair<AtomicFact, FactMatchLabel>> SensemakerActor::match_new_facts(
    const std::vector<AtomicFact>& new_facts, const std::vector<AtomicFact>& memory) const {
    if (new_facts.empty()) return {};

    std::vector<std::string> new_texts;
    for (const auto& f : new_facts) new_texts.push_back(f.text);
    std::vector<std::string> memory_texts;
    for (const auto& f : memory) memory_texts.push_back(f.text);

    const std::string reply = utility_.call_text(
        "fact_matching",
        {{"new_facts", render_dash_list(new_texts)},
         {"memory_of_patient_facts", render_dash_list(memory_texts)}},
        utility_max_tokens_);

    const auto items = gateway::parse_hash_list(reply);
    if (items.size() != new_facts.size()) throw LabelCountMismatch(new_facts.size(), items.size());

    std::vector<std::pair<AtomicFact, FactMatchLabel>> out;
    out.reserve(new_facts.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto [_, label] = gateway::split_label_suffix(items[i]);
        FactMatchLabel match;
        if (label == "FactPresent") match = FactMatchLabel::FactPresent;
        else if (label == "FactNotPresent") match = FactMatchLabel::FactNotPresent;
        else throw UnknownLabelToken(label);
        out.emplace_back(new_facts[i], match);  // input text, not the echo
    }
    return out;
}

StageDecision SensemakerActor::determine_next_stage(const StageState& state,
                                                    const std::string& patient_msg) const {
    if (state.current == Stage::Exit) throw Error("no stage decision at Exit");
    const Stage next = *next_stage(state.current);

    const auto parsed = reasoning_.call_labeled(
        "stage_determination",
        {
            {"current_stage_name", stage_display_name(state.current)},
            {"next_stage_name", stage_display_name(next)},
            {"next_stage_reasoning", assets_.stage_rationale(state.current)},
            {"patient_message", patient_msg},
            {"patient_facts", render_fact_lines(state.facts)},
            {"your_memory", render_dash_list(state.own_messages)},
        },
        reasoning_max_tokens_, {"OUTPUT_REASONING", "OUTPUT_CONFIDENCE", "OUTPUT_STAGE"},
        {"OUTPUT_CONFIDENCE"});

    StageDecision decision;
    decision.reasoning = parsed.text("OUTPUT_REASONING");
    const long long confidence = parsed.number("OUTPUT_CONFIDENCE");
    decision.confidence = static_cast<int>(std::clamp<long long>(confidence, 1, 10));

    const std::string token = trim(parsed.text("OUTPUT_STAGE"));
    if (token == "MOVENEXTSTAGE") decision.verdict = StageVerdict::Move;
    else if (token == "STAYCURRENTSTAGE") decision.verdict = StageVerdict::Stay;
    else throw UnknownStageToken(token);

    // The verdict is what the pipeline consumes; the confidence thresholds
    // live inside the prompt. Disagreements are counted, not resolved.
    const bool conflict =
        (decision.verdict == StageVerdict::Stay && decision.confidence >= 7) ||
        (decision.verdict == StageVerdict::Move && decision.confidence <= 3);
    if (conflict) {
        stage_conflicts_->fetch_add(1);
        log::warn("stage verdict {} disagrees with confidence {}",
                  decision.verdict == StageVerdict::Move ? "MOVENEXTSTAGE" : "STAYCURRENTSTAGE",
                  decision.confidence);
    }

    // Providing Information hands over after its single diagnosis message.
    if (state.current == Stage::ProvidingInformation &&
        decision.verdict != StageVerdict::Move) {
        decision.verdict = StageVerdict::Move;
        decision.reasoning += " [forced: Providing Information always moves on]";
    }
    return decision;
}

Bindings SensemakerActor::generation_bindings(const StageState& state,
                                              const std::string& patient_msg) const {
    return {
        {"your_memory", render_dash_list(state.own_messages)},
        {"patient_facts", render_fact_lines(state.facts)},
        {"current_stage_goal", assets_.stage_goal(state.current)},
        {"current_stage_examples", assets_.stage_examples(state.current)},
        {"user_message", patient_msg},
    };
}

std::vector<std::string> SensemakerActor::parse_candidates(const LabeledOutput& parsed) const {
    auto items = gateway::parse_hash_list(parsed.text("OUTPUT_MESSAGE"));
    // Model duplicates are dropped before redundancy judging.
    std::vector<std::string> unique;
    for (auto& item : items) {
        if (std::find(unique.begin(), unique.end(), item) == unique.end())
            unique.push_back(std::move(item));
    }
    if (unique.size() < kCandidateCount)
        log::warn("generation returned {} candidate(s) instead of {}", unique.size(),
                  kCandidateCount);
    return unique;
}

CandidateSet SensemakerActor::generate_candidates(const StageState& state,
                                                  const std::string& patient_msg) const {
    std::string template_name = "message_generation_generic";
    if (state.current == Stage::GatheringInformation)
        template_name = "message_generation_gathering";
    else if (state.current == Stage::ProvidingInformation)
        template_name = "message_generation_providing";

    const auto parsed =
        reasoning_.call_labeled(template_name, generation_bindings(state, patient_msg),
                                reasoning_max_tokens_, {"OUTPUT_REASONING", "OUTPUT_MESSAGE"});
    CandidateSet set;
    set.reasoning = parsed.text("OUTPUT_REASONING");
    set.candidates = parse_candidates(parsed);
    return set;
}

std::vector<std::string> SensemakerActor::filter_redundant(
    const CandidateSet& candidates, const std::vector<std::string>& memory) const {
    if (candidates.candidates.empty()) return {};

    const std::string reply = utility_.call_text(
        "redundancy_check",
        {{"candidate_statements", render_dash_list(candidates.candidates)},
         {"statement_memory", render_dash_list(memory)}},
        utility_max_tokens_);

    const auto items = gateway::parse_hash_list(reply);
    if (items.size() != candidates.candidates.size())
        throw LabelCountMismatch(candidates.candidates.size(), items.size());

    std::vector<std::string> survivors;
    for (std::size_t i = 0; i < items.size(); ++i) {
        const auto [_, label] = gateway::split_label_suffix(items[i]);
        if (label == "RedundantNotStatement") survivors.push_back(candidates.candidates[i]);
        else if (label != "RedundantStatement") throw UnknownLabelToken(label);
    }
    return survivors;
}

void SensemakerActor::apply_fact_update(StageState& state, const std::string& patient_msg) const {
    const auto extracted = extract_facts(patient_msg);
    for (const auto& [fact, label] : match_new_facts(extracted, state.facts)) {
        if (label != FactMatchLabel::FactNotPresent) continue;
        const bool duplicate =
            std::any_of(state.facts.begin(), state.facts.end(),
                        [&](const AtomicFact& f) { return f.text == fact.text; });
        if (!duplicate) state.facts.push_back(fact);
    }
}

std::pair<std::optional<std::string>, StageState> SensemakerActor::sensemaker_step(
    StageState state, const std::string& patient_msg, SplitMix64& rng) const {
    if (state.current == Stage::Exit) throw Error("sensemaker_step entered at Exit");

    // Step 1: fact update, then the stage decision.
    apply_fact_update(state, patient_msg);

    const StageDecision decision = determine_next_stage(state, patient_msg);
    bool move;
    if (state.turns_in_stage >= kMaxTurnsPerStage) {
        move = true;  // stage cap outranks the judge
    } else if (decision.verdict == StageVerdict::Move) {
        move = true;
    } else if (decision.confidence >= 4 && decision.confidence <= 6) {
        // "stay for one or two more turns": the second consecutive
        // medium-confidence Stay forces the move.
        state.medium_confidence_streak += 1;
        move = state.medium_confidence_streak >= kMediumConfidenceLimit;
    } else {
        state.medium_confidence_streak = 0;
        move = false;
    }
    if (move) {
        state.current = *next_stage(state.current);
        state.turns_in_stage = 0;
        state.medium_confidence_streak = 0;
        if (state.current == Stage::Exit) return {std::nullopt, std::move(state)};
    }

    // Steps 2-3: candidates, redundancy filter, seeded sampling.
    CandidateSet set = generate_candidates(state, patient_msg);
    std::vector<std::string> survivors = filter_redundant(set, state.own_messages);

    if (survivors.empty()) {
        if (state.current == Stage::ProvidingInformation) {
            // The diagnosis message cannot be skipped; fall back to the least
            // overlapping candidate instead of advancing past the stage.
            survivors.push_back(*std::min_element(
                set.candidates.begin(), set.candidates.end(),
                [&](const std::string& a, const std::string& b) {
                    return substring_overlaps(a, state.own_messages) <
                           substring_overlaps(b, state.own_messages);
                }));
        } else {
            // Alg: advance a stage to avoid stagnation, regenerating once for
            // the new stage within the same turn.
            state.current = *next_stage(state.current);
            state.turns_in_stage = 0;
            state.medium_confidence_streak = 0;
            if (state.current == Stage::Exit) return {std::nullopt, std::move(state)};
            set = generate_candidates(state, patient_msg);
            survivors = filter_redundant(set, state.own_messages);
            if (survivors.empty()) {
                survivors.push_back(*std::min_element(
                    set.candidates.begin(), set.candidates.end(),
                    [&](const std::string& a, const std::string& b) {
                        return substring_overlaps(a, state.own_messages) <
                               substring_overlaps(b, state.own_messages);
                    }));
            }
        }
    }

    std::string message = survivors[rng.next_index(survivors.size())];
    state.own_messages.push_back(message);
    state.turns_in_stage += 1;
    return {std::move(message), std::move(state)};
}

std::string SensemakerActor::gen_exit_message(const StageState& state,
                                              const std::string& patient_msg,
                                              SplitMix64& rng) const {
    StageState exit_state = state;
    exit_state.current = Stage::Exit;
    const CandidateSet set = generate_candidates(exit_state, patient_msg);
    if (set.candidates.empty()) throw EmptyList("exit generation produced no candidates");
    return set.candidates[rng.next_index(set.candidates.size())];
}

}  // namespace mhsense::actors
