#include "mhsense/gateway/demo_backend.hpp"

#include <fmt/core.h>

#include <array>
#include <cctype>
#include <vector>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::gateway {

namespace {

std::string binding(const ChatRequest& request, const std::string& name) {
    auto it = request.bindings.find(name);
    return it == request.bindings.end() ? std::string{} : it->second;
}

// Longest alphabetic word of length >= 5 (first among ties); the anchor that
// ties generated messages to what the patient just said.
std::string salient_word(const std::string& text) {
    std::string best = "this";
    std::string current;
    auto consider = [&](std::string& word) {
        if (word.size() >= 5 && word.size() > best.size()) best = to_lower(word);
        word.clear();
    };
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            current.push_back(c);
        else
            consider(current);
    }
    consider(current);
    return best;
}

std::vector<std::string> dash_items(const std::string& block) {
    std::vector<std::string> items;
    for (const auto& raw : split_lines(block)) {
        const std::string line = trim(raw);
        if (line.rfind("- ", 0) == 0) items.push_back(trim(std::string_view(line).substr(2)));
    }
    return items;
}

std::vector<std::string> numbered_items(const std::string& block) {
    std::vector<std::string> items;
    for (const auto& raw : split_lines(block)) {
        const std::string line = trim(raw);
        std::size_t digits = 0;
        while (digits < line.size() && std::isdigit(static_cast<unsigned char>(line[digits])))
            ++digits;
        if (digits == 0 || digits + 1 >= line.size() || line[digits] != '.') continue;
        items.push_back(trim(std::string_view(line).substr(digits + 1)));
    }
    return items;
}

// "The patient reports X" -> "I report X"; rough but readable.
std::string first_person(const std::string& fact) {
    std::string text = fact;
    if (starts_with_ci(text, "the patient ")) text = text.substr(12);
    std::size_t space = text.find(' ');
    std::string verb = space == std::string::npos ? text : text.substr(0, space);
    const std::string lower_verb = to_lower(verb);
    if (lower_verb == "is") verb = "am";
    else if (lower_verb == "has") verb = "have";
    else if (lower_verb == "was") verb = "was";
    else if (verb.size() > 3 && verb.back() == 's' && verb[verb.size() - 2] != 's')
        verb.pop_back();
    if (space == std::string::npos) return "I " + verb;
    return "I " + verb + text.substr(space);
}

std::string sentence_snippet(const std::string& text, std::size_t max_words) {
    std::string out;
    std::size_t words = 0;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                if (words) out += ' ';
                out += current;
                current.clear();
                if (++words >= max_words) break;
            }
        } else if (c != '"') {
            current.push_back(c);
        }
    }
    if (words < max_words && !current.empty()) {
        if (words) out += ' ';
        out += current;
    }
    while (!out.empty() && (out.back() == ',' || out.back() == '.' || out.back() == ';'))
        out.pop_back();
    return out;
}

// ---- per-template handlers ----

std::string filter_reply(const ChatRequest& request) {
    const std::string narrative = to_lower(binding(request, "case_study"));
    const bool somatic = narrative.find("fracture") != std::string::npos ||
                         narrative.find("sprain") != std::string::npos ||
                         narrative.find("laceration") != std::string::npos;
    return somatic ? "LABEL: no" : "LABEL: yes";
}

std::string decomposition_reply(const ChatRequest& request) {
    const std::string narrative = binding(request, "patient_data");
    std::vector<std::string> vitals, general;
    std::string current;
    auto flush = [&] {
        const std::string sentence = trim(current);
        current.clear();
        if (sentence.empty()) return;
        const std::string lower = to_lower(sentence);
        const bool vital = lower.find("temperature") != std::string::npos ||
                           lower.find("blood pressure") != std::string::npos ||
                           lower.find("pulse") != std::string::npos ||
                           lower.find("respiratory rate") != std::string::npos;
        (vital ? vitals : general).push_back(sentence);
    };
    for (char c : narrative) {
        if (c == '.' || c == ';') flush();
        else current.push_back(c);
    }
    flush();

    std::string out = "PATIENT VITAL FACTS:\n";
    for (const auto& v : vitals) out += "- " + v + ".\n";
    out += "PATIENT FACTS:\n";
    for (const auto& g : general) out += "- " + g + ".\n";
    return out;
}

std::string vignette_reply(const ChatRequest& request, bool intent) {
    static const std::array<std::string, 3> kIntents = {
        "Interpreting medical information from a patient perspective",
        "Providing lifestyle recommendations and improving health literacy",
        "Personalizing healthcare journeys"};
    static const std::array<std::string, 3> kGoals = {
        "Maximize comfort and avoid suffering",
        "Maintain or improve cognitive or physical functioning",
        "Extending longevity or survival"};
    const std::uint64_t h = fnv1a64(binding(request, "case_study"));
    const std::string& name = intent ? kIntents[h % 3] : kGoals[(h >> 8) % 3];
    return "RATIONALE: The case facts line up with this path most directly.\n"
           "ASSIGNED_VIGNETTE_NAME: " +
           name;
}

std::string start_message_reply(const ChatRequest& request) {
    const auto facts = numbered_items(binding(request, "patient_info"));
    std::string message = "I could use some help making sense of what's been going on.";
    if (!facts.empty()) message += " " + first_person(facts[0]);
    if (facts.size() > 1) message += " Also, " + to_lower(facts[1].substr(0, 1)) + facts[1].substr(1);
    return "REASONING: Leading with the most concrete concerns.\nSTART_MESSAGE: " + message;
}

std::string fact_selection_reply(const ChatRequest& request) {
    const auto facts = numbered_items(binding(request, "patient_info"));
    const std::string question = to_lower(binding(request, "question"));

    static const std::array<std::string, 14> kStopWords = {
        "have", "been", "what", "when", "your", "you", "like", "this", "that",
        "with", "about", "does", "how", "feel"};
    std::vector<std::string> question_words;
    std::string current;
    auto flush = [&] {
        if (current.size() > 3) {
            bool stop = false;
            for (const auto& s : kStopWords) stop |= (s == current);
            if (!stop) question_words.push_back(current);
        }
        current.clear();
    };
    for (char c : question) {
        if (std::isalpha(static_cast<unsigned char>(c)))
            current.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        else
            flush();
    }
    flush();

    std::string listed;
    int matched = 0;
    for (std::size_t i = 0; i < facts.size() && matched < 3; ++i) {
        const std::string lower_fact = to_lower(facts[i]);
        bool hit = false;
        for (const auto& w : question_words) hit |= lower_fact.find(w) != std::string::npos;
        if (hit) {
            listed += fmt::format("{}. {}\n", i + 1, facts[i]);
            ++matched;
        }
    }
    if (matched == 0) return "REASONING: Nothing in the list answers this.\nFACTS:\nNO MATCH";
    return "REASONING: These overlap with the question.\nFACTS:\n" + listed;
}

std::string answer_with_facts_reply(const ChatRequest& request) {
    const auto facts = numbered_items(binding(request, "patient_info"));
    std::string message;
    for (std::size_t i = 0; i < facts.size(); ++i) {
        if (i) message += " And ";
        message += first_person(facts[i]);
        message += '.';
    }
    if (message.empty()) message = "I guess that's how it's been.";
    return message;
}

std::string answer_no_facts_reply(const ChatRequest& request) {
    const std::string question = to_lower(binding(request, "question"));
    // decision / emotion / next-step content takes the affirmative branch
    static const std::array<std::string, 12> kAffirmativeMarkers = {
        "would you",     "would it help",  "what do you think", "are you open",
        "how confident", "shall we",       "do you feel ready", "understandable",
        "your feelings", "carrying a lot", "here with you",     "diagnosis"};
    bool affirmative = false;
    for (const auto& marker : kAffirmativeMarkers)
        affirmative |= question.find(marker) != std::string::npos;
    if (affirmative)
        return "REASONING: This is about next steps or feelings, so the answer is affirmative.\n"
               "ANSWER: Yes, I would be open to trying that.";
    return "REASONING: This asks about my background, which I cannot confirm.\n"
           "ANSWER: No, I'm not sure about that.";
}

std::string fact_extraction_reply(const ChatRequest& request) {
    const std::string message = binding(request, "user_message");
    const std::string t = trim(message);
    if (t.size() < 25 || starts_with_ci(t, "no,") || starts_with_ci(t, "no ") ||
        starts_with_ci(t, "yes,") || starts_with_ci(t, "okay"))
        return "NONE";
    std::string out = "# The patient mentioned " + sentence_snippet(t, 7) + ".";
    if (t.size() > 120) {
        const std::string tail = sentence_snippet(t.substr(t.size() / 2), 6);
        if (!tail.empty()) out += "\n# The patient described " + tail + ".";
    }
    return out;
}

std::string fact_matching_reply(const ChatRequest& request) {
    const auto new_facts = dash_items(binding(request, "new_facts"));
    const auto memory = dash_items(binding(request, "memory_of_patient_facts"));
    std::string out;
    for (const auto& fact : new_facts) {
        bool present = false;
        for (const auto& m : memory) present |= (m == fact);
        out += "# " + fact + " : " + (present ? "FactPresent" : "FactNotPresent") + "\n";
    }
    return out.empty() ? "# none : FactNotPresent" : out;
}

std::string stage_determination_reply(const ChatRequest& request) {
    const std::uint64_t h = fnv1a64(binding(request, "current_stage_name") + "\x1f" +
                                    binding(request, "patient_message") + "\x1f" +
                                    binding(request, "your_memory"));
    const int confidence = static_cast<int>(h % 10) + 1;
    const char* verdict = confidence >= 7 ? "MOVENEXTSTAGE" : "STAYCURRENTSTAGE";
    return fmt::format(
        "OUTPUT_REASONING: Weighing how far the current stage objectives have come.\n"
        "OUTPUT_CONFIDENCE: {}\nOUTPUT_STAGE: {}",
        confidence, verdict);
}

std::string generation_reply(const ChatRequest& request) {
    const std::string goal = binding(request, "current_stage_goal");
    const std::string user_message = binding(request, "user_message");
    const std::string w = salient_word(user_message);
    const std::uint64_t h = fnv1a64(binding(request, "patient_facts"));

    std::array<std::string, 3> c;
    if (request.template_name == "message_generation_gathering") {
        c = {fmt::format("When did you first notice {}?", w),
             fmt::format("How has {} been affecting your day-to-day routine?", w),
             fmt::format("Can you tell me more about {}?", w)};
    } else if (request.template_name == "message_generation_providing") {
        static const std::array<std::string, 3> kConditions = {
            "an anxiety-related condition", "a mood-related condition",
            "a stress-response condition"};
        const std::string& dx = kConditions[h % 3];
        c = {fmt::format("Based on what you've shared, especially {}, this picture is most "
                         "consistent with {}.",
                         w, dx),
             fmt::format("Putting your history together, I believe you are experiencing {}; {} "
                         "fits this pattern closely.",
                         dx, w),
             fmt::format("My working diagnosis is {}. The pattern around {} supports it.", dx, w)};
    } else if (goal.find("build a trusting") != std::string::npos) {
        c = {fmt::format("Thank you for sharing that with me. What feels most pressing about {} "
                         "right now?",
                         w),
             "I hear you, and that sounds hard to carry. Could you walk me through what's been "
             "going on in your own words?",
             "I'm here to help you make sense of this, at your pace. Where would you like to "
             "start?"};
    } else if (goal.find("lifestyle or non-clinical") != std::string::npos) {
        c = {fmt::format("Would you be open to building a small daily routine around {}?", w),
             fmt::format("What do you think about keeping a short daily log of how {} shows up?",
                         w),
             "Would it help if we picked one or two small lifestyle changes to try this week?"};
    } else if (goal.find("reached its end") != std::string::npos) {
        c = {"You've taken an important first step today. Take good care, and reach out anytime.",
             "Thank you for talking this through with me today. You're not alone in this.",
             "We covered a lot today. Be kind to yourself this week, and check in whenever you "
             "need."};
    } else {  // responding to emotions
        c = {fmt::format("It's completely understandable to feel this way about {}.", w),
             "You've been carrying a lot, and your feelings about this are valid.",
             "However this goes, the effort you're making matters, and I'm here with you."};
    }
    return fmt::format(
        "OUTPUT_REASONING: Working from the stage goal and what the patient just said.\n"
        "OUTPUT_MESSAGE:\n# {}\n# {}\n# {}",
        c[0], c[1], c[2]);
}

std::string redundancy_reply(const ChatRequest& request) {
    const auto candidates = dash_items(binding(request, "candidate_statements"));
    const auto memory = dash_items(binding(request, "statement_memory"));
    std::string out;
    for (const auto& candidate : candidates) {
        bool redundant = false;
        for (const auto& m : memory) redundant |= (m == candidate);
        out += "# " + candidate + " : " +
               (redundant ? "RedundantStatement" : "RedundantNotStatement") + "\n";
    }
    return out.empty() ? "# none : RedundantNotStatement" : out;
}

std::string likert_judge_reply(const ChatRequest& request, int floor, int range) {
    const std::uint64_t h = fnv1a64(request.template_name + "\x1f" +
                                    binding(request, "patient_sensemaker_conversation"));
    const int score = floor + static_cast<int>(h % static_cast<std::uint64_t>(range));
    return fmt::format(
        "OUTPUT_REASONING: The sensemaker's coverage of this dimension reads as {} given the "
        "conversation's depth and tone.\nOUTPUT_SCORE: {}",
        score >= 3 ? "adequate" : "thin", score);
}

std::string diagnosis_judge_reply(const ChatRequest& request, bool hard) {
    const std::string diagnosis = binding(request, "patient_diagnosis");
    const std::string gt = binding(request, "gt_diagnosis");
    int label;
    if (to_lower(diagnosis).find(to_lower(gt)) != std::string::npos) {
        label = 1;  // verbatim mention of the ground truth
    } else {
        const std::uint64_t h = fnv1a64(diagnosis + "\x1f" + gt);
        label = hard ? (h % 3 == 0 ? 1 : 0) : (h % 3 != 2 ? 1 : 0);
    }
    return fmt::format(
        "OUTPUT_REASONING: Comparing the stated diagnosis against the ground truth under the {} "
        "criterion.\nOUTPUT_SCORE: {}",
        hard ? "exact-match" : "category-level", label);
}

}  // namespace

std::optional<std::string> DemoBackend::reply_for(const ChatRequest& request) {
    const std::string& t = request.template_name;
    if (t == "mental_health_filter") return filter_reply(request);
    if (t == "patient_fact_decomposition") return decomposition_reply(request);
    if (t == "intent_assignment") return vignette_reply(request, true);
    if (t == "goal_assignment") return vignette_reply(request, false);
    if (t == "patient_start_message") return start_message_reply(request);
    if (t == "patient_fact_selection") return fact_selection_reply(request);
    if (t == "patient_answer_with_facts" || t == "patient_answer_with_facts_late_stage")
        return answer_with_facts_reply(request);
    if (t == "patient_answer_no_facts") return answer_no_facts_reply(request);
    if (t == "fact_extraction") return fact_extraction_reply(request);
    if (t == "fact_matching") return fact_matching_reply(request);
    if (t == "stage_determination") return stage_determination_reply(request);
    if (t == "message_generation_generic" || t == "message_generation_gathering" ||
        t == "message_generation_providing")
        return generation_reply(request);
    if (t == "redundancy_check") return redundancy_reply(request);
    if (t == "judge_susceptibility" || t == "judge_severity" || t == "judge_benefits")
        return likert_judge_reply(request, 2, 3);
    if (t == "judge_flow") return likert_judge_reply(request, 3, 2);
    if (t == "judge_diagnosis_hard") return diagnosis_judge_reply(request, true);
    if (t == "judge_diagnosis_soft") return diagnosis_judge_reply(request, false);
    return std::nullopt;
}

ChatResponse DemoBackend::complete(const ChatRequest& request) {
    auto reply = reply_for(request);
    if (!reply)
        throw BackendRefusal("demo backend does not understand template '" +
                             request.template_name + "'");
    return ChatResponse{std::move(*reply), 0, id_};
}

}  // namespace mhsense::gateway
