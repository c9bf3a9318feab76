#include "mhsense/corpus/corpus.hpp"

#include <fstream>
#include <json.hpp>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"
#include "mhsense/util.hpp"

namespace mhsense::corpus {

using gateway::Bindings;
using nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

const std::array<std::string, 3> kIntentVignettes = {
    "Interpreting medical information from a patient perspective",
    "Providing lifestyle recommendations and improving health literacy",
    "Personalizing healthcare journeys",
};
const std::array<std::string, 3> kGoalVignettes = {
    "Maximize comfort and avoid suffering",
    "Maintain or improve cognitive or physical functioning",
    "Extending longevity or survival",
};
const std::array<std::string, 3> kIntentKeys = {"interpret_medical_info", "lifestyle_and_literacy",
                                                "personalize_journey"};
const std::array<std::string, 3> kGoalKeys = {"maximize_comfort", "maintain_function",
                                              "extend_longevity"};
const std::array<std::string, 5> kTraitKeys = {"openness", "conscientiousness", "extraversion",
                                               "agreeableness", "neuroticism"};
const std::array<std::string, 5> kTraitNames = {"Openness", "Conscientiousness", "Extraversion",
                                                "Agreeableness", "Neuroticism"};
const std::array<std::string, 2> kLiteracyKeys = {"basic", "advanced"};
const std::array<std::string, 2> kLiteracyNames = {"Basic", "Advanced"};
const std::array<std::string, 2> kFactKindKeys = {"vital", "general"};

// Vignette names match case-insensitively after whitespace normalization;
// no fuzzy matching. Replies may echo the <ASSIGNED_VIGNETTE_NAME: ...>
// wrapper, so angle brackets and a trailing period are shed first.
std::string normalize_vignette(std::string_view raw) {
    std::string s = collapse_ws(raw);
    while (!s.empty() && (s.front() == '<' || s.front() == '"')) s.erase(s.begin());
    while (!s.empty() && (s.back() == '>' || s.back() == '"' || s.back() == '.')) s.pop_back();
    return to_lower(collapse_ws(s));
}

template <std::size_t N>
std::size_t index_in(const std::array<std::string, N>& values, const std::string& value) {
    for (std::size_t i = 0; i < N; ++i) {
        if (values[i] == value) return i;
    }
    return N;
}

}  // namespace

std::map<Trait, bool> PatientPersona::trait_levels() const {
    std::map<Trait, bool> levels;
    for (Trait t : kTraitOrder) levels[t] = (t == dominant_trait);
    return levels;
}

std::string PatientPersona::persona_id() const {
    return profile.case_study.id + "#" + trait_key(dominant_trait) + "-" + literacy_key(literacy);
}

const std::string& intent_vignette_name(Intent i) {
    return kIntentVignettes[static_cast<std::size_t>(i)];
}
const std::string& goal_vignette_name(Goal g) { return kGoalVignettes[static_cast<std::size_t>(g)]; }

Intent intent_from_vignette(const std::string& raw) {
    const std::string norm = normalize_vignette(raw);
    for (std::size_t i = 0; i < kIntentVignettes.size(); ++i) {
        if (to_lower(kIntentVignettes[i]) == norm) return static_cast<Intent>(i);
    }
    throw UnknownVignette(raw);
}

Goal goal_from_vignette(const std::string& raw) {
    const std::string norm = normalize_vignette(raw);
    for (std::size_t i = 0; i < kGoalVignettes.size(); ++i) {
        if (to_lower(kGoalVignettes[i]) == norm) return static_cast<Goal>(i);
    }
    throw UnknownVignette(raw);
}

const std::string& intent_key(Intent i) { return kIntentKeys[static_cast<std::size_t>(i)]; }
Intent intent_from_key(const std::string& key) {
    const auto i = index_in(kIntentKeys, key);
    if (i == kIntentKeys.size()) throw Error("unknown intent key: " + key);
    return static_cast<Intent>(i);
}
const std::string& goal_key(Goal g) { return kGoalKeys[static_cast<std::size_t>(g)]; }
Goal goal_from_key(const std::string& key) {
    const auto i = index_in(kGoalKeys, key);
    if (i == kGoalKeys.size()) throw Error("unknown goal key: " + key);
    return static_cast<Goal>(i);
}
const std::string& trait_key(Trait t) { return kTraitKeys[static_cast<std::size_t>(t)]; }
Trait trait_from_key(const std::string& key) {
    const auto i = index_in(kTraitKeys, key);
    if (i == kTraitKeys.size()) throw Error("unknown trait key: " + key);
    return static_cast<Trait>(i);
}
const std::string& trait_display_name(Trait t) { return kTraitNames[static_cast<std::size_t>(t)]; }
const std::string& literacy_key(Literacy l) { return kLiteracyKeys[static_cast<std::size_t>(l)]; }
Literacy literacy_from_key(const std::string& key) {
    const auto i = index_in(kLiteracyKeys, key);
    if (i == kLiteracyKeys.size()) throw Error("unknown literacy key: " + key);
    return static_cast<Literacy>(i);
}
const std::string& literacy_display_name(Literacy l) {
    return kLiteracyNames[static_cast<std::size_t>(l)];
}
const std::string& fact_kind_key(FactKind k) { return kFactKindKeys[static_cast<std::size_t>(k)]; }
FactKind fact_kind_from_key(const std::string& key) {
    const auto i = index_in(kFactKindKeys, key);
    if (i == kFactKindKeys.size()) throw Error("unknown fact kind: " + key);
    return static_cast<FactKind>(i);
}

// ---- CorpusAugmenter ----

CorpusAugmenter::CorpusAugmenter(gateway::LlmClient client, int max_tokens)
    : client_(std::move(client)), max_tokens_(max_tokens) {}

bool CorpusAugmenter::classify_mental_health(const CaseStudy& case_study) const {
    const Bindings bindings = {{"case_study", case_study.narrative}};
    for (int attempt = 0;; ++attempt) {
        const std::string reply =
            client_.call_text("mental_health_filter", bindings, max_tokens_);
        std::string answer;
        try {
            answer = gateway::parse_labeled(reply, {"LABEL"}).text("LABEL");
        } catch (const MissingLabel&) {
            answer = trim(reply);  // bare yes/no without the echoed label
        }
        answer = to_lower(answer);
        if (answer == "yes") return true;
        if (answer == "no") return false;
        if (attempt >= client_.parse_retries)
            throw JudgeParseError("classifier answered neither yes nor no: \"" + reply + "\"");
    }
}

std::vector<AtomicFact> CorpusAugmenter::decompose_facts(const CaseStudy& case_study) const {
    if (case_study.narrative.empty()) throw Error("case narrative is empty");
    const std::string reply = client_.call_text(
        "patient_fact_decomposition", {{"patient_data", case_study.narrative}}, max_tokens_);

    std::vector<AtomicFact> facts;
    FactKind kind = FactKind::General;
    for (const auto& raw : split_lines(reply)) {
        const std::string line = trim(raw);
        if (line.empty()) continue;
        if (starts_with_ci(line, "PATIENT VITAL FACTS")) {
            kind = FactKind::Vital;
            continue;
        }
        if (starts_with_ci(line, "PATIENT FACTS")) {
            kind = FactKind::General;
            continue;
        }
        if (line.rfind("- ", 0) == 0) {
            std::string text = trim(std::string_view(line).substr(2));
            while (text.rfind("- ", 0) == 0) text = trim(std::string_view(text).substr(2));
            if (!text.empty()) facts.push_back({std::move(text), kind});
        }
    }
    if (facts.empty()) throw EmptyList("reply contained no '- ' facts");
    return facts;
}

std::string CorpusAugmenter::assigned_vignette(const std::string& template_name,
                                               const CaseStudy& case_study) const {
    const auto parsed =
        client_.call_labeled(template_name, {{"case_study", case_study.narrative}}, max_tokens_,
                             {"ASSIGNED_VIGNETTE_NAME"});
    return parsed.text("ASSIGNED_VIGNETTE_NAME");
}

Intent CorpusAugmenter::assign_intent(const CaseStudy& case_study) const {
    return intent_from_vignette(assigned_vignette("intent_assignment", case_study));
}

Goal CorpusAugmenter::assign_goal(const CaseStudy& case_study) const {
    return goal_from_vignette(assigned_vignette("goal_assignment", case_study));
}

std::vector<PatientPersona> expand_personas(const PatientProfile& profile) {
    std::vector<PatientPersona> personas;
    personas.reserve(10);
    for (Trait trait : kTraitOrder) {
        for (Literacy literacy : {Literacy::Basic, Literacy::Advanced}) {
            personas.push_back(PatientPersona{profile, trait, literacy});
        }
    }
    return personas;
}

// ---- files ----

std::vector<CaseStudy> read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read corpus file: " + path.string());
    std::vector<CaseStudy> cases;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = ordered_json::parse(line);
            CaseStudy c;
            c.id = j.at("id").get<std::string>();
            c.narrative = j.at("narrative").get<std::string>();
            c.gt_diagnosis = j.at("gt_diagnosis").get<std::string>();
            c.source = j.value("source", std::string{});
            if (c.narrative.empty() || c.gt_diagnosis.empty())
                throw MalformedLine(line_no, "narrative and gt_diagnosis must be non-empty");
            cases.push_back(std::move(c));
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    // ids must be unique within a corpus
    for (std::size_t i = 0; i < cases.size(); ++i) {
        for (std::size_t j = i + 1; j < cases.size(); ++j) {
            if (cases[i].id == cases[j].id)
                throw IoError("duplicate case id in corpus: " + cases[i].id);
        }
    }
    return cases;
}

void write_personas(const std::filesystem::path& path, const std::vector<PatientPersona>& personas) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write personas file: " + path.string());
    for (const auto& p : personas) {
        ordered_json facts = ordered_json::array();
        for (const auto& f : p.profile.facts)
            facts.push_back({{"text", f.text}, {"kind", fact_kind_key(f.kind)}});
        ordered_json j{
            {"schema_version", kSchemaVersion},
            {"persona_id", p.persona_id()},
            {"case",
             {{"id", p.profile.case_study.id},
              {"narrative", p.profile.case_study.narrative},
              {"gt_diagnosis", p.profile.case_study.gt_diagnosis},
              {"source", p.profile.case_study.source}}},
            {"facts", std::move(facts)},
            {"intent", intent_key(p.profile.intent)},
            {"goal", goal_key(p.profile.goal)},
            {"dominant_trait", trait_key(p.dominant_trait)},
            {"literacy", literacy_key(p.literacy)},
        };
        out << j.dump() << '\n';
    }
}

std::vector<PatientPersona> read_personas(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read personas file: " + path.string());
    std::vector<PatientPersona> personas;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto j = ordered_json::parse(line);
            const long long version = j.at("schema_version").get<long long>();
            if (version != kSchemaVersion) throw SchemaVersionMismatch(version);
            PatientPersona p;
            const auto& c = j.at("case");
            p.profile.case_study = {c.at("id").get<std::string>(),
                                    c.at("narrative").get<std::string>(),
                                    c.at("gt_diagnosis").get<std::string>(),
                                    c.value("source", std::string{})};
            for (const auto& f : j.at("facts"))
                p.profile.facts.push_back(
                    {f.at("text").get<std::string>(), fact_kind_from_key(f.at("kind"))});
            p.profile.intent = intent_from_key(j.at("intent"));
            p.profile.goal = goal_from_key(j.at("goal"));
            p.dominant_trait = trait_from_key(j.at("dominant_trait"));
            p.literacy = literacy_from_key(j.at("literacy"));
            personas.push_back(std::move(p));
        } catch (const SchemaVersionMismatch&) {
            throw;
        } catch (const nlohmann::json::exception& e) {
            throw MalformedLine(line_no, e.what());
        }
    }
    return personas;
}

}  // namespace mhsense::corpus
