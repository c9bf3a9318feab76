#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "mhsense/gateway/llm_client.hpp"

namespace mhsense::corpus {

enum class FactKind { Vital, General };

// Minimal self-contained third-person statement about the patient.
struct AtomicFact {
    std::string text;
    FactKind kind = FactKind::General;

    bool operator==(const AtomicFact&) const = default;
};

// One seed clinical vignette.
struct CaseStudy {
    std::string id;
    std::string narrative;
    std::string gt_diagnosis;
    std::string source;

    bool operator==(const CaseStudy&) const = default;
};

enum class Intent { InterpretMedicalInfo, LifestyleAndLiteracy, PersonalizeJourney };
enum class Goal { MaximizeComfort, MaintainFunction, ExtendLongevity };
enum class Trait { Openness, Conscientiousness, Extraversion, Agreeableness, Neuroticism };
enum class Literacy { Basic, Advanced };

inline constexpr std::array<Trait, 5> kTraitOrder = {
    Trait::Openness, Trait::Conscientiousness, Trait::Extraversion, Trait::Agreeableness,
    Trait::Neuroticism,
};

struct PatientProfile {
    CaseStudy case_study;
    std::vector<AtomicFact> facts;
    Intent intent = Intent::InterpretMedicalInfo;
    Goal goal = Goal::MaximizeComfort;

    bool operator==(const PatientProfile&) const = default;
};

// Profile plus one one-hot trait vector and a literacy level; the unit a
// conversation is generated for.
struct PatientPersona {
    PatientProfile profile;
    Trait dominant_trait = Trait::Openness;
    Literacy literacy = Literacy::Basic;

    // Exactly one trait is High, the rest Low.
    std::map<Trait, bool> trait_levels() const;
    bool trait_is_high(Trait t) const { return t == dominant_trait; }
    std::string persona_id() const;

    bool operator==(const PatientPersona&) const = default;
};

// ---- enum names (used in prompts, files, and CLI output) ----

const std::string& intent_vignette_name(Intent);  // the exact vignette names
const std::string& goal_vignette_name(Goal);
Intent intent_from_vignette(const std::string& raw);  // throws UnknownVignette
Goal goal_from_vignette(const std::string& raw);

const std::string& intent_key(Intent);
Intent intent_from_key(const std::string&);
const std::string& goal_key(Goal);
Goal goal_from_key(const std::string&);
const std::string& trait_key(Trait);
Trait trait_from_key(const std::string&);
const std::string& trait_display_name(Trait);
const std::string& literacy_key(Literacy);
Literacy literacy_from_key(const std::string&);
const std::string& literacy_display_name(Literacy);
const std::string& fact_kind_key(FactKind);
FactKind fact_kind_from_key(const std::string&);

// ---- augmentation operations ----

class CorpusAugmenter {
public:
    explicit CorpusAugmenter(gateway::LlmClient client, int max_tokens = 400);

    // True iff the classifier judges the case to concern a mental-health
    // condition. Throws JudgeParseError after retries.
    bool classify_mental_health(const CaseStudy& case_study) const;

    // Decomposes the narrative into atomic facts; vitals first, kind set by
    // reply section. Throws EmptyList when nothing parses.
    std::vector<AtomicFact> decompose_facts(const CaseStudy& case_study) const;

    Intent assign_intent(const CaseStudy& case_study) const;
    Goal assign_goal(const CaseStudy& case_study) const;

private:
    std::string assigned_vignette(const std::string& template_name,
                                  const CaseStudy& case_study) const;

    gateway::LlmClient client_;
    int max_tokens_;
};

// The 10 personas of a profile: 5 one-hot traits x {Basic, Advanced}, ordered
// by (trait, literacy) with Basic first.
std::vector<PatientPersona> expand_personas(const PatientProfile& profile);

// ---- files ----

std::vector<CaseStudy> read_corpus(const std::filesystem::path& path);  // JSON Lines
void write_personas(const std::filesystem::path& path, const std::vector<PatientPersona>&);
std::vector<PatientPersona> read_personas(const std::filesystem::path& path);

}  // namespace mhsense::corpus
