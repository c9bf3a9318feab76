#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhsense/actors/patient_actor.hpp"
#include "mhsense/actors/stage.hpp"
#include "mhsense/corpus/corpus.hpp"

namespace mhsense::dialogue {

inline constexpr int kDatasetSchemaVersion = 1;
inline constexpr int kDefaultSafetyCap = 60;

enum class Speaker { Patient, Sensemaker };

enum class TranscriptStatus { Complete, Incomplete, Error };

struct Message {
    int index = 0;
    Speaker speaker = Speaker::Patient;
    Stage stage = Stage::FosteringRelationship;  // sensemaker's stage at emission time
    std::string text;
    std::optional<actors::PatientMode> mode;  // patient messages only
    std::vector<std::size_t> used_facts;

    bool operator==(const Message&) const = default;
};

struct PersonaSummary {
    corpus::Trait dominant_trait = corpus::Trait::Openness;
    corpus::Literacy literacy = corpus::Literacy::Basic;
    corpus::Intent intent = corpus::Intent::InterpretMedicalInfo;
    corpus::Goal goal = corpus::Goal::MaximizeComfort;

    bool operator==(const PersonaSummary&) const = default;
};

struct Transcript {
    std::string conversation_id;
    std::string case_id;
    PersonaSummary persona;
    std::string sensemaker_model;
    std::string patient_model;
    std::string gt_diagnosis;
    std::vector<Message> messages;
    TranscriptStatus status = TranscriptStatus::Incomplete;
    std::uint64_t seed = 0;
    std::map<Stage, int> stage_message_counts;
    std::optional<int> error_turn;
    std::string error_note;

    bool operator==(const Transcript&) const = default;
};

const std::string& speaker_key(Speaker);
Speaker speaker_from_key(const std::string&);
const std::string& status_key(TranscriptStatus);
TranscriptStatus status_from_key(const std::string&);

// ---- validation ----

enum class FindingKind {
    MissingStage,
    OutOfOrderStages,
    NonAlternatingSpeakers,
    MissingDiagnosisMessage,
    DuplicateDiagnosisMessage,
    SafetyCapHit,
    EmptyMessageText,
    BadIndexing,
    ExitNotTerminal,
};

struct ValidationFinding {
    FindingKind kind;
    std::string detail;
};

const std::string& finding_kind_key(FindingKind);

// Post-processing checks; a transcript is Complete iff this returns nothing.
std::vector<ValidationFinding> validate_transcript(const Transcript& transcript,
                                                   int safety_cap = kDefaultSafetyCap);

// ---- serialization (JSON Lines, one transcript per line) ----

nlohmann::ordered_json transcript_to_json(const Transcript&);
Transcript transcript_from_json(const nlohmann::ordered_json&);

void write_dataset(const std::vector<Transcript>&, const std::filesystem::path& path);
std::vector<Transcript> read_dataset(const std::filesystem::path& path);

// ---- statistics ----

struct StageStats {
    std::map<Stage, double> mean_per_stage;  // both speakers' messages
    double overall_mean = 0;
    std::size_t transcript_count = 0;
};

StageStats stage_statistics(const std::vector<Transcript>&);  // throws EmptyDataset
std::string format_stage_table(const StageStats&);

}  // namespace mhsense::dialogue
