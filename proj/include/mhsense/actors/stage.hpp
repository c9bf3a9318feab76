#pragma once

#include <array>
#include <optional>
#include <string>

namespace mhsense {

// Conversation stages, in order. Transitions only ever go to self or the
// immediate successor; Exit is terminal.
enum class Stage {
    FosteringRelationship,
    GatheringInformation,
    ProvidingInformation,
    DecisionMaking,
    RespondingToEmotions,
    Exit,
};

inline constexpr std::array<Stage, 6> kStageOrder = {
    Stage::FosteringRelationship, Stage::GatheringInformation, Stage::ProvidingInformation,
    Stage::DecisionMaking,        Stage::RespondingToEmotions, Stage::Exit,
};

int stage_index(Stage stage);
std::optional<Stage> next_stage(Stage stage);  // nullopt for Exit

// "Fostering the Relationship", "Gathering Information", ...
const std::string& stage_display_name(Stage stage);
// "fostering_relationship", ... used for file keys and serialization.
const std::string& stage_key(Stage stage);
Stage stage_from_key(const std::string& key);

}  // namespace mhsense
