#include "mhsense/actors/stage.hpp"

#include "mhsense/errors.hpp"

namespace mhsense {

namespace {
const std::array<std::string, 6> kDisplayNames = {
    "Fostering the Relationship", "Gathering Information", "Providing Information",
    "Decision Making",            "Responding to Emotions", "Exit",
};
const std::array<std::string, 6> kKeys = {
    "fostering_relationship", "gathering_information", "providing_information",
    "decision_making",        "responding_to_emotions", "exit",
};
}  // namespace

int stage_index(Stage stage) { return static_cast<int>(stage); }

std::optional<Stage> next_stage(Stage stage) {
    if (stage == Stage::Exit) return std::nullopt;
    return static_cast<Stage>(static_cast<int>(stage) + 1);
}

const std::string& stage_display_name(Stage stage) {
    return kDisplayNames[static_cast<std::size_t>(stage)];
}

const std::string& stage_key(Stage stage) { return kKeys[static_cast<std::size_t>(stage)]; }

Stage stage_from_key(const std::string& key) {
    for (std::size_t i = 0; i < kKeys.size(); ++i) {
        if (kKeys[i] == key) return static_cast<Stage>(i);
    }
    throw Error("unknown stage key: " + key);
}

}  // namespace mhsense
