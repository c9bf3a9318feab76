#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "mhsense/actors/stage.hpp"
#include "mhsense/corpus/corpus.hpp"

namespace mhsense {

// Fixed prompt fragments shipped under prompts/assets/: Big Five trait
// definitions, literacy level descriptions, and the per-stage goal, example,
// and transition-rationale texts keyed by stage name.
class PromptAssets {
public:
    explicit PromptAssets(const std::filesystem::path& prompts_dir);

    const std::string& trait_definitions() const { return trait_definitions_; }
    const std::string& literacy_text(corpus::Literacy level) const;
    const std::string& stage_goal(Stage stage) const;
    const std::string& stage_examples(Stage stage) const;
    const std::string& stage_rationale(Stage stage) const;  // not defined for Exit

private:
    std::string trait_definitions_;
    std::map<corpus::Literacy, std::string> literacy_;
    std::map<Stage, std::string> goals_;
    std::map<Stage, std::string> examples_;
    std::map<Stage, std::string> rationales_;
};

}  // namespace mhsense
