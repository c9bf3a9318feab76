#include "mhsense/actors/prompt_assets.hpp"

#include <fstream>
#include <sstream>

#include "mhsense/errors.hpp"

namespace mhsense {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("missing prompt asset: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

}  // namespace

PromptAssets::PromptAssets(const std::filesystem::path& prompts_dir) {
    const auto assets = prompts_dir / "assets";
    trait_definitions_ = read_file(assets / "big_five_traits.txt");
    literacy_[corpus::Literacy::Basic] = read_file(assets / "literacy_basic.txt");
    literacy_[corpus::Literacy::Advanced] = read_file(assets / "literacy_advanced.txt");
    for (Stage stage : kStageOrder) {
        goals_[stage] = read_file(assets / "stage_goals" / (stage_key(stage) + ".txt"));
        examples_[stage] = read_file(assets / "stage_examples" / (stage_key(stage) + ".txt"));
        if (stage != Stage::Exit)
            rationales_[stage] =
                read_file(assets / "stage_rationales" / (stage_key(stage) + ".txt"));
    }
}

const std::string& PromptAssets::literacy_text(corpus::Literacy level) const {
    return literacy_.at(level);
}

const std::string& PromptAssets::stage_goal(Stage stage) const { return goals_.at(stage); }

const std::string& PromptAssets::stage_examples(Stage stage) const { return examples_.at(stage); }

const std::string& PromptAssets::stage_rationale(Stage stage) const {
    auto it = rationales_.find(stage);
    if (it == rationales_.end())
        throw Error("no transition rationale for stage " + stage_display_name(stage));
    return it->second;
}

}  // namespace mhsense
