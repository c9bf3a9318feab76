#pragma once

#include <optional>
#include <string>
#include <vector>

namespace mhsense::cli {

// Exit codes shared by every subcommand:
//   0 success, 1 validation findings, 2 usage/IO/backend configuration
//   errors, 3 empty inputs.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFindings = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEmpty = 3;

struct CommonOptions {
    std::string config_path;  // empty = built-in defaults (demo backends)
    bool live = false;        // required before any http backend is used
    std::optional<std::uint64_t> seed;
    std::string manifest_path;  // default: <out>.manifest.json
};

struct AugmentOptions {
    CommonOptions common;
    std::string corpus_path;
    std::string out_path;
    bool skip_filter = false;
    std::string review_path;  // with --review: classifier verdicts for audit
};

struct GenerateOptions {
    CommonOptions common;
    std::string profiles_path;
    std::string out_path;
    std::optional<int> limit;
    std::optional<int> parallelism;
};

struct EvaluateOptions {
    CommonOptions common;
    std::string dataset_path;
    std::string results_path;
};

struct ReportOptions {
    CommonOptions common;
    std::string results_path;
    std::string out_dir;
    std::vector<std::string> compare;  // exactly two model tags when present
};

struct ValidateOptions {
    CommonOptions common;
    std::string dataset_path;
};

int cmd_augment(const AugmentOptions&);
int cmd_generate(const GenerateOptions&);
int cmd_evaluate(const EvaluateOptions&);
int cmd_report(const ReportOptions&);
int cmd_validate(const ValidateOptions&);

}  // namespace mhsense::cli
