#include <CLI11.hpp>

#include "mhsense/cli/commands.hpp"
#include "mhsense/log.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Synthesizes and evaluates multi-turn patient/sensemaker conversations"};
    app.require_subcommand(1);

    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "debug logging to stderr");

    auto add_common = [](CLI::App* cmd, mhsense::cli::CommonOptions& common) {
        cmd->add_option("--config", common.config_path, "key = value configuration file");
        cmd->add_flag("--live", common.live, "allow configured http backends to make calls");
        cmd->add_option("--seed", common.seed, "run seed (overrides run.seed)");
        cmd->add_option("--manifest", common.manifest_path, "manifest output path");
    };

    mhsense::cli::AugmentOptions augment;
    auto* cmd_augment = app.add_subcommand(
        "augment", "corpus -> persona profiles (filter, facts, intent, goal, personas)");
    cmd_augment->add_option("corpus", augment.corpus_path, "corpus JSONL")->required();
    cmd_augment->add_option("-o,--out", augment.out_path, "personas JSONL")->required();
    cmd_augment->add_flag("--skip-filter", augment.skip_filter,
                          "skip the mental-health classifier (pre-filtered corpora)");
    cmd_augment->add_option("--review", augment.review_path,
                            "export classifier verdicts to this TSV for audit");
    add_common(cmd_augment, augment.common);

    mhsense::cli::GenerateOptions generate;
    auto* cmd_generate =
        app.add_subcommand("generate", "persona profiles -> conversation dataset");
    cmd_generate->add_option("profiles", generate.profiles_path, "personas JSONL")->required();
    cmd_generate->add_option("-o,--out", generate.out_path, "dataset JSONL")->required();
    cmd_generate->add_option("--limit", generate.limit, "generate at most N conversations");
    cmd_generate->add_option("--parallelism", generate.parallelism, "worker pool size");
    add_common(cmd_generate, generate.common);

    mhsense::cli::EvaluateOptions evaluate;
    auto* cmd_evaluate = app.add_subcommand("evaluate", "dataset -> eval records");
    cmd_evaluate->add_option("dataset", evaluate.dataset_path, "dataset JSONL")->required();
    cmd_evaluate->add_option("-o,--out", evaluate.results_path, "eval records JSONL (appended)")
        ->required();
    add_common(cmd_evaluate, evaluate.common);

    mhsense::cli::ReportOptions report;
    auto* cmd_report = app.add_subcommand("report", "eval records -> CSV views + summary");
    cmd_report->add_option("results", report.results_path, "eval records JSONL")->required();
    cmd_report->add_option("-o,--out", report.out_dir, "report directory")->required();
    cmd_report->add_option("--compare", report.compare,
                           "two model tags to test against each other")
        ->expected(2);
    add_common(cmd_report, report.common);

    mhsense::cli::ValidateOptions validate;
    auto* cmd_validate = app.add_subcommand("validate", "check a dataset's transcripts");
    cmd_validate->add_option("dataset", validate.dataset_path, "dataset JSONL")->required();
    add_common(cmd_validate, validate.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : mhsense::cli::kExitUsage;
    }

    if (verbose) mhsense::log::set_level(mhsense::log::Level::Debug);

    if (cmd_augment->parsed()) return mhsense::cli::cmd_augment(augment);
    if (cmd_generate->parsed()) return mhsense::cli::cmd_generate(generate);
    if (cmd_evaluate->parsed()) return mhsense::cli::cmd_evaluate(evaluate);
    if (cmd_report->parsed()) return mhsense::cli::cmd_report(report);
    if (cmd_validate->parsed()) return mhsense::cli::cmd_validate(validate);
    return mhsense::cli::kExitUsage;
}
