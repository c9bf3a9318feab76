#include "mhsense/cli/commands.hpp"

#include <fmt/chrono.h>
#include <fmt/core.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "mhsense/analytics/report.hpp"
#include "mhsense/corpus/corpus.hpp"
#include "mhsense/dialogue/engine.hpp"
#include "mhsense/errors.hpp"
#include "mhsense/evals/evaluator.hpp"
#include "mhsense/gateway/config.hpp"
#include "mhsense/gateway/demo_backend.hpp"
#include "mhsense/gateway/http_backend.hpp"
#include "mhsense/log.hpp"

namespace mhsense::cli {

namespace {

using gateway::RunConfig;
using nlohmann::ordered_json;

struct Manifest {
    std::string command;
    std::string config_digest;
    std::chrono::system_clock::time_point started = std::chrono::system_clock::now();
    long inputs = 0;
    long succeeded = 0;
    long failed = 0;
    std::uint64_t seed = 0;

    void write(const std::string& path) const {
        ordered_json j{
            {"command", command},
            {"config_digest", config_digest},
            {"started_at", fmt::format("{:%FT%T}Z", fmt::gmtime(started))},
            {"finished_at",
             fmt::format("{:%FT%T}Z", fmt::gmtime(std::chrono::system_clock::now()))},
            {"inputs", inputs},
            {"succeeded", succeeded},
            {"failed", failed},
            {"seed", seed},
        };
        std::ofstream out(path, std::ios::trunc);
        if (out) out << j.dump(2) << '\n';
    }
};

std::string manifest_path_for(const CommonOptions& common, const std::string& out_path) {
    if (!common.manifest_path.empty()) return common.manifest_path;
    return out_path + ".manifest.json";
}

RunConfig resolve_config(const CommonOptions& common) {
    RunConfig config;
    if (!common.config_path.empty()) config = gateway::load_config(common.config_path);
    if (config.digest.empty()) config.digest = "default";
    if (common.seed) config.seed = *common.seed;
    return config;
}

// Builds the gateway per config. http backends require --live; the demo
// backend is always registered so defaults work offline.
gateway::Gateway build_gateway(const RunConfig& config, bool live) {
    gateway::Gateway gw;
    gw.add_backend(std::make_shared<gateway::DemoBackend>());
    for (const auto& [id, backend] : config.backends) {
        gateway::BackendSettings settings;
        settings.retries = backend.retries;
        settings.backoff_base_ms = backend.backoff_ms;
        settings.rate_per_minute = backend.rate_per_minute;
        if (backend.kind == "http") {
            if (!live)
                throw ConfigError("backend '" + id +
                                  "' is live (http); pass --live to allow network calls");
            gateway::HttpBackendOptions options;
            options.id = id;
            options.endpoint = backend.endpoint;
            options.model = backend.model;
            options.api_key_env = backend.api_key_env;
            gw.add_backend(std::make_shared<gateway::HttpBackend>(options), settings);
        } else if (backend.kind == "demo" && id != "demo") {
            gw.add_backend(std::make_shared<gateway::DemoBackend>(id), settings);
        }
    }
    return gw;
}

std::string model_tag(const RunConfig& config, const std::string& backend_id) {
    auto it = config.backends.find(backend_id);
    if (it != config.backends.end() && !it->second.model.empty()) return it->second.model;
    return backend_id;
}

int exit_for(const std::exception& e) {
    log::error("{}", e.what());
    return kExitUsage;
}

}  // namespace

int cmd_augment(const AugmentOptions& options) {
    Manifest manifest;
    manifest.command = "augment";
    const std::string manifest_path = manifest_path_for(options.common, options.out_path);
    try {
        const RunConfig config = resolve_config(options.common);
        manifest.config_digest = config.digest;
        manifest.seed = config.seed;

        gateway::Gateway gw = build_gateway(config, options.common.live);
        gateway::PromptLibrary library(config.prompts_dir);
        gateway::LlmClient utility(gw, library, config.utility_backend,
                                   model_tag(config, config.utility_backend), "utility",
                                   config.gen.temperature);
        corpus::CorpusAugmenter augmenter(utility, config.gen.max_tokens_patient);

        const auto cases = corpus::read_corpus(options.corpus_path);
        manifest.inputs = static_cast<long>(cases.size());
        if (cases.empty()) {
            manifest.write(manifest_path);
            log::error("corpus is empty: {}", options.corpus_path);
            return kExitEmpty;
        }

        std::ofstream review;
        if (!options.review_path.empty()) {
            review.open(options.review_path, std::ios::trunc);
            if (review) review << "case_id\tmental_health\n";
        }

        std::vector<corpus::PatientPersona> personas;
        for (const auto& case_study : cases) {
            try {
                if (!options.skip_filter) {
                    const bool relevant = augmenter.classify_mental_health(case_study);
                    if (review.is_open())
                        review << case_study.id << '\t' << (relevant ? "yes" : "no") << '\n';
                    if (!relevant) {
                        log::info("case {} filtered out (not mental-health)", case_study.id);
                        manifest.failed += 1;
                        continue;
                    }
                }
                corpus::PatientProfile profile;
                profile.case_study = case_study;
                profile.facts = augmenter.decompose_facts(case_study);
                profile.intent = augmenter.assign_intent(case_study);
                profile.goal = augmenter.assign_goal(case_study);
                for (auto& persona : corpus::expand_personas(profile))
                    personas.push_back(std::move(persona));
                manifest.succeeded += 1;
            } catch (const Error& e) {
                manifest.failed += 1;
                log::warn("case {} failed: {}", case_study.id, e.what());
            }
        }
        corpus::write_personas(options.out_path, personas);
        manifest.write(manifest_path);
        fmt::print("{} case(s) -> {} persona(s) -> {}\n", manifest.succeeded, personas.size(),
                   options.out_path);
        return manifest.succeeded > 0 ? kExitOk : kExitUsage;
    } catch (const std::exception& e) {
        manifest.write(manifest_path);
        return exit_for(e);
    }
}

int cmd_generate(const GenerateOptions& options) {
    Manifest manifest;
    manifest.command = "generate";
    const std::string manifest_path = manifest_path_for(options.common, options.out_path);
    try {
        const RunConfig config = resolve_config(options.common);
        manifest.config_digest = config.digest;
        manifest.seed = config.seed;

        gateway::Gateway gw = build_gateway(config, options.common.live);
        gateway::PromptLibrary library(config.prompts_dir);
        PromptAssets assets(config.prompts_dir);

        gateway::LlmClient patient_client(gw, library, config.patient_backend,
                                          model_tag(config, config.patient_backend), "patient",
                                          config.gen.temperature);
        gateway::LlmClient reasoning_client(gw, library, config.sensemaker_backend,
                                            model_tag(config, config.sensemaker_backend),
                                            "sensemaker", config.gen.temperature);
        gateway::LlmClient utility_client(gw, library, config.utility_backend,
                                          model_tag(config, config.utility_backend), "utility",
                                          config.gen.temperature);

        actors::PatientActor patient(patient_client, assets, config.gen.max_tokens_patient);
        actors::SensemakerActor sensemaker(reasoning_client, utility_client, assets,
                                           config.gen.max_tokens_reasoning,
                                           config.gen.max_tokens_utility);

        dialogue::EngineConfig engine_config;
        engine_config.safety_cap = config.safety_cap;
        engine_config.run_seed = config.seed;
        engine_config.sensemaker_model = model_tag(config, config.sensemaker_backend);
        engine_config.patient_model = model_tag(config, config.patient_backend);
        dialogue::DialogueEngine engine(std::move(patient), std::move(sensemaker), engine_config);

        auto personas = corpus::read_personas(options.profiles_path);
        if (options.limit && *options.limit >= 0 &&
            personas.size() > static_cast<std::size_t>(*options.limit))
            personas.resize(static_cast<std::size_t>(*options.limit));
        manifest.inputs = static_cast<long>(personas.size());
        if (personas.empty()) {
            manifest.write(manifest_path);
            log::error("no personas in {}", options.profiles_path);
            return kExitEmpty;
        }

        const int parallelism = options.parallelism.value_or(config.parallelism);
        const auto transcripts = dialogue::run_conversations(engine, personas, parallelism);
        for (const auto& t : transcripts) {
            if (t.status == dialogue::TranscriptStatus::Error) manifest.failed += 1;
            else manifest.succeeded += 1;
        }
        dialogue::write_dataset(transcripts, options.out_path);
        manifest.write(manifest_path);

        fmt::print("{}", dialogue::format_stage_table(dialogue::stage_statistics(transcripts)));
        fmt::print("{} transcript(s) -> {}\n", transcripts.size(), options.out_path);
        return kExitOk;
    } catch (const std::exception& e) {
        manifest.write(manifest_path);
        return exit_for(e);
    }
}

int cmd_evaluate(const EvaluateOptions& options) {
    Manifest manifest;
    manifest.command = "evaluate";
    const std::string manifest_path = manifest_path_for(options.common, options.results_path);
    try {
        const RunConfig config = resolve_config(options.common);
        manifest.config_digest = config.digest;
        manifest.seed = config.seed;

        gateway::Gateway gw = build_gateway(config, options.common.live);
        if (!gw.has_backend(config.judge_backend))
            throw ConfigError("judge backend '" + config.judge_backend + "' is not configured");
        gateway::PromptLibrary library(config.prompts_dir);
        gateway::LlmClient judge_client(gw, library, config.judge_backend,
                                        model_tag(config, config.judge_backend), "judge",
                                        config.gen.temperature);
        evals::Evaluator evaluator(judge_client, config.gen.max_tokens_judge);

        const auto transcripts = dialogue::read_dataset(options.dataset_path);
        manifest.inputs = static_cast<long>(transcripts.size());
        if (transcripts.empty()) {
            manifest.write(manifest_path);
            log::error("dataset is empty: {}", options.dataset_path);
            return kExitEmpty;
        }

        std::vector<evals::EvalRecord> records;
        long skipped = 0;
        for (const auto& t : transcripts) {
            if (t.status != dialogue::TranscriptStatus::Complete) {
                ++skipped;
                continue;
            }
            records.push_back(evaluator.evaluate_transcript(t));
            if (records.back().errors.empty()) manifest.succeeded += 1;
            else manifest.failed += 1;
        }
        evals::write_eval_records(records, options.results_path, /*append=*/true);
        manifest.write(manifest_path);
        fmt::print("{} record(s) appended to {} ({} non-Complete transcript(s) skipped)\n",
                   records.size(), options.results_path, skipped);
        return kExitOk;
    } catch (const std::exception& e) {
        manifest.write(manifest_path);
        return exit_for(e);
    }
}

int cmd_report(const ReportOptions& options) {
    Manifest manifest;
    manifest.command = "report";
    const std::string manifest_path =
        manifest_path_for(options.common, options.out_dir + "/report");
    try {
        const RunConfig config = resolve_config(options.common);
        manifest.config_digest = config.digest;
        manifest.seed = config.seed;

        const auto records = evals::read_eval_records(options.results_path);
        manifest.inputs = static_cast<long>(records.size());
        if (records.empty()) {
            manifest.write(manifest_path);
            log::error("no eval records in {}", options.results_path);
            return kExitEmpty;
        }

        const auto strata = analytics::stratify(records);
        const auto bins = analytics::bin_by_sensemaker_count(records);

        std::vector<analytics::ComparisonRow> comparisons;
        std::pair<std::string, std::string> compared;
        if (!options.compare.empty()) {
            if (options.compare.size() != 2)
                throw ConfigError("--compare takes exactly two model tags");
            compared = {options.compare[0], options.compare[1]};
            std::vector<evals::EvalRecord> a, b;
            for (const auto& r : records) {
                if (r.model == compared.first) a.push_back(r);
                else if (r.model == compared.second) b.push_back(r);
            }
            if (a.empty() || b.empty())
                throw ConfigError("one of the compared model tags has no records");
            comparisons = analytics::compare_models(a, b);
        }

        analytics::emit_report(strata, bins, comparisons, compared, options.out_dir);
        manifest.succeeded = manifest.inputs;
        manifest.write(manifest_path);
        fmt::print("report written to {}\n", options.out_dir);
        return kExitOk;
    } catch (const std::exception& e) {
        manifest.write(manifest_path);
        return exit_for(e);
    }
}

int cmd_validate(const ValidateOptions& options) {
    try {
        const auto transcripts = dialogue::read_dataset(options.dataset_path);
        long defects = 0;
        for (const auto& t : transcripts) {
            const auto findings = dialogue::validate_transcript(t);
            const bool consistent =
                findings.empty() == (t.status == dialogue::TranscriptStatus::Complete);
            if (!findings.empty() || !consistent) ++defects;
            for (const auto& finding : findings)
                fmt::print("{}: {} ({})\n", t.conversation_id,
                           dialogue::finding_kind_key(finding.kind), finding.detail);
            if (!consistent)
                fmt::print("{}: status '{}' disagrees with findings\n", t.conversation_id,
                           dialogue::status_key(t.status));
        }
        fmt::print("{} transcript(s), {} with findings\n", transcripts.size(), defects);
        return defects == 0 ? kExitOk : kExitFindings;
    } catch (const std::exception& e) {
        return exit_for(e);
    }
}

}  // namespace mhsense::cli
