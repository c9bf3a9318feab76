#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace mhsense::gateway {

struct BackendConfig {
    std::string id;
    std::string kind = "demo";  // demo | http
    std::string endpoint;
    std::string model;
    std::string api_key_env;
    double rate_per_minute = 0;
    int retries = 2;
    int backoff_ms = 200;
};

struct GenParams {
    double temperature = 0.0;
    int max_tokens_patient = 400;      // every patient-side call
    int max_tokens_utility = 1000;     // fact extraction, matching, redundancy
    int max_tokens_reasoning = 15000;  // stage determination, message generation
    int max_tokens_judge = 1000;
};

struct RunConfig {
    std::map<std::string, BackendConfig> backends;
    std::string patient_backend = "demo";
    std::string sensemaker_backend = "demo";
    std::string utility_backend = "demo";
    std::string judge_backend = "demo";
    GenParams gen;
    int parallelism = 4;
    std::uint64_t seed = 0;
    int safety_cap = 60;
    std::string prompts_dir = "prompts";
    std::string digest;  // digest of the source text, for manifests
};

// Parses the `key = value` configuration format ('#' starts a comment).
// Inline API keys are rejected: keys reach the process only through the
// environment variable named by backend.<id>.api_key_env.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace mhsense::gateway
