#include "mhsense/gateway/config.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::gateway {

namespace {

std::vector<std::string> split_key(const std::string& key) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (start <= key.size()) {
        std::size_t dot = key.find('.', start);
        if (dot == std::string::npos) {
            parts.push_back(key.substr(start));
            break;
        }
        parts.push_back(key.substr(start, dot - start));
        start = dot + 1;
    }
    return parts;
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects an integer, got '" + value + "'");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "' expects a number, got '" + value + "'");
    }
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig config;
    config.digest = hex64(fnv1a64(text));

    std::size_t line_no = 0;
    for (const auto& raw : split_lines(text)) {
        ++line_no;
        std::string line = raw;
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + " is not 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto parts = split_key(key);

        if (parts.size() == 3 && parts[0] == "gen" && parts[1] == "max_tokens") {
            const int v = static_cast<int>(parse_int(key, value));
            if (parts[2] == "patient") config.gen.max_tokens_patient = v;
            else if (parts[2] == "utility") config.gen.max_tokens_utility = v;
            else if (parts[2] == "reasoning") config.gen.max_tokens_reasoning = v;
            else if (parts[2] == "judge") config.gen.max_tokens_judge = v;
            else throw ConfigError("unknown config key '" + key + "'");
            continue;
        }
        if (parts.size() == 2 && parts[0] == "gen" && parts[1] == "temperature") {
            config.gen.temperature = parse_real(key, value);
            continue;
        }
        if (parts.size() == 2 && parts[0] == "actor") {
            if (parts[1] == "patient") config.patient_backend = value;
            else if (parts[1] == "sensemaker") config.sensemaker_backend = value;
            else if (parts[1] == "utility") config.utility_backend = value;
            else if (parts[1] == "judge") config.judge_backend = value;
            else throw ConfigError("unknown config key '" + key + "'");
            continue;
        }
        if (parts.size() == 2 && parts[0] == "run") {
            if (parts[1] == "parallelism") config.parallelism = static_cast<int>(parse_int(key, value));
            else if (parts[1] == "seed") config.seed = static_cast<std::uint64_t>(parse_int(key, value));
            else if (parts[1] == "safety_cap") config.safety_cap = static_cast<int>(parse_int(key, value));
            else throw ConfigError("unknown config key '" + key + "'");
            continue;
        }
        if (parts.size() == 2 && parts[0] == "prompts" && parts[1] == "dir") {
            config.prompts_dir = value;
            continue;
        }
        if (parts.size() == 3 && parts[0] == "backend") {
            BackendConfig& backend = config.backends[parts[1]];
            backend.id = parts[1];
            const std::string& field = parts[2];
            if (field == "kind") backend.kind = value;
            else if (field == "endpoint") backend.endpoint = value;
            else if (field == "model") backend.model = value;
            else if (field == "api_key_env") backend.api_key_env = value;
            else if (field == "rate_per_min") backend.rate_per_minute = parse_real(key, value);
            else if (field == "retries") backend.retries = static_cast<int>(parse_int(key, value));
            else if (field == "backoff_ms") backend.backoff_ms = static_cast<int>(parse_int(key, value));
            else if (field == "api_key")
                throw ConfigError("inline API keys are not allowed; set backend." + parts[1] +
                                  ".api_key_env to the name of an environment variable");
            else throw ConfigError("unknown config key '" + key + "'");
            continue;
        }
        throw ConfigError("unknown config key '" + key + "'");
    }

    for (const auto& [id, backend] : config.backends) {
        if (backend.kind == "http" && backend.endpoint.empty())
            throw ConfigError("backend '" + id + "' is http but has no endpoint");
        if (backend.kind != "http" && backend.kind != "demo")
            throw ConfigError("backend '" + id + "' has unknown kind '" + backend.kind + "'");
    }
    return config;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace mhsense::gateway
