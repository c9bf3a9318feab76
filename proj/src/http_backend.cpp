#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "mhsense/gateway/http_backend.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>
#include <json.hpp>

#include "mhsense/errors.hpp"

namespace mhsense::gateway {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendOptions options) : options_(std::move(options)) {
    // Split "scheme://host[:port]/base/path" into client URL and path prefix.
    const std::string& ep = options_.endpoint;
    const std::size_t scheme_end = ep.find("://");
    if (scheme_end == std::string::npos) throw ConfigError("endpoint needs a scheme: " + ep);
    const std::size_t path_start = ep.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = ep;
        base_path_ = "";
    } else {
        base_url_ = ep.substr(0, path_start);
        base_path_ = ep.substr(path_start);
        while (!base_path_.empty() && base_path_.back() == '/') base_path_.pop_back();
    }
}

ChatResponse HttpBackend::complete(const ChatRequest& request) {
    json payload = {
        {"model", request.model_id.empty() ? options_.model : request.model_id},
        {"messages",
         {{{"role", "system"}, {"content", request.system_prompt}},
          {{"role", "user"}, {"content", request.user_prompt}}}},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };

    httplib::Headers headers;
    if (!options_.api_key_env.empty()) {
        const char* key = std::getenv(options_.api_key_env.c_str());
        if (!key || !*key)
            throw AuthError("environment variable " + options_.api_key_env + " is not set");
        headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    httplib::Client client(base_url_);
    client.set_connection_timeout(options_.connect_timeout_s);
    client.set_read_timeout(options_.read_timeout_s);

    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(base_path_ + "/chat/completions", headers, payload.dump(),
                              "application/json");
    const auto latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - started)
                             .count();

    if (!result)
        throw TransportError("request to " + base_url_ + " failed: " +
                             httplib::to_string(result.error()));

    const int status = result->status;
    if (status == 401 || status == 403)
        throw AuthError("backend '" + options_.id + "' rejected credentials (HTTP " +
                        std::to_string(status) + ")");
    if (status == 429 || status >= 500)
        throw TransportError("backend '" + options_.id + "' returned HTTP " +
                             std::to_string(status));
    if (status != 200)
        throw BackendRefusal("backend '" + options_.id + "' returned HTTP " +
                             std::to_string(status) + ": " + result->body.substr(0, 200));

    try {
        const json body = json::parse(result->body);
        ChatResponse response;
        response.text = body.at("choices").at(0).at("message").at("content").get<std::string>();
        response.latency_ms = latency;
        response.backend_id = options_.id;
        return response;
    } catch (const json::exception& e) {
        throw TransportError("unparseable completion payload from '" + options_.id +
                             "': " + std::string(e.what()));
    }
}

}  // namespace mhsense::gateway
