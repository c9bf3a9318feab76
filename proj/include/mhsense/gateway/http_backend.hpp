#pragma once

#include <string>

#include "mhsense/gateway/backend.hpp"

namespace mhsense::gateway {

struct HttpBackendOptions {
    std::string id;
    std::string endpoint;     // e.g. "https://api.example.com/v1"
    std::string model;        // default model when the request leaves model_id empty
    std::string api_key_env;  // environment variable holding the key; never the key itself
    int connect_timeout_s = 10;
    int read_timeout_s = 300;
};

// Chat-completions client for OpenAI-compatible endpoints. One attempt per
// call; the gateway owns retries and rate limiting.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendOptions options);

    ChatResponse complete(const ChatRequest& request) override;
    std::string id() const override { return options_.id; }

private:
    HttpBackendOptions options_;
    std::string base_url_;
    std::string base_path_;
};

}  // namespace mhsense::gateway
