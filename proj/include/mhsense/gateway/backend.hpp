#pragma once

#include <map>
#include <string>

namespace mhsense::gateway {

struct ChatRequest {
    std::string model_id;
    std::string system_prompt;
    std::string user_prompt;
    double temperature = 0.0;
    int max_tokens = 1000;

    // Routing metadata. Live backends ignore it; scripted backends key
    // replies on (template_name, binding_digest) and fall back per role,
    // and the demo backend reads the raw bindings.
    std::string template_name;
    std::string binding_digest;
    std::string role;
    std::map<std::string, std::string> bindings;
};

struct ChatResponse {
    std::string text;
    long latency_ms = 0;
    std::string backend_id;
};

class Backend {
public:
    virtual ~Backend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual std::string id() const = 0;
};

}  // namespace mhsense::gateway
