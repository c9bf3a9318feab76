#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "mhsense/gateway/gateway.hpp"
#include "mhsense/gateway/parse.hpp"
#include "mhsense/gateway/template.hpp"

namespace mhsense::gateway {

// Binds a gateway backend to a prompt library for one actor role. Renders the
// named template pair, stamps the request with routing metadata, and applies
// the strict-format retry policy: a reply that fails to parse (or fails the
// caller's validator) is re-requested up to two more times before the parse
// error surfaces.
class LlmClient {
public:
    LlmClient(Gateway& gateway, const PromptLibrary& library, std::string backend_id,
              std::string model_id, std::string role, double temperature = 0.0);

    ChatResponse call(const std::string& template_name, const Bindings& bindings,
                      int max_tokens) const;

    // Whole reply as text (prompts whose instructions say "only respond with
    // the answer").
    std::string call_text(const std::string& template_name, const Bindings& bindings,
                          int max_tokens) const;

    using Validator = std::function<void(const LabeledOutput&)>;
    LabeledOutput call_labeled(const std::string& template_name, const Bindings& bindings,
                               int max_tokens, const std::vector<std::string>& expected,
                               const std::set<std::string>& numeric = {},
                               const Validator& validator = nullptr) const;

    const std::string& backend_id() const { return backend_id_; }
    const std::string& model_id() const { return model_id_; }
    const std::string& role() const { return role_; }
    const PromptLibrary& library() const { return library_; }

    int parse_retries = 2;

private:
    Gateway& gateway_;
    const PromptLibrary& library_;
    std::string backend_id_;
    std::string model_id_;
    std::string role_;
    double temperature_;
};

}  // namespace mhsense::gateway
