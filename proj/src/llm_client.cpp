#include "mhsense/gateway/llm_client.hpp"

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"

namespace mhsense::gateway {

LlmClient::LlmClient(Gateway& gateway, const PromptLibrary& library, std::string backend_id,
                     std::string model_id, std::string role, double temperature)
    : gateway_(gateway),
      library_(library),
      backend_id_(std::move(backend_id)),
      model_id_(std::move(model_id)),
      role_(std::move(role)),
      temperature_(temperature) {}

ChatResponse LlmClient::call(const std::string& template_name, const Bindings& bindings,
                             int max_tokens) const {
    const PromptFile& file = library_.get(template_name);
    ChatRequest request;
    request.model_id = model_id_;
    request.system_prompt = render_template(file.system, bindings);
    request.user_prompt = render_template(file.user, bindings);
    request.temperature = temperature_;
    request.max_tokens = max_tokens;
    request.template_name = template_name;
    request.binding_digest = binding_digest(bindings);
    request.role = role_;
    request.bindings = bindings;
    return gateway_.complete(backend_id_, request);
}

std::string LlmClient::call_text(const std::string& template_name, const Bindings& bindings,
                                 int max_tokens) const {
    return call(template_name, bindings, max_tokens).text;
}

LabeledOutput LlmClient::call_labeled(const std::string& template_name, const Bindings& bindings,
                                      int max_tokens, const std::vector<std::string>& expected,
                                      const std::set<std::string>& numeric,
                                      const Validator& validator) const {
    for (int attempt = 0;; ++attempt) {
        const ChatResponse response = call(template_name, bindings, max_tokens);
        try {
            LabeledOutput parsed = parse_labeled(response.text, expected, numeric);
            if (validator) validator(parsed);
            return parsed;
        } catch (const ParseError& e) {
            if (attempt >= parse_retries) throw;
            log::warn("malformed reply for '{}' (attempt {}/{}): {}", template_name, attempt + 1,
                      parse_retries + 1, e.what());
        }
    }
}

}  // namespace mhsense::gateway
