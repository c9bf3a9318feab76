#include "mhsense/gateway/scripted_backend.hpp"

#include "mhsense/errors.hpp"
#include "mhsense/util.hpp"

namespace mhsense::gateway {

namespace {
std::string prompt_key(const std::string& system_prompt, const std::string& user_prompt) {
    std::uint64_t h = fnv1a64(system_prompt);
    h = fnv1a64("\x1e", h);
    h = fnv1a64(user_prompt, h);
    return hex64(h);
}
}  // namespace

void ScriptedBackend::script(const std::string& template_name, const Bindings& bindings,
                             std::string reply) {
    script_digest(template_name, binding_digest(bindings), std::move(reply));
}

void ScriptedBackend::script_digest(const std::string& template_name, const std::string& digest,
                                    std::string reply) {
    std::lock_guard<std::mutex> lock(mutex_);
    exact_[template_name + "|" + digest] = std::move(reply);
}

void ScriptedBackend::script_prompt(const std::string& system_prompt,
                                    const std::string& user_prompt, std::string reply) {
    std::lock_guard<std::mutex> lock(mutex_);
    prompt_hash_[prompt_key(system_prompt, user_prompt)] = std::move(reply);
}

void ScriptedBackend::push_role_reply(const std::string& role, std::string reply) {
    std::lock_guard<std::mutex> lock(mutex_);
    role_queues_[role].push_back(std::move(reply));
}

void ScriptedBackend::set_fallback(
    std::function<std::optional<std::string>(const ChatRequest&)> fn) {
    std::lock_guard<std::mutex> lock(mutex_);
    fallback_ = std::move(fn);
}

ChatResponse ScriptedBackend::complete(const ChatRequest& request) {
    std::lock_guard<std::mutex> lock(mutex_);
    log_.push_back(request);

    ChatResponse response;
    response.backend_id = id_;
    response.latency_ms = 0;

    if (!request.template_name.empty()) {
        auto it = exact_.find(request.template_name + "|" + request.binding_digest);
        if (it != exact_.end()) {
            response.text = it->second;
            return response;
        }
    }
    auto hit = prompt_hash_.find(prompt_key(request.system_prompt, request.user_prompt));
    if (hit != prompt_hash_.end()) {
        response.text = hit->second;
        return response;
    }
    auto queue = role_queues_.find(request.role);
    if (queue != role_queues_.end() && !queue->second.empty()) {
        response.text = std::move(queue->second.front());
        queue->second.pop_front();
        return response;
    }
    if (fallback_) {
        if (auto reply = fallback_(request)) {
            response.text = std::move(*reply);
            return response;
        }
    }
    throw BackendRefusal("scripted backend has no reply for template '" + request.template_name +
                         "' (role '" + request.role + "')");
}

std::vector<ChatRequest> ScriptedBackend::requests() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_;
}

std::size_t ScriptedBackend::call_count() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return log_.size();
}

std::vector<ChatRequest> ScriptedBackend::requests_for(const std::string& template_name) const {
    std::lock_guard<std::mutex> lock(mutex_);
    std::vector<ChatRequest> out;
    for (const auto& r : log_) {
        if (r.template_name == template_name) out.push_back(r);
    }
    return out;
}

}  // namespace mhsense::gateway
