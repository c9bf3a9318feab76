#pragma once

#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "mhsense/gateway/backend.hpp"
#include "mhsense/gateway/template.hpp"

namespace mhsense::gateway {

// Deterministic offline backend for tests. Reply lookup order:
//   1. exact key (template name, binding digest)  -- pure
//   2. prompt hash of (system, user)              -- pure
//   3. next queued reply for the request's role   -- consumes the queue
//   4. fallback handler, if set
// and BackendRefusal if nothing matches. Every request is recorded.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::string id = "scripted") : id_(std::move(id)) {}

    void script(const std::string& template_name, const Bindings& bindings, std::string reply);
    void script_digest(const std::string& template_name, const std::string& digest,
                       std::string reply);
    void script_prompt(const std::string& system_prompt, const std::string& user_prompt,
                       std::string reply);
    void push_role_reply(const std::string& role, std::string reply);
    void set_fallback(std::function<std::optional<std::string>(const ChatRequest&)> fn);

    ChatResponse complete(const ChatRequest& request) override;
    std::string id() const override { return id_; }

    std::vector<ChatRequest> requests() const;
    std::size_t call_count() const;
    // Recorded requests whose template matches, newest last.
    std::vector<ChatRequest> requests_for(const std::string& template_name) const;

private:
    std::string id_;
    std::map<std::string, std::string> exact_;        // "template|digest" -> reply
    std::map<std::string, std::string> prompt_hash_;  // hash(system,user) -> reply
    std::map<std::string, std::deque<std::string>> role_queues_;
    std::function<std::optional<std::string>(const ChatRequest&)> fallback_;
    std::vector<ChatRequest> log_;
    mutable std::mutex mutex_;
};

}  // namespace mhsense::gateway
