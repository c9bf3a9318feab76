#pragma once

#include <optional>
#include <string>

#include "mhsense/gateway/backend.hpp"

namespace mhsense::gateway {

// Offline actor brain: a pure rule-based function of the request that
// produces format-correct replies for every template in the pipeline, so the
// whole engine runs end-to-end without network access. Identical requests
// always get identical replies, across threads and process runs.
class DemoBackend : public Backend {
public:
    explicit DemoBackend(std::string id = "demo") : id_(std::move(id)) {}

    ChatResponse complete(const ChatRequest& request) override;
    std::string id() const override { return id_; }

    // Exposed so ScriptedBackend can delegate unmatched requests here.
    static std::optional<std::string> reply_for(const ChatRequest& request);

private:
    std::string id_;
};

}  // namespace mhsense::gateway
