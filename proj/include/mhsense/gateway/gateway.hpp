#pragma once

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "mhsense/gateway/backend.hpp"

namespace mhsense::gateway {

struct BackendSettings {
    int retries = 2;             // additional attempts after the first
    int backoff_base_ms = 200;   // doubled per attempt
    double rate_per_minute = 0;  // <= 0 means unlimited
};

// Token bucket with injectable clock/sleeper so tests run without waiting.
class TokenBucket {
public:
    using Clock = std::function<std::chrono::steady_clock::time_point()>;
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    explicit TokenBucket(double per_minute, Clock clock = nullptr, Sleeper sleeper = nullptr);

    void acquire();
    double available();  // tokens currently in the bucket

private:
    void refill(std::chrono::steady_clock::time_point now);

    double per_minute_;
    double tokens_;
    std::chrono::steady_clock::time_point last_;
    Clock clock_;
    Sleeper sleeper_;
    std::mutex mutex_;
};

// Front door for chat completion: validates requests, applies the per-backend
// rate limit, and retries transient transport failures with exponential
// backoff. AuthError and BackendRefusal are never retried.
class Gateway {
public:
    Gateway() = default;

    void add_backend(std::shared_ptr<Backend> backend, BackendSettings settings = {});
    bool has_backend(const std::string& id) const;

    ChatResponse complete(const std::string& backend_id, const ChatRequest& request);

    // Test hook: replaces the backoff sleep.
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper);

private:
    struct Entry {
        std::shared_ptr<Backend> backend;
        BackendSettings settings;
        std::unique_ptr<TokenBucket> limiter;
    };
    std::map<std::string, Entry> backends_;
    std::function<void(std::chrono::milliseconds)> sleeper_;
};

}  // namespace mhsense::gateway
