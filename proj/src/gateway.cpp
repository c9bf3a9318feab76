#include "mhsense/gateway/gateway.hpp"

#include <thread>

#include "mhsense/errors.hpp"
#include "mhsense/log.hpp"

namespace mhsense::gateway {

TokenBucket::TokenBucket(double per_minute, Clock clock, Sleeper sleeper)
    : per_minute_(per_minute),
      tokens_(per_minute > 0 ? per_minute : 0),
      clock_(clock ? std::move(clock) : [] { return std::chrono::steady_clock::now(); }),
      sleeper_(sleeper ? std::move(sleeper)
                       : [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); }) {
    last_ = clock_();
}

void TokenBucket::refill(std::chrono::steady_clock::time_point now) {
    const double elapsed_s =
        std::chrono::duration_cast<std::chrono::duration<double>>(now - last_).count();
    last_ = now;
    tokens_ = std::min(per_minute_, tokens_ + elapsed_s * per_minute_ / 60.0);
}

void TokenBucket::acquire() {
    if (per_minute_ <= 0) return;
    std::unique_lock<std::mutex> lock(mutex_);
    for (;;) {
        refill(clock_());
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const double deficit = 1.0 - tokens_;
        const auto wait = std::chrono::milliseconds(
            static_cast<long>(deficit * 60000.0 / per_minute_) + 1);
        lock.unlock();
        sleeper_(wait);
        lock.lock();
    }
}

double TokenBucket::available() {
    if (per_minute_ <= 0) return 1e9;
    std::lock_guard<std::mutex> lock(mutex_);
    refill(clock_());
    return tokens_;
}

void Gateway::add_backend(std::shared_ptr<Backend> backend, BackendSettings settings) {
    const std::string id = backend->id();
    Entry entry;
    entry.backend = std::move(backend);
    entry.settings = settings;
    if (settings.rate_per_minute > 0)
        entry.limiter = std::make_unique<TokenBucket>(settings.rate_per_minute);
    backends_[id] = std::move(entry);
}

bool Gateway::has_backend(const std::string& id) const { return backends_.count(id) > 0; }

void Gateway::set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleeper_ = std::move(sleeper);
}

ChatResponse Gateway::complete(const std::string& backend_id, const ChatRequest& request) {
    auto it = backends_.find(backend_id);
    if (it == backends_.end()) throw ConfigError("no backend configured with id '" + backend_id + "'");
    if (request.temperature < 0) throw ConfigError("temperature must be >= 0");
    if (request.max_tokens <= 0) throw ConfigError("max_tokens must be > 0");
    if (request.system_prompt.empty() || request.user_prompt.empty())
        throw ConfigError("prompts must be non-empty");

    Entry& entry = it->second;
    const int attempts = entry.settings.retries + 1;
    for (int attempt = 0;; ++attempt) {
        if (entry.limiter) entry.limiter->acquire();
        try {
            return entry.backend->complete(request);
        } catch (const TransportError& e) {
            if (attempt + 1 >= attempts) throw;
            const auto delay = std::chrono::milliseconds(
                static_cast<long>(entry.settings.backoff_base_ms) << attempt);
            log::warn("transport failure from '{}' (attempt {}/{}): {}", backend_id, attempt + 1,
                      attempts, e.what());
            if (sleeper_)
                sleeper_(delay);
            else
                std::this_thread::sleep_for(delay);
        }
        // AuthError / BackendRefusal propagate immediately.
    }
}

}  // namespace mhsense::gateway
