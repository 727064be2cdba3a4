#include "multiga/backend.hpp"

#include <chrono>
#include <random>
#include <sstream>
#include <thread>

#include "multiga/errors.hpp"
#include "multiga/types.hpp"

namespace multiga {

void GAConfig::validate() const {
    auto fail = [](const std::string& what) { throw Error(ErrorKind::config, what); };
    if (samples_per_generator < 1) fail("samples_per_generator must be >= 1");
    if (top_k < 1) fail("top_k must be >= 1");
    if (retire_threshold < 0.0 || retire_threshold > 1.0)
        fail("retire_threshold must lie in [0,1]");
    if (max_generations < 1) fail("max_generations must be >= 1");
    if (target_fitness < 0.0 || target_fitness > 1.0) fail("target_fitness must lie in [0,1]");
    if (max_parallel_calls < 1) fail("max_parallel_calls must be >= 1");
    if (population_cap && *population_cap < 1) fail("population_cap must be >= 1 when set");
}

void BackendProfile::validate() const {
    auto fail = [this](const std::string& what) {
        throw Error(ErrorKind::config, "backend profile '" + name + "': " + what);
    };
    if (name.empty()) throw Error(ErrorKind::config, "backend profile name must not be empty");
    if (temperature < 0.0) fail("temperature must be >= 0");
    if (max_output_tokens < 1) fail("max_output_tokens must be >= 1");
    if (max_retries < 0 || max_retries > 10) fail("max_retries must lie in [0,10]");
    if (timeout.count() <= 0) fail("timeout must be positive");
    if (backoff_base.count() < 0) fail("backoff_base must be >= 0");
}

const char* to_string(Termination t) {
    switch (t) {
        case Termination::target_reached: return "target_reached";
        case Termination::budget_exhausted: return "budget_exhausted";
    }
    return "unknown";
}

namespace {

std::chrono::milliseconds backoff_delay(std::chrono::milliseconds base, int attempt) {
    if (base.count() <= 0) return std::chrono::milliseconds{0};
    // Exponential with jitter; jitter only affects wall time, never history.
    const auto scaled = base.count() << std::min(attempt, 10);
    thread_local std::minstd_rand jitter_rng{std::random_device{}()};
    const auto jitter = static_cast<long long>(jitter_rng() % (scaled / 2 + 1));
    return std::chrono::milliseconds{scaled + jitter};
}

}  // namespace

ChatExchange Backend::complete(std::string_view system_text, std::string_view user_text) const {
    const auto& p = profile();
    ChatExchange exchange;
    exchange.system_text = std::string(system_text);
    exchange.user_text = std::string(user_text);

    const auto started = std::chrono::steady_clock::now();
    const int max_attempts = p.max_retries + 1;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
        try {
            std::optional<TokenUsage> usage;
            exchange.reply_text = this->attempt(system_text, user_text, usage);
            exchange.token_usage = usage;
            exchange.attempts = attempt + 1;
            exchange.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - started);
            return exchange;
        } catch (const Error& e) {
            if (!e.retryable() || attempt + 1 == max_attempts) {
                if (e.retryable()) {
                    std::ostringstream msg;
                    msg << "backend '" << p.name << "': retries exhausted after "
                        << max_attempts << " attempt(s): " << e.what();
                    throw Error(ErrorKind::transport, msg.str());
                }
                throw;
            }
            std::this_thread::sleep_for(backoff_delay(p.backoff_base, attempt));
        }
    }
    throw Error(ErrorKind::runtime, "unreachable retry state");
}

}  // namespace multiga
