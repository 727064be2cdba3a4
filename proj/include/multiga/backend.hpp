#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace multiga {

/// Connection and sampling parameters for one model endpoint. Only the NAME
/// of the environment variable holding the auth token is ever stored; the
/// secret itself never touches config files or logs.
struct BackendProfile {
    std::string name;
    std::string endpoint;
    std::string model;
    std::string auth_token_env;
    double temperature = 0.7;
    int max_output_tokens = 2048;
    std::chrono::milliseconds timeout{60000};
    int max_retries = 3;
    std::chrono::milliseconds backoff_base{500};

    /// Throws Error{config} on invalid fields (max_retries is capped at 10
    /// so a call always terminates).
    void validate() const;
};

struct TokenUsage {
    std::int64_t prompt_tokens = 0;
    std::int64_t completion_tokens = 0;
};

/// One completed call. reply_text is the assistant reply verbatim, recorded
/// before any sanitation; sanitized copies are derived elsewhere and never
/// overwrite it.
struct ChatExchange {
    std::string system_text;
    std::string user_text;
    std::string reply_text;
    std::optional<TokenUsage> token_usage;
    std::chrono::milliseconds latency{0};
    int attempts = 1;
};

/// A generator or evaluator handle. complete() wraps the single-attempt
/// hook with the profile's retry policy: transient failures (timeout, 429,
/// 5xx) back off exponentially up to max_retries; credential failures are
/// never retried. Handles are immutable after construction and safe to call
/// from many threads.
class Backend {
public:
    virtual ~Backend() = default;

    const BackendProfile& profile() const { return profile_; }

    ChatExchange complete(std::string_view system_text, std::string_view user_text) const;

protected:
    explicit Backend(BackendProfile profile) : profile_(std::move(profile)) {}

    /// One attempt. Throws Error; only ErrorKind::transport is retried.
    virtual std::string attempt(std::string_view system_text, std::string_view user_text,
                                std::optional<TokenUsage>& usage) const = 0;

private:
    BackendProfile profile_;
};

using BackendHandle = std::shared_ptr<Backend>;

}  // namespace multiga
