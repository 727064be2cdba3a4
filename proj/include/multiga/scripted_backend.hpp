#pragma once

#include <cstdint>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

#include "multiga/backend.hpp"

namespace multiga {

/// Deterministic stand-in for an LLM endpoint, used by offline tests and the
/// demo. Two script modes:
///   - queue: replies handed out in order; running past the end throws
///     (exhaustion is an error, never silent recycling).
///   - function: a pure function of the prompt, safe under concurrency.
/// Queue mutation is serialized internally, but reply ORDER is only
/// deterministic when the caller keeps max_parallel_calls = 1.
class ScriptedBackend : public Backend {
public:
    using ReplyFn = std::function<std::string(std::string_view system_text, std::string_view user_text)>;
    using DigestFn = std::function<std::string(std::uint64_t prompt_digest)>;

    static std::shared_ptr<ScriptedBackend> with_queue(std::string name,
                                                       std::vector<std::string> replies);
    static std::shared_ptr<ScriptedBackend> with_fn(std::string name, ReplyFn fn);
    /// Script as a pure function of the combined prompt digest.
    static std::shared_ptr<ScriptedBackend> with_digest_fn(std::string name, DigestFn fn);

    /// Total completed calls served so far.
    std::int64_t calls_served() const;
    /// Queue mode only: replies not yet handed out.
    std::size_t replies_remaining() const;

    std::string attempt_for_test(std::string_view system_text, std::string_view user_text) {
        std::optional<TokenUsage> usage;
        return attempt(system_text, user_text, usage);
    }

protected:
    std::string attempt(std::string_view system_text, std::string_view user_text,
                        std::optional<TokenUsage>& usage) const override;

private:
    explicit ScriptedBackend(BackendProfile profile) : Backend(std::move(profile)) {}

    static BackendProfile scripted_profile(std::string name);

    mutable std::mutex mutex_;
    mutable std::vector<std::string> queue_;
    mutable std::size_t queue_pos_ = 0;
    ReplyFn fn_;
    mutable std::int64_t calls_ = 0;
};

}  // namespace multiga
