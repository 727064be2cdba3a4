#include "multiga/scripted_backend.hpp"

#include "multiga/digest.hpp"
#include "multiga/errors.hpp"

namespace multiga {

BackendProfile ScriptedBackend::scripted_profile(std::string name) {
    BackendProfile p;
    p.name = std::move(name);
    p.endpoint = "scripted:";
    p.model = "scripted";
    p.temperature = 0.0;
    p.max_retries = 0;
    p.backoff_base = std::chrono::milliseconds{0};
    return p;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::with_queue(std::string name,
                                                             std::vector<std::string> replies) {
    auto backend = std::shared_ptr<ScriptedBackend>(
        new ScriptedBackend(scripted_profile(std::move(name))));
    backend->queue_ = std::move(replies);
    return backend;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::with_fn(std::string name, ReplyFn fn) {
    auto backend = std::shared_ptr<ScriptedBackend>(
        new ScriptedBackend(scripted_profile(std::move(name))));
    backend->fn_ = std::move(fn);
    return backend;
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::with_digest_fn(std::string name, DigestFn fn) {
    return with_fn(std::move(name),
                   [fn = std::move(fn)](std::string_view system_text, std::string_view user_text) {
                       std::string prompt;
                       prompt.reserve(system_text.size() + user_text.size() + 1);
                       prompt.append(system_text);
                       prompt.push_back('\n');
                       prompt.append(user_text);
                       return fn(fnv1a64(prompt));
                   });
}

std::int64_t ScriptedBackend::calls_served() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t ScriptedBackend::replies_remaining() const {
    std::lock_guard lock(mutex_);
    return queue_.size() - queue_pos_;
}

std::string ScriptedBackend::attempt(std::string_view system_text, std::string_view user_text,
                                     std::optional<TokenUsage>&) const {
    if (fn_) {
        std::string reply = fn_(system_text, user_text);
        std::lock_guard lock(mutex_);
        ++calls_;
        return reply;
    }
    std::lock_guard lock(mutex_);
    if (queue_pos_ >= queue_.size()) {
        throw Error(ErrorKind::script_exhausted,
                    "scripted backend '" + profile().name + "' exhausted after " +
                        std::to_string(queue_.size()) + " replies");
    }
    ++calls_;
    return queue_[queue_pos_++];
}

}  // namespace multiga
