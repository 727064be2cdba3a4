#pragma once

// Shared fixtures for the offline test suites: scripted backends, a minimal
// task config, fault injection, and temp directories.

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "multiga/backend.hpp"
#include "multiga/errors.hpp"
#include "multiga/scripted_backend.hpp"
#include "multiga/taskspec.hpp"
#include "multiga/template.hpp"

namespace testing {

inline multiga::TaskSpec toy_task() {
    return multiga::parse_taskspec(R"({
        "task_id": "toy",
        "templates": {
            "init": {"system": "seed system", "user": "solve {problem}"},
            "crossover": {"system": "crossover system",
                          "user": "combine {parent_1} and {parent_2} for {problem}"},
            "eval": {"system": "scoring system",
                     "user": "score {candidate} for {problem}",
                     "candidate_placeholder": "candidate"}
        },
        "placeholders": ["problem", "parent_1", "parent_2", "candidate"],
        "answer_rule": {"kind": "free_text"}
    })",
                                   "toy");
}

inline multiga::TemplateContext toy_context() {
    multiga::TemplateContext ctx;
    ctx.set("problem", "p");
    return ctx;
}

inline std::shared_ptr<multiga::ScriptedBackend> queue_backend(
    std::string name, std::vector<std::string> replies) {
    return multiga::ScriptedBackend::with_queue(std::move(name), std::move(replies));
}

// Evaluator as two pure functions, routed on the system prompt: every
// crossover system prompt in this repo mentions "crossover".
inline std::shared_ptr<multiga::ScriptedBackend> fn_evaluator(
    std::function<std::string(std::string_view user)> on_score,
    std::function<std::string(std::string_view user)> on_crossover) {
    return multiga::ScriptedBackend::with_fn(
        "scripted-evaluator",
        [on_score = std::move(on_score), on_crossover = std::move(on_crossover)](
            std::string_view system_text, std::string_view user_text) {
            if (system_text.find("crossover") != std::string_view::npos)
                return on_crossover(user_text);
            return on_score(user_text);
        });
}

// Fails the first n attempts with a retryable transport error, then settles
// on a fixed reply. Counts attempts.
class FlakyBackend : public multiga::Backend {
public:
    FlakyBackend(int failures, std::string reply, int max_retries,
                 std::chrono::milliseconds backoff = std::chrono::milliseconds{0})
        : Backend(make_profile(max_retries, backoff)),
          failures_(failures),
          reply_(std::move(reply)) {}

    int attempts() const { return attempts_.load(); }

protected:
    std::string attempt(std::string_view, std::string_view,
                        std::optional<multiga::TokenUsage>&) const override {
        const int n = ++attempts_;
        if (n <= failures_)
            throw multiga::Error(multiga::ErrorKind::transport, "injected fault");
        return reply_;
    }

private:
    static multiga::BackendProfile make_profile(int max_retries,
                                                std::chrono::milliseconds backoff) {
        multiga::BackendProfile p;
        p.name = "flaky";
        p.endpoint = "scripted:";
        p.model = "flaky";
        p.max_retries = max_retries;
        p.backoff_base = backoff;
        return p;
    }

    int failures_;
    std::string reply_;
    mutable std::atomic<int> attempts_{0};
};

class TempDir {
public:
    TempDir() {
        char tmpl[] = "/tmp/multiga-test-XXXXXX";
        const char* dir = mkdtemp(tmpl);
        if (!dir) throw std::runtime_error("mkdtemp failed");
        path_ = dir;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::string& path() const { return path_; }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return text;
}

}  // namespace testing
