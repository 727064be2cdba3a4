#pragma once

#include <stdexcept>
#include <string>

namespace multiga {

enum class ErrorKind {
    config,            // invalid configuration or profile
    io,                // file not found / unreadable
    schema,            // structured file fails validation
    render,            // template rendering failure (missing binding)
    parse,             // reply or text cannot be parsed
    transport,         // retryable backend failure (timeout, 429, 5xx)
    credential,        // auth failure, never retried
    script_exhausted,  // scripted backend ran out of replies
    initialization,    // all seed slots failed
    extinction,        // population emptied out
    data,              // dataset / gold data defect
    validation,        // precondition violated (unknown person, empty store)
    cancelled,         // cooperative cancellation
    runtime,           // anything else
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    bool retryable() const noexcept { return kind_ == ErrorKind::transport; }

private:
    ErrorKind kind_;
};

}  // namespace multiga
