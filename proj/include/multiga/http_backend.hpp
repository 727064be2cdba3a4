#pragma once

#include <memory>

#include "multiga/backend.hpp"

namespace multiga {

/// Chat-completions client over an OpenAI-compatible gateway. The request
/// body is {model, messages:[system,user], temperature, max_tokens}; the
/// reply is choices[0].message.content. Bearer auth comes from the
/// environment variable named in the profile at call time.
class HttpBackend : public Backend {
public:
    static std::shared_ptr<HttpBackend> create(BackendProfile profile);

protected:
    std::string attempt(std::string_view system_text, std::string_view user_text,
                        std::optional<TokenUsage>& usage) const override;

private:
    explicit HttpBackend(BackendProfile profile);

    std::string base_url_;   // scheme://host[:port]
    std::string chat_path_;  // path prefix + /chat/completions
};

}  // namespace multiga
