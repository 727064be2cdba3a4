#include "multiga/http_backend.hpp"

#include <cstdlib>
#include <sstream>

#ifdef MULTIGA_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include "multiga/errors.hpp"

namespace multiga {

namespace {

// Splits "https://host:port/base/path" into origin and path prefix.
void split_endpoint(const std::string& endpoint, std::string& origin, std::string& path_prefix) {
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::config, "endpoint must include a scheme: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    if (path_start == std::string::npos) {
        origin = endpoint;
        path_prefix.clear();
    } else {
        origin = endpoint.substr(0, path_start);
        path_prefix = endpoint.substr(path_start);
        while (!path_prefix.empty() && path_prefix.back() == '/') path_prefix.pop_back();
    }
}

}  // namespace

HttpBackend::HttpBackend(BackendProfile profile) : Backend(std::move(profile)) {
    this->profile().validate();
    if (this->profile().endpoint.empty())
        throw Error(ErrorKind::config,
                    "backend profile '" + this->profile().name + "': endpoint must not be empty");
    std::string prefix;
    split_endpoint(this->profile().endpoint, base_url_, prefix);
    chat_path_ = prefix + "/chat/completions";
}

std::shared_ptr<HttpBackend> HttpBackend::create(BackendProfile profile) {
    return std::shared_ptr<HttpBackend>(new HttpBackend(std::move(profile)));
}

std::string HttpBackend::attempt(std::string_view system_text, std::string_view user_text,
                                 std::optional<TokenUsage>& usage) const {
    const auto& p = profile();

    const char* token = nullptr;
    if (!p.auth_token_env.empty()) {
        token = std::getenv(p.auth_token_env.c_str());
        if (!token || !*token)
            throw Error(ErrorKind::credential,
                        "auth token environment variable '" + p.auth_token_env + "' is not set");
    }

    nlohmann::json body = {
        {"model", p.model},
        {"messages",
         {{{"role", "system"}, {"content", std::string(system_text)}},
          {{"role", "user"}, {"content", std::string(user_text)}}}},
        {"temperature", p.temperature},
        {"max_tokens", p.max_output_tokens},
    };

    httplib::Client client(base_url_);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(p.timeout);
    client.set_connection_timeout(secs.count() ? secs.count() : 1, 0);
    client.set_read_timeout(secs.count() ? secs.count() : 1, 0);
    client.set_write_timeout(secs.count() ? secs.count() : 1, 0);
    httplib::Headers headers;
    if (token) headers.emplace("Authorization", std::string("Bearer ") + token);

    auto res = client.Post(chat_path_, headers, body.dump(), "application/json");
    if (!res)
        throw Error(ErrorKind::transport,
                    "backend '" + p.name + "': " + httplib::to_string(res.error()));

    if (res->status == 401 || res->status == 403)
        throw Error(ErrorKind::credential,
                    "backend '" + p.name + "': authentication rejected (HTTP " +
                        std::to_string(res->status) + ")");
    if (res->status == 408 || res->status == 429 || res->status >= 500)
        throw Error(ErrorKind::transport, "backend '" + p.name + "': HTTP " +
                                              std::to_string(res->status));
    if (res->status != 200)
        throw Error(ErrorKind::config, "backend '" + p.name + "': HTTP " +
                                           std::to_string(res->status) + ": " + res->body);

    nlohmann::json reply;
    try {
        reply = nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::transport,
                    "backend '" + p.name + "': malformed response body: " + e.what());
    }
    if (!reply.contains("choices") || reply["choices"].empty() ||
        !reply["choices"][0].contains("message"))
        throw Error(ErrorKind::transport,
                    "backend '" + p.name + "': response carries no choices[0].message");

    if (reply.contains("usage") && reply["usage"].is_object()) {
        TokenUsage u;
        u.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
        u.completion_tokens = reply["usage"].value("completion_tokens", 0);
        usage = u;
    }
    return reply["choices"][0]["message"].value("content", "");
}

}  // namespace multiga
