#include "multiga/embedder.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#ifdef MULTIGA_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include "multiga/digest.hpp"
#include "multiga/errors.hpp"

namespace multiga {

namespace {

void l2_normalize(std::vector<double>& v, std::string_view what) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq == 0.0)
        throw Error(ErrorKind::validation,
                    std::string(what) + " embeds to the zero vector and cannot be normalized");
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
}

}  // namespace

std::size_t HashedBowEmbedder::bucket_of(std::string_view token) {
    return static_cast<std::size_t>(fnv1a64(token) % kDimension);
}

std::vector<double> HashedBowEmbedder::embed(std::string_view text) const {
    std::vector<double> v(kDimension, 0.0);
    std::string token;
    bool any = false;
    auto flush = [&] {
        if (token.empty()) return;
        v[bucket_of(token)] += 1.0;
        any = true;
        token.clear();
    };
    for (char c : text) {
        const unsigned char u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            token.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    if (!any) throw Error(ErrorKind::validation, "text has no word tokens to embed");
    l2_normalize(v, "text");
    return v;
}

HttpEmbedder::HttpEmbedder(BackendProfile profile, std::size_t dimension)
    : profile_(std::move(profile)), dimension_(dimension) {
    profile_.validate();
}

std::string HttpEmbedder::id() const { return "http:" + profile_.model; }

std::vector<double> HttpEmbedder::embed(std::string_view text) const {
    const char* token = nullptr;
    if (!profile_.auth_token_env.empty()) {
        token = std::getenv(profile_.auth_token_env.c_str());
        if (!token || !*token)
            throw Error(ErrorKind::credential, "auth token environment variable '" +
                                                   profile_.auth_token_env + "' is not set");
    }
    auto scheme_end = profile_.endpoint.find("://");
    if (scheme_end == std::string::npos)
        throw Error(ErrorKind::config, "embedder endpoint must include a scheme");
    auto path_start = profile_.endpoint.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? profile_.endpoint
                                                         : profile_.endpoint.substr(0, path_start);
    std::string prefix = path_start == std::string::npos ? "" : profile_.endpoint.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();

    nlohmann::json body = {{"model", profile_.model}, {"input", std::string(text)}};
    httplib::Client client(origin);
    httplib::Headers headers;
    if (token) headers.emplace("Authorization", std::string("Bearer ") + token);
    auto res = client.Post(prefix + "/embeddings", headers, body.dump(), "application/json");
    if (!res || res->status != 200)
        throw Error(ErrorKind::transport,
                    "embedding endpoint failed: " +
                        (res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error())));
    nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
    if (reply.is_discarded() || !reply.contains("data") || reply["data"].empty())
        throw Error(ErrorKind::transport, "embedding endpoint returned no data");
    std::vector<double> v = reply["data"][0]["embedding"].get<std::vector<double>>();
    if (v.size() != dimension_)
        throw Error(ErrorKind::config, "embedding dimension mismatch: expected " +
                                           std::to_string(dimension_) + ", got " +
                                           std::to_string(v.size()));
    l2_normalize(v, "text");
    return v;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw Error(ErrorKind::validation, "cosine of vectors with different dimensions");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    return dot;
}

std::shared_ptr<Embedder> default_embedder() {
    static auto instance = std::make_shared<HashedBowEmbedder>();
    return instance;
}

}  // namespace multiga
