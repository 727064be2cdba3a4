#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "multiga/backend.hpp"

namespace multiga {

/// Text embedder used for few-shot example retrieval. Implementations must
/// return L2-normalized vectors of a fixed dimensionality.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual std::string id() const = 0;
    virtual std::size_t dimension() const = 0;
    /// Throws Error{validation} on text that embeds to the zero vector.
    virtual std::vector<double> embed(std::string_view text) const = 0;
};

/// Deterministic local fallback: hashed token-frequency vectors over
/// lowercase word tokens, fixed dimension 1024, L2-normalized. No semantic
/// parity with a learned embedder is claimed; it exists so retrieval is
/// exercisable offline and bit-reproducible.
class HashedBowEmbedder : public Embedder {
public:
    static constexpr std::size_t kDimension = 1024;

    std::string id() const override { return "hashed-bow-1024"; }
    std::size_t dimension() const override { return kDimension; }
    std::vector<double> embed(std::string_view text) const override;

    /// Bucket index a single token hashes to (test hook).
    static std::size_t bucket_of(std::string_view token);
};

/// Remote embedding endpoint (OpenAI-compatible /embeddings) behind the same
/// interface, configured through a BackendProfile.
class HttpEmbedder : public Embedder {
public:
    HttpEmbedder(BackendProfile profile, std::size_t dimension);

    std::string id() const override;
    std::size_t dimension() const override { return dimension_; }
    std::vector<double> embed(std::string_view text) const override;

private:
    BackendProfile profile_;
    std::size_t dimension_;
};

double cosine(const std::vector<double>& a, const std::vector<double>& b);

std::shared_ptr<Embedder> default_embedder();

}  // namespace multiga
