#pragma once

#include <cstdint>
#include <random>

namespace multiga {

/// Seeded random source with an unbiased bounded draw. mt19937_64 has a
/// standardized output sequence, and the rejection step below avoids the
/// implementation-defined behaviour of std::uniform_int_distribution, so
/// histories replay bit-identically across platforms.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform draw from [0, n). n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r < threshold);
        return r % n;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace multiga
