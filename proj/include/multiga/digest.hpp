#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace multiga {

/// 64-bit FNV-1a. Used for content digests and the fitness cache key;
/// stable across platforms, unlike std::hash.
inline std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string digest_hex(std::uint64_t digest) {
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[digest & 0xF];
        digest >>= 4;
    }
    return out;
}

}  // namespace multiga
