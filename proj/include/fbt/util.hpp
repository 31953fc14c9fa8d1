#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fbt {

inline constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
inline constexpr uint64_t kFnvPrime = 0x100000001b3ull;

inline uint64_t fnv1a64(std::string_view data, uint64_t h = kFnvOffset) {
    for (unsigned char c : data) {
        h ^= c;
        h *= kFnvPrime;
    }
    return h;
}

std::string to_hex(uint64_t v);

// "45.658" style rendering; values below 0.0005 come out as "0.000".
std::string format_percent(double pct);

std::string format_bytes(uint64_t bytes);

}  // namespace fbt
