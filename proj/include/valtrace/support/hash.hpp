#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace valtrace {

inline constexpr std::uint64_t kDefaultHashSeed = 0x5eed'f00d'cafe'b0baULL;

/// Seeded 64-bit hash (FNV-1a over bytes, seed folded into the basis,
/// splitmix64 finalizer). Stable across platforms and runs.
std::uint64_t hash64(std::string_view data,
                     std::uint64_t seed = kDefaultHashSeed);

/// 16 lowercase hex digits.
std::string to_hex64(std::uint64_t v);

}  // namespace valtrace
