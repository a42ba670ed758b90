#pragma once

#include <cstdint>

namespace valtrace {

/// 64-bit linear congruential generator for harness-side input generation.
/// Output is the top 32 bits of the state after each step.
class Lcg {
 public:
  explicit constexpr Lcg(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint32_t next() {
    state_ = 6364136223846793005ULL * state_ + 1442695040888963407ULL;
    return static_cast<std::uint32_t>(state_ >> 32);
  }

  constexpr std::uint64_t state() const { return state_; }

 private:
  std::uint64_t state_;
};

}  // namespace valtrace
