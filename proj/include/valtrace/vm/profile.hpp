#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "valtrace/capture/rewrite.hpp"
#include "valtrace/vm/footprint.hpp"

namespace valtrace {

enum class InputGenerator { Ascending, Descending, Uniform };

/// Parses "ascending" | "descending" | "uniform"; nullopt otherwise.
std::optional<InputGenerator> parse_generator(std::string_view name);

/// ascending: 0..n-1; descending: n-1..0; uniform: n draws from Lcg(seed),
/// each the generator's 32-bit output.
std::vector<std::int64_t> generate_input(InputGenerator generator,
                                         std::size_t n, std::uint64_t seed);

struct ProfileRow {
  std::size_t size = 0;
  std::uint64_t steps = 0;
  /// Set when the row stopped on a runtime error or the step limit; steps
  /// then counts work done so far.
  std::optional<std::string> error;
};

/// Runs `entry(input)` in a fresh VM for every size. Deterministic for a
/// fixed seed; every row reseeds the generator.
std::vector<ProfileRow> profile(const InstrumentedProgram& student,
                                std::string_view entry,
                                const std::vector<std::size_t>& sizes,
                                InputGenerator generator, std::uint64_t seed,
                                const ExecutionLimits& limits = {});

}  // namespace valtrace
