#include "valtrace/vm/profile.hpp"

#include "valtrace/vm/lcg.hpp"
#include "valtrace/vm/vm.hpp"

namespace valtrace {

std::optional<InputGenerator> parse_generator(std::string_view name) {
  if (name == "ascending") return InputGenerator::Ascending;
  if (name == "descending") return InputGenerator::Descending;
  if (name == "uniform") return InputGenerator::Uniform;
  return std::nullopt;
}

std::vector<std::int64_t> generate_input(InputGenerator generator,
                                         std::size_t n, std::uint64_t seed) {
  std::vector<std::int64_t> out(n);
  switch (generator) {
    case InputGenerator::Ascending:
      for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::int64_t>(i);
      break;
    case InputGenerator::Descending:
      for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::int64_t>(n - 1 - i);
      break;
    case InputGenerator::Uniform: {
      Lcg rng(seed);
      for (auto& v : out) v = rng.next();
      break;
    }
  }
  return out;
}

std::vector<ProfileRow> profile(const InstrumentedProgram& student,
                                std::string_view entry,
                                const std::vector<std::size_t>& sizes,
                                InputGenerator generator, std::uint64_t seed,
                                const ExecutionLimits& limits) {
  std::vector<ProfileRow> rows;
  rows.reserve(sizes.size());
  for (const std::size_t n : sizes) {
    std::vector<Value> items;
    items.reserve(n);
    for (const auto v : generate_input(generator, n, seed)) items.push_back(Value::integer(v));

    Vm vm(limits);
    ProfileRow row;
    row.size = n;
    if (vm.run_module(student, kStudentCaptureOffset, "student")) {
      std::vector<Value> args;
      args.push_back(Value::list(std::move(items)));
      vm.call_function(entry, std::move(args));
    }
    row.steps = vm.steps();
    Footprint fp = vm.take_footprint();
    if (fp.outcome.kind != OutcomeKind::Completed) row.error = describe_outcome(fp.outcome);
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace valtrace
