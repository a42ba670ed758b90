// Parallel vs serial cohort kernels on a synthetic cohort.

#include <benchmark/benchmark.h>

#include <random>
#include <string>

#include "valtrace/capture/rewrite.hpp"
#include "valtrace/frontend/parser.hpp"
#include "valtrace/plagiarism/plagiarism.hpp"

namespace {

using namespace valtrace;

CohortIndex synthetic_index(std::size_t n) {
  std::mt19937_64 rng(7);
  CohortIndex idx;
  for (std::size_t i = 0; i < n; ++i) {
    FingerprintSet s;
    for (int k = 0; k < 400; ++k) s.push_back(rng() % 5000);
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    idx.add("s" + std::to_string(i), s);
  }
  return idx;
}

void BM_SimilarityMatrix(benchmark::State& state) {
  const auto idx = synthetic_index(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idx.similarity_matrix());
}

void BM_SimilarityMatrixSerial(benchmark::State& state) {
  const auto idx = synthetic_index(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(idx.similarity_matrix_serial());
}

std::vector<Submission> synthetic_cohort(std::size_t n) {
  std::vector<Submission> subs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string src = "def sort_list(xs):\n    ys = list(xs)\n    for i in range(len(ys)):\n"
                            "        for j in range(len(ys) - 1 - i):\n"
                            "            if ys[j] > ys[j + 1]:\n"
                            "                t = ys[j]\n                ys[j] = ys[j + 1]\n                ys[j + 1] = t\n"
                            "    return ys + [" + std::to_string(i) + "]\n";
    subs.push_back({"s" + std::to_string(i), rewrite(parse_source(src))});
  }
  return subs;
}

const InstrumentedProgram& driver() {
  static const InstrumentedProgram d =
      rewrite(parse_source("sort_list([9, 3, 7, 1, 8, 2, 6, 4, 5, 0, 11, 10, 13, 12])\n"));
  return d;
}

void BM_RunCohort(benchmark::State& state) {
  const auto subs = synthetic_cohort(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cohort(subs, driver()));
}

void BM_RunCohortSerial(benchmark::State& state) {
  const auto subs = synthetic_cohort(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_cohort_serial(subs, driver()));
}

}  // namespace

BENCHMARK(BM_SimilarityMatrix)->Arg(64)->Arg(256);
BENCHMARK(BM_SimilarityMatrixSerial)->Arg(64)->Arg(256);
BENCHMARK(BM_RunCohort)->Arg(32)->Arg(128);
BENCHMARK(BM_RunCohortSerial)->Arg(32)->Arg(128);

BENCHMARK_MAIN();
