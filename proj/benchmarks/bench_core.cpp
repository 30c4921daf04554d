// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "hintstep/hinter.hpp"
#include "hintstep/metrics.hpp"
#include "hintstep/mock_backend.hpp"
#include "hintstep/normalize.hpp"
#include "hintstep/solver.hpp"

namespace hintstep {
namespace {

void BM_NormalizeAnswer(benchmark::State& state) {
  const std::string raw = "\\boxed{\\dfrac{1{,}000}{\\sqrt{2}}}\\text{ apples}";
  for (auto _ : state) benchmark::DoNotOptimize(normalize_answer(raw));
}
BENCHMARK(BM_NormalizeAnswer);

void BM_CheckLeakage(benchmark::State& state) {
  std::string hint;
  for (int i = 0; i < state.range(0); ++i) hint += "Consider the factor 12 and then 3.42 again. ";
  for (auto _ : state) benchmark::DoNotOptimize(check_leakage(hint, "42"));
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(hint.size()));
}
BENCHMARK(BM_CheckLeakage)->Range(1, 256);

void BM_MajorityVote(benchmark::State& state) {
  std::vector<std::string> answers;
  for (int i = 0; i < state.range(0); ++i) answers.push_back(std::to_string(i % 7));
  for (auto _ : state) benchmark::DoNotOptimize(majority_vote(answers));
}
BENCHMARK(BM_MajorityVote)->Range(8, 512);

void BM_SolveHintedMock(benchmark::State& state) {
  const int t = static_cast<int>(state.range(0));
  Problem p;
  p.id = "b";
  p.statement = "Compute 3 * 4.";
  p.dataset_name = "bench";
  HintSequence hints;
  hints.problem_id = "b";
  std::vector<MockEntry> script;
  for (int i = 0; i < t; ++i) {
    hints.hints.push_back({i + 1, "hint " + std::to_string(i), HintProvenance::kOracleLlm});
    script.push_back(reply("state " + std::to_string(i), 10, 10));
  }
  script.push_back(reply(R"({"final_answer": "12", "reasoning_summary": "s"})", 10, 10));
  const PromptSet prompts = PromptSet::defaults();
  for (auto _ : state) {
    MockBackend backend(script);
    benchmark::DoNotOptimize(solve_hinted(p, hints, backend, prompts, SolverOptions{}));
  }
}
BENCHMARK(BM_SolveHintedMock)->Arg(1)->Arg(8)->Arg(16);

void BM_Stability(benchmark::State& state) {
  std::vector<double> xs;
  for (int i = 0; i < state.range(0); ++i) xs.push_back((i * 37) % 100);
  for (auto _ : state) benchmark::DoNotOptimize(stability(xs));
}
BENCHMARK(BM_Stability)->Range(2, 1024);

}  // namespace
}  // namespace hintstep

BENCHMARK_MAIN();
