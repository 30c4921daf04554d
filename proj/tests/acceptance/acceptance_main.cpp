// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Tolerances are fixed here.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "generators.hpp"
#include "hintstep/commands.hpp"
#include "hintstep/config.hpp"
#include "hintstep/dataset.hpp"
#include "hintstep/hinter.hpp"
#include "hintstep/metrics.hpp"
#include "hintstep/mock_backend.hpp"
#include "hintstep/normalize.hpp"
#include "hintstep/solver.hpp"
#include "leakage_cases.hpp"
#include "stub_server.hpp"
#include "test_util.hpp"

namespace hintstep {
namespace {

namespace fs = std::filesystem;
using testing::make_hints;
using testing::make_problem;
using testing::synthesis_json;

constexpr double kReferenceTolerance = 0.01;
constexpr double kCallCountBudgetS = 10.0;

struct CheckResult {
  bool pass = false;
  std::string detail;
};

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

CheckResult call_count_law() {
  std::mt19937 rng(20260101);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const PromptSet prompts = PromptSet::defaults();
  const Problem problem = make_problem("cc", "Compute 5 + 5.", "Add.", "10");
  int violations = 0;
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < 200; ++i) {
    SolverOptions opt;
    opt.seed = i;
    const int mode = pick(0, 2);
    std::size_t expected = 0;
    RunRecord r;
    if (mode == 0) {
      const int t = pick(0, 10);
      std::vector<MockEntry> script;
      std::vector<std::string> texts;
      for (int s = 0; s < t; ++s) {
        texts.push_back("hint " + std::to_string(s));
        script.push_back(reply("state " + std::to_string(s), 3, 2));
      }
      script.push_back(reply(synthesis_json("10"), 3, 2));
      MockBackend m(script);
      r = solve_hinted(problem, make_hints("cc", texts), m, prompts, opt);
      expected = static_cast<std::size_t>(t) + 1;
      if (m.calls_made() != expected) ++violations;
    } else if (mode == 1) {
      MockBackend m({reply(synthesis_json("10"), 3, 2)});
      r = solve_no_hint(problem, m, prompts, opt);
      expected = 1;
      if (m.calls_made() != expected) ++violations;
    } else {
      const int k = pick(1, 8);
      MockBackend m({reply(synthesis_json("10"), 3, 2)}, MockMode::kRules);
      r = solve_self_consistency(problem, m, prompts, k, opt);
      expected = static_cast<std::size_t>(k);
      if (m.calls_made() != expected) ++violations;
    }
    if (r.call_count() != expected || r.status != RunStatus::kCompleted) ++violations;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::ostringstream d;
  d << "200 solves, " << violations << " violations, " << secs << " s";
  return {violations == 0 && secs < kCallCountBudgetS, d.str()};
}

CheckResult state_threading() {
  std::mt19937 rng(777);
  auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const PromptSet prompts = PromptSet::defaults();
  int violations = 0;
  for (int c = 0; c < 100; ++c) {
    const int t = pick(1, 10);
    std::vector<std::string> hints;
    std::vector<std::string> states;
    std::vector<MockEntry> script;
    for (int s = 0; s < t; ++s) {
      hints.push_back("HINT<" + std::to_string(c) + ":" + std::to_string(s) + ":" +
                      std::to_string(pick(0, 999999)) + ">");
      states.push_back("STATE<" + std::to_string(c) + ":" + std::to_string(s) + ":" +
                       std::to_string(pick(0, 999999)) + ">");
      script.push_back(reply(states.back(), 1, 1));
    }
    script.push_back(reply(synthesis_json("1"), 1, 1));
    MockBackend m(script);
    SolverOptions opt;
    opt.include_problem_every_step = pick(0, 1) == 1;
    solve_hinted(make_problem("st", "Problem " + std::to_string(c), "x", "1"),
                 make_hints("st", hints), m, prompts, opt);
    const auto log = m.call_log();
    if (log.size() != static_cast<std::size_t>(t) + 1) {
      ++violations;
      continue;
    }
    for (int s = 0; s < t; ++s) {
      const std::string text = log[static_cast<std::size_t>(s)].transcript.joined();
      if (!contains(text, hints[static_cast<std::size_t>(s)])) ++violations;
      if (s > 0 && !contains(text, states[static_cast<std::size_t>(s - 1)])) ++violations;
      for (int later = s + 1; later < t; ++later) {
        if (contains(text, hints[static_cast<std::size_t>(later)])) ++violations;
      }
    }
    if (!contains(log.back().transcript.joined(), states.back())) ++violations;
  }
  return {violations == 0, "100 cases, " + std::to_string(violations) + " violations"};
}

void run_fixture_pipeline(const fs::path& out) {
  RunConfig base = load_config(testing::fixture("e2e/config.json"), {{"paths.out", out.string()}});
  std::ostringstream log;
  cmd_gen_hints(base, log);
  for (SolveMode mode : {SolveMode::kNoHint, SolveMode::kHinted, SolveMode::kSelfConsistency}) {
    RunConfig c = base;
    c.mode = mode;
    if (cmd_solve(c, log) != kExitOk) throw std::runtime_error("solve failed:\n" + log.str());
  }
  if (cmd_verify(base, log) != kExitOk) throw std::runtime_error("verify failed:\n" + log.str());
  if (cmd_report(base, log) != kExitOk) throw std::runtime_error("report failed:\n" + log.str());
}

CheckResult determinism() {
  testing::TempDir dir;
  run_fixture_pipeline(dir / "a");
  run_fixture_pipeline(dir / "b");
  std::vector<std::string> differing;
  for (const char* name : {"hints.jsonl", "runs.jsonl", "verdicts.jsonl", "report.csv"}) {
    std::string a = testing::read_file(dir / "a" / name);
    if (a.empty() || a != testing::read_file(dir / "b" / name)) differing.push_back(name);
  }
  std::string detail = "hints.jsonl runs.jsonl verdicts.jsonl report.csv";
  for (const auto& d : differing) detail += "; differs: " + d;
  return {differing.empty(), detail};
}

CheckResult reference_metrics() {
  std::vector<std::string> bad;
  auto near = [&](const char* what, double got, double want) {
    if (!(std::fabs(got - want) <= kReferenceTolerance + 1e-9)) {
      bad.push_back(std::string(what) + "=" + std::to_string(got));
    }
  };
  near("reduction(198.43,145.36)", token_reduction(198.43, 145.36), 26.74);
  near("reduction(236.79,152.70)", token_reduction(236.79, 152.70), 35.52);
  if (format_fixed2(accuracy(59, 75).percent) != "78.67") bad.push_back("accuracy(59,75)");
  if (format_fixed2(accuracy(0, 29).percent) != "0.00") bad.push_back("accuracy(0,29)");
  Stability s = stability(std::vector<double>(8, 0.0));
  if (format_fixed2(s.mean) + " ± " + format_fixed2(s.std_error.value_or(-1)) != "0.00 ± 0.00") {
    bad.push_back("stability(8 zeros)");
  }
  std::string detail = "26.74, 35.52 (computed " + format_fixed2(token_reduction(236.79, 152.70)) +
                       "), 78.67, 0.00, 0.00 ± 0.00";
  for (const auto& b : bad) detail += "; wrong: " + b;
  return {bad.empty(), detail};
}

// Pairwise form of the sample variance: sum_{i<j} (x_i - x_j)^2 / (n (n-1)).
std::pair<double, double> stability_oracle(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  double pair_sq = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = i + 1; j < xs.size(); ++j) pair_sq += (xs[i] - xs[j]) * (xs[i] - xs[j]);
  }
  const double var = pair_sq / (n * (n - 1));
  return {sum / n, std::sqrt(var / n)};
}

CheckResult stability_formula() {
  const std::vector<double> xs = {50, 25, 25, 0};
  Stability got = stability(xs);
  auto [mean, se] = stability_oracle(xs);
  const bool pass = std::fabs(got.mean - 25.00) <= kReferenceTolerance &&
                    std::fabs(got.std_error.value_or(-1) - 10.21) <= kReferenceTolerance &&
                    std::fabs(got.mean - mean) < 1e-9 &&
                    std::fabs(got.std_error.value_or(-1) - se) < 1e-9;
  return {pass, "(" + format_fixed2(got.mean) + ", " + format_fixed2(got.std_error.value_or(-1)) +
                    ") vs oracle (" + format_fixed2(mean) + ", " + format_fixed2(se) + ")"};
}

std::string vote_oracle(const std::vector<std::string>& xs) {
  std::map<std::string, std::pair<int, std::size_t>> seen;  // count, first index
  for (std::size_t i = 0; i < xs.size(); ++i) {
    auto [it, fresh] = seen.try_emplace(xs[i], 0, i);
    ++it->second.first;
  }
  std::string best;
  int best_count = -1;
  std::size_t best_first = 0;
  for (const auto& [answer, cf] : seen) {
    if (cf.first > best_count || (cf.first == best_count && cf.second < best_first)) {
      best = answer;
      best_count = cf.first;
      best_first = cf.second;
    }
  }
  return best;
}

CheckResult majority_exhaustive() {
  const std::vector<std::string> alphabet = {"a", "b", "c"};
  int checked = 0;
  int disagreements = 0;
  for (int len = 1; len <= 4; ++len) {
    int total = 1;
    for (int i = 0; i < len; ++i) total *= 3;
    for (int code = 0; code < total; ++code) {
      std::vector<std::string> xs;
      for (int i = 0, c = code; i < len; ++i, c /= 3) xs.push_back(alphabet[c % 3]);
      ++checked;
      if (majority_vote(xs) != vote_oracle(xs)) ++disagreements;
    }
  }
  return {disagreements == 0, std::to_string(checked) + " sequences, " +
                                  std::to_string(disagreements) + " disagreements"};
}

CheckResult leakage_suite() {
  int agree = 0;
  std::string detail;
  for (const auto& c : testing::kLeakCases) {
    LeakageVerdict v = check_leakage(c.hint, c.answer);
    if (v.leaked == c.leaked && v.rule == c.rule) {
      ++agree;
    } else {
      detail += std::string("; mismatch: \"") + c.hint + "\" / \"" + c.answer + "\"";
    }
  }
  const int n = static_cast<int>(testing::kLeakCases.size());
  return {agree == n, std::to_string(agree) + "/" + std::to_string(n) + " agree" + detail};
}

CheckResult normalizer_idempotence() {
  testing::RecordGen gen(4242);
  int failures = 0;
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    std::string once = normalize_answer(gen.text(10));
    if (normalize_answer(once) != once) ++failures;
  }
  return {failures == 0, std::to_string(n) + " strings, " + std::to_string(failures) + " failures"};
}

CheckResult jsonl_round_trip() {
  testing::TempDir dir;
  testing::RecordGen gen(99);
  const int per = 150;
  std::vector<Problem> problems;
  std::vector<HintSequence> hints;
  std::vector<TrainingInstance> training;
  std::vector<RunRecord> runs;
  for (int i = 0; i < per; ++i) {
    problems.push_back(gen.problem(i));
    hints.push_back(gen.hints(i));
    training.push_back(gen.training(i));
    runs.push_back(gen.run(i));
  }
  const std::pair<Collection, Schema> cases[] = {{problems, Schema::kProblems},
                                                 {hints, Schema::kHints},
                                                 {training, Schema::kTraining},
                                                 {runs, Schema::kRuns}};
  std::string failed;
  for (const auto& [collection, schema] : cases) {
    fs::path p = dir / (std::string(to_string(schema)) + ".jsonl");
    save_dataset(collection, p);
    if (!(load_dataset(p, schema) == collection)) failed += " " + std::string(to_string(schema));
  }
  return {failed.empty(), std::to_string(4 * per) + " records over 4 schemas" +
                              (failed.empty() ? "" : "; mismatched:" + failed)};
}

// Three-problem hinted run over HTTP, then verify and report.
CheckResult live_smoke() {
  const char* live = std::getenv("HINTSTEP_LIVE_BASE_URL");
  std::unique_ptr<testing::StubServer> stub;
  std::string base_url;
  std::string label;
  if (live != nullptr && *live != '\0') {
    base_url = live;
    label = "live endpoint " + base_url;
  } else {
    stub = std::make_unique<testing::StubServer>([](const nlohmann::json& req) {
      const bool json_mode = req.contains("response_format");
      return testing::StubReply{
          200, testing::chat_body(json_mode ? synthesis_json("4", "added") : "partial work")};
    });
    base_url = stub->base_url();
    label = "in-process stub server (HINTSTEP_LIVE_BASE_URL unset)";
  }

  testing::TempDir dir;
  std::vector<Problem> problems = {make_problem("s1", "What is 2 + 2?", std::nullopt, "4"),
                                   make_problem("s2", "What is 3 + 1?", std::nullopt, "4"),
                                   make_problem("s3", "What is 5 - 1?", std::nullopt, "4")};
  std::vector<HintSequence> hints;
  for (const auto& p : problems) {
    hints.push_back(make_hints(p.id, {"Read the operation carefully.", "Count on your fingers."}));
  }
  save_problems(problems, dir / "problems.jsonl");
  save_hints(hints, dir / "out" / "hints.jsonl");

  std::vector<ConfigOverride> overrides = {
      {"paths.problems", (dir / "problems.jsonl").string()},
      {"paths.out", (dir / "out").string()},
      {"solve.mode", "hinted"},
      {"backends.solver.base_url", base_url},
      {"backends.solver.timeout_s", "120"}};
  const char* model = std::getenv("HINTSTEP_LIVE_MODEL");
  overrides.push_back({"backends.solver.model", model != nullptr ? model : "smoke"});
  if (const char* key_env = std::getenv("HINTSTEP_LIVE_API_KEY_ENV")) {
    overrides.push_back({"backends.solver.api_key_env", key_env});
  }
  RunConfig config = default_config(overrides);
  std::ostringstream log;
  const int solve_rc = cmd_solve(config, log);
  const int verify_rc = solve_rc == kExitFatal ? kExitFatal : cmd_verify(config, log);
  const int report_rc = verify_rc == kExitFatal ? kExitFatal : cmd_report(config, log);
  auto runs = load_runs(config.runs);
  const bool pass = solve_rc == kExitOk && verify_rc != kExitFatal && report_rc == kExitOk &&
                    runs.size() == 3 && fs::exists(config.report_dir / "report.csv");
  std::string detail = label + ", " + std::to_string(runs.size()) + " runs";
  if (!pass) detail += "\n" + log.str();
  return {pass, detail};
}

}  // namespace
}  // namespace hintstep

int main() {
  using namespace hintstep;
  const std::vector<std::pair<const char*, std::function<CheckResult()>>> criteria = {
      {"call-count-law", call_count_law},
      {"state-threading", state_threading},
      {"determinism", determinism},
      {"metrics-reference-values", reference_metrics},
      {"stability-oracle", stability_formula},
      {"majority-vote-exhaustive", majority_exhaustive},
      {"leakage-suite", leakage_suite},
      {"normalizer-idempotence", normalizer_idempotence},
      {"jsonl-round-trip", jsonl_round_trip},
      {"live-smoke", live_smoke},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    CheckResult o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << '\n';
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " failed") << '\n';
  return failed == 0 ? 0 : 1;
}
