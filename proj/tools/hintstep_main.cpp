// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

// hintstep: hint generation, training export, hinted solving, verification
// and reporting over JSONL artifacts.
//
//   hintstep gen-hints       --config run.json
//   hintstep export-training --config run.json
//   hintstep solve           --config run.json --mode hinted --hint-source llm --runs 8
//   hintstep verify          --config run.json
//   hintstep report          --config run.json --drop-pending
//
// Any config key can be overridden as --section.key=value, e.g.
// --backends.solver.model=qwen2.5-7b or --solve.include_problem_every_step=true.

#include <algorithm>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hintstep/commands.hpp"
#include "hintstep/config.hpp"
#include "hintstep/error.hpp"
#include "json.hpp"

namespace {

using hintstep::ConfigOverride;

std::string json_string(const std::string& s) { return nlohmann::json(s).dump(); }

// Template files given without KEY= replace the template the subcommand
// mainly depends on.
std::vector<std::string> default_template_keys(const std::string& command) {
  if (command == "gen-hints") return {"oracle_solution", "oracle_answer"};
  if (command == "export-training") return {"step_hint"};
  if (command == "solve") return {"solver_refine"};
  if (command == "verify") return {"judge"};
  return {};
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::vector<ConfigOverride> overrides;
  try {
    overrides = hintstep::extract_dotted_overrides(args);
  } catch (const hintstep::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hintstep::kExitFatal;
  }

  CLI::App app{"Hint-guided step-wise math solving pipeline", "hintstep"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> mode, hint_source, out;
  std::optional<int> k, runs;
  std::optional<long long> seed;
  std::vector<std::string> templates;
  bool drop_pending = false;

  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--mode", mode, "Solve mode")
      ->check(CLI::IsMember({"no_hint", "hinted", "sc", "self_consistency"}));
  app.add_option("--hint-source", hint_source, "Where hints come from")
      ->check(CLI::IsMember({"llm", "ft_slm", "nft_slm"}));
  app.add_option("--k", k, "Self-consistency samples per problem")->check(CLI::PositiveNumber);
  app.add_option("--runs", runs, "Repetitions R (seeds seed..seed+R-1)")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--template", templates,
                 "Template file, as PATH or KEY=PATH (repeatable)");
  app.add_option("--out", out, "Output directory for generated artifacts");
  app.add_flag("--drop-pending", drop_pending, "Exclude pending_review runs from accuracy");

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const hintstep::RunConfig&, std::ostream&);
  };
  const Sub subs[] = {
      {"gen-hints", "Generate oracle hint sequences", hintstep::cmd_gen_hints},
      {"export-training", "Export (P, W_t, h_t) training instances", hintstep::cmd_export_training},
      {"solve", "Solve problems and append run records", hintstep::cmd_solve},
      {"verify", "Produce one verdict per run", hintstep::cmd_verify},
      {"report", "Aggregate runs and verdicts into reports", hintstep::cmd_report},
  };
  for (const Sub& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? hintstep::kExitOk : hintstep::kExitFatal;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (mode) overrides.emplace_back("solve.mode", json_string(*mode == "self_consistency" ? "sc" : *mode));
  if (hint_source) overrides.emplace_back("solve.hint_source", json_string(*hint_source));
  if (k) overrides.emplace_back("solve.k", std::to_string(*k));
  if (runs) overrides.emplace_back("solve.runs", std::to_string(*runs));
  if (seed) overrides.emplace_back("solve.seed", std::to_string(*seed));
  if (out) overrides.emplace_back("paths.out", json_string(*out));
  if (drop_pending) overrides.emplace_back("report.drop_pending", "true");
  for (const std::string& t : templates) {
    std::size_t eq = t.find('=');
    if (eq != std::string::npos) {
      overrides.emplace_back("templates." + t.substr(0, eq), json_string(t.substr(eq + 1)));
      continue;
    }
    auto keys = default_template_keys(command);
    if (keys.empty()) {
      std::cerr << "error: " << command << " takes templates only as KEY=PATH\n";
      return hintstep::kExitFatal;
    }
    for (const std::string& key : keys) overrides.emplace_back("templates." + key, json_string(t));
  }

  try {
    hintstep::RunConfig config = config_path.empty() ? hintstep::default_config(overrides)
                                                     : hintstep::load_config(config_path, overrides);
    for (const Sub& s : subs) {
      if (command == s.name) return s.run(config, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return hintstep::kExitFatal;
  }
  return hintstep::kExitFatal;
}
