// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hintstep/backend.hpp"
#include "hintstep/mock_backend.hpp"
#include "hintstep/prompt.hpp"
#include "hintstep/types.hpp"

namespace hintstep {

// How to reach one model role.
struct BackendSpec {
  enum class Type { kOpenAi, kMock };
  Type type = Type::kOpenAi;
  EndpointConfig endpoint;              // model_name and decoding also apply to mocks
  std::filesystem::path mock_script;    // kMock only
  MockMode mock_mode = MockMode::kOrdered;
};

// Everything one CLI invocation needs. Built from a JSON config file (see
// README for the layout) with "${VAR}" expanded from the environment, then
// dotted overrides ("solve.k=8", "backends.solver.model=qwen") applied.
struct RunConfig {
  std::filesystem::path out_dir = ".";
  std::filesystem::path problems;
  std::filesystem::path hints;
  std::filesystem::path training;
  std::filesystem::path training_prompts;
  std::filesystem::path runs;
  std::filesystem::path transcripts;
  std::filesystem::path verdicts;
  std::optional<std::filesystem::path> overrides;
  std::filesystem::path report_dir;

  std::optional<BackendSpec> hinter;       // oracle hints (gen-hints)
  std::optional<BackendSpec> step_hinter;  // online hints for ft_slm / nft_slm solves
  std::optional<BackendSpec> solver;
  std::optional<BackendSpec> judge;

  SolveMode mode = SolveMode::kHinted;
  HintSource hint_source = HintSource::kLlm;
  int k = 8;
  int runs_count = 1;  // R
  std::int64_t seed = 0;
  bool include_problem_every_step = false;
  int max_hints = 16;
  bool include_prior_hints = true;
  bool drop_pending = false;

  std::map<std::string, std::filesystem::path> templates;  // key -> file

  void validate() const;  // throws ConfigError
};

// A "key=value" override; value is parsed as JSON when it is valid JSON and
// taken as a string otherwise.
using ConfigOverride = std::pair<std::string, std::string>;

// text: JSON config body; base_dir resolves relative paths in it; out_dir, if
// set, replaces "paths.out". Throws ConfigError.
RunConfig parse_config(std::string_view text, const std::filesystem::path& base_dir,
                       const std::vector<ConfigOverride>& overrides = {});
RunConfig load_config(const std::filesystem::path& path,
                      const std::vector<ConfigOverride>& overrides = {});
// Defaults only, with overrides; used when no config file is given.
RunConfig default_config(const std::vector<ConfigOverride>& overrides = {});

// Replaces ${NAME} with the environment value; unset variables are a
// ConfigError. "$$" yields a literal '$'.
std::string expand_env(std::string_view text);

// Removes "--a.b=value" and "--a.b value" arguments (a dotted name marks a
// config key) from args and returns them as overrides, in order.
std::vector<ConfigOverride> extract_dotted_overrides(std::vector<std::string>& args);

std::unique_ptr<Backend> make_backend(const BackendSpec& spec);

// Shipped defaults with the configured template files swapped in.
PromptSet load_prompts(const RunConfig& config);

// Timestamp for generated artifacts: SOURCE_DATE_EPOCH when set, the Unix
// epoch for scripted backends (so mock runs are reproducible), else now.
std::string artifact_timestamp(const Backend& backend);
std::string format_utc(std::int64_t unix_seconds);

}  // namespace hintstep
