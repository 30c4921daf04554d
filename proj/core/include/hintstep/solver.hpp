// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hintstep/backend.hpp"
#include "hintstep/prompt.hpp"
#include "hintstep/types.hpp"

namespace hintstep {

struct SolverOptions {
  std::int64_t seed = 0;
  int repeat = 0;
  // Re-send the problem statement with every refinement, not only the first.
  bool include_problem_every_step = false;
  // Label for hinted runs. Runs that fall back to no_hint (T = 0) keep it so
  // the report counts them with the configuration that was requested.
  HintSource hint_source = HintSource::kLlm;
  DecodingParams refinement = refinement_preset();
  DecodingParams synthesis = synthesis_preset();
};

// One model call as it went over the wire.
struct CallTrace {
  std::string kind;  // refine, synthesize, repair, sample, hint
  int step = 0;      // refinement step, sample index, or 0
  ChatTranscript transcript;
  DecodingParams decoding;
  std::string response;
  CallUsage usage;
};

struct SolveTrace {
  std::vector<CallTrace> calls;
  std::vector<std::string> states;  // W_1 .. W_T
};

// Parsed synthesis reply.
struct Synthesis {
  std::string final_answer;
  std::string reasoning_summary;
};

// Accepts a bare JSON object, one wrapped in a ``` fence, or the first {...}
// span inside surrounding prose. final_answer may be a string or a number.
// On failure returns nullopt and describes the problem in *error.
std::optional<Synthesis> parse_synthesis(std::string_view reply, std::string* error = nullptr);

// Most frequent answer; ties go to the answer that occurs first. Throws Error
// on empty input.
std::string majority_vote(const std::vector<std::string>& answers);

// Refinement transcript for step t (1-based): [system] then the problem at
// t = 1 or W_{t-1} afterwards, then h_t.
ChatTranscript refinement_transcript(const PromptSet& prompts, std::string_view statement,
                                     std::string_view prior_state, std::string_view hint, int step,
                                     bool include_problem_every_step);

// W_1 = f(P, h_1), W_t = f(h_t, W_{t-1}), then one synthesis call on W_T:
// T + 1 calls on the well-formed path. T = 0 falls back to solve_no_hint.
// Never throws for backend trouble: the record comes back with status
// aborted, the error text, and the calls completed so far.
RunRecord solve_hinted(const Problem& problem, const HintSequence& hints, Backend& backend,
                       const PromptSet& prompts, const SolverOptions& options,
                       SolveTrace* trace = nullptr);

// Hinted solve with hints produced on the fly by a step hinter that sees the
// solver's current state. Stops when the hinter sends the stop marker, after
// max_hints, or when a hint still leaks after its regeneration (that hint is
// counted in dropped_hints and not used). Hinter calls go to hint_usage.
RunRecord solve_hinted_online(const Problem& problem, Backend& solver, Backend& hinter,
                              const PromptSet& prompts, int max_hints,
                              const SolverOptions& options, SolveTrace* trace = nullptr);

// One call on the problem alone.
RunRecord solve_no_hint(const Problem& problem, Backend& backend, const PromptSet& prompts,
                        const SolverOptions& options, SolveTrace* trace = nullptr);

// K direct samples with seeds seed+0 .. seed+K-1 and a majority vote over
// their normalized answers. Samples that fail are skipped (k_effective).
RunRecord solve_self_consistency(const Problem& problem, Backend& backend,
                                 const PromptSet& prompts, int k, const SolverOptions& options,
                                 SolveTrace* trace = nullptr);

}  // namespace hintstep
