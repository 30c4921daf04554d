// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hintstep/backend.hpp"
#include "hintstep/prompt.hpp"
#include "hintstep/types.hpp"

namespace hintstep {

enum class LeakRule { kExactAnswerMatch, kNormalizedAnswerMatch, kNone };
std::string_view to_string(LeakRule r);

struct LeakageVerdict {
  bool leaked = false;
  std::optional<std::string> evidence;  // present iff leaked
  LeakRule rule = LeakRule::kNone;

  bool operator==(const LeakageVerdict&) const = default;
};

// Does the hint give away the final answer?
//
// leaked is true iff normalize_answer(answer) occurs in normalize_answer(hint)
// bounded by token edges: the characters around the match may not continue
// a word or a number ("42" is not found in "420", "x42" or "3.42"). Numeric
// answers of at most two characters must additionally stand as a separate
// word (whitespace, '=', brackets or sentence punctuation on both sides), so
// "2" is not found in "x^2" or "1/2".
//
// rule is kExactAnswerMatch when the raw answer also occurs bounded in the raw
// hint, kNormalizedAnswerMatch when only the normalized forms match. The
// verdict depends on normalized forms only, so
// check_leakage(h, a).leaked == check_leakage(normalize(h), normalize(a)).leaked.
LeakageVerdict check_leakage(std::string_view hint_text, std::string_view ground_truth_answer);

struct OracleHintOptions {
  int max_hints = 16;
  bool include_prior_hints = true;
  std::string created_at;  // stamped on the returned sequence
};

// Oracle hint sequence for one problem. Hints are requested one per call,
// each seeing the hints accepted so far; the hinter ends the sequence by
// replying with the stop marker or when max_hints is reached. The template
// is prompts.oracle_solution when a reference solution exists, otherwise
// prompts.oracle_answer with the final answer in {solution_or_answer}.
//
// A hint that leaks the answer is regenerated once with the evidence in a
// follow-up turn; if it still leaks it is dropped. Both are logged in
// HintSequence::events. Throws NoUsableHintsError when nothing survives,
// BackendError on call failure, Error when the problem is ineligible.
HintSequence generate_oracle_hints(const Problem& problem, Backend& backend,
                                   const PromptSet& prompts, const OracleHintOptions& options);

struct StepHintResult {
  std::optional<Hint> hint;  // empty when the hinter replied with the stop marker
  LeakageVerdict leakage;    // leaked=true: still leaking after one regeneration
  std::vector<CallUsage> usage;
};

// One hint conditioned on (problem, work so far), the distilled hinter's
// interface. The hint index is state.step + 1.
StepHintResult generate_step_hint(const Problem& problem, const ReasoningState& state,
                                  Backend& backend, const HintPromptTemplate& step_template,
                                  HintProvenance provenance);

// Chat turns shown to a step hinter; shared by generate_step_hint and the
// training prompt export so both serialize identically.
ChatTranscript step_hint_transcript(const HintPromptTemplate& step_template,
                                    std::string_view statement, std::string_view reasoning_state);

// Splits a reference solution into exactly `segments` pieces.
using StateDecomposer =
    std::function<std::vector<std::string>(std::string_view solution, std::size_t segments)>;

// Default decomposer: paragraphs (blank-line separated), then repeatedly merge
// the adjacent pair with the smallest combined length, or split the longest
// piece at the line, sentence or space boundary nearest its middle, until the
// count is right. Throws Error when the text cannot be split that finely.
std::vector<std::string> paragraph_decompose(std::string_view solution, std::size_t segments);

struct ExportError {
  std::string problem_id;
  std::string message;

  bool operator==(const ExportError&) const = default;
};

struct ExportResult {
  std::vector<TrainingInstance> instances;  // ordered by (problem_id, step_index)
  std::vector<ExportError> errors;          // problems that were skipped
};

// One TrainingInstance per (problem, step): W_t is the first t-1 segments of
// the decomposed solution joined by blank lines (W_1 is empty). Problems with
// a missing solution, a misaligned decomposition, or a leaking hint are
// reported in errors and skipped; the rest are still exported.
ExportResult export_training_instances(const std::vector<Problem>& problems,
                                       const std::vector<HintSequence>& hint_sequences,
                                       const StateDecomposer& decomposer = paragraph_decompose);

// Prompt/target pair as a causal-LM trainer consumes it.
struct TrainingPrompt {
  std::string problem_id;
  int step_index = 0;
  std::string system;
  std::string prompt;
  std::string completion;
};

TrainingPrompt render_training_prompt(const TrainingInstance& instance,
                                      const HintPromptTemplate& step_template);

}  // namespace hintstep
