// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hintstep {

enum class HintProvenance { kOracleLlm, kDistilledSlm, kNftSlm, kHumanEdited };
enum class SolveMode { kNoHint, kHinted, kSelfConsistency };
enum class HintSource { kLlm, kFtSlm, kNftSlm };
enum class Outcome { kCorrect, kIncorrect, kPendingReview };
enum class VerifyMethod { kExactMatch, kJudgeModel, kHumanOverride };
enum class RunStatus { kCompleted, kAborted };

std::string_view to_string(HintProvenance v);
std::string_view to_string(SolveMode v);
std::string_view to_string(HintSource v);
std::string_view to_string(Outcome v);
std::string_view to_string(VerifyMethod v);
std::string_view to_string(RunStatus v);

// Inverse of to_string. Returns nullopt for unknown spellings.
template <class E>
std::optional<E> enum_from_string(std::string_view s);

// Same, but throws hintstep::Error naming the field and the accepted values.
template <class E>
E parse_enum(std::string_view s, std::string_view field);

// SolveMode additionally accepts the short CLI spelling "sc".
std::optional<SolveMode> parse_mode_flag(std::string_view s);

HintProvenance provenance_for(HintSource source);

struct Problem {
  std::string id;
  std::string statement;
  std::string dataset_name;
  std::optional<std::string> reference_solution;
  std::optional<std::string> ground_truth_answer;
  // normalize_answer(ground_truth_answer); empty when there is no answer.
  std::string ground_truth_normalized;
  std::vector<std::string> tags;

  // Hint generation needs either a worked solution or at least the answer.
  bool eligible_for_hints() const {
    return reference_solution.has_value() || ground_truth_answer.has_value();
  }

  bool operator==(const Problem&) const = default;
};

struct Hint {
  int index = 0;  // 1-based
  std::string text;
  HintProvenance provenance = HintProvenance::kOracleLlm;

  bool operator==(const Hint&) const = default;
};

// Token and latency accounting for one completed model call.
struct CallUsage {
  std::string kind;  // refine, synthesize, repair, sample, hint, judge
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  double wall_time = 0.0;  // seconds
  bool estimated = false;  // counts came from the local estimator
  int retries = 0;

  std::int64_t total_tokens() const { return prompt_tokens + completion_tokens; }
  bool operator==(const CallUsage&) const = default;
};

// Something noteworthy that happened while producing a hint sequence.
struct GenerationEvent {
  int step = 0;
  std::string event;  // "leak_retry" or "dropped"
  std::string evidence;

  bool operator==(const GenerationEvent&) const = default;
};

struct HintSequence {
  std::string problem_id;
  std::vector<Hint> hints;
  std::string generator_model;
  std::string created_at;  // ISO-8601 UTC
  std::vector<CallUsage> usage;
  std::vector<GenerationEvent> events;

  std::size_t size() const { return hints.size(); }
  std::int64_t completion_tokens() const;
  bool operator==(const HintSequence&) const = default;
};

// One (P, W_t, h_t) triple for distilling the hinter.
struct TrainingInstance {
  std::string problem_id;
  int step_index = 0;
  std::string problem_statement;
  std::string reasoning_state;
  std::string target_hint;

  bool operator==(const TrainingInstance&) const = default;
};

// The solver's accumulated work W_t after t refinement calls.
struct ReasoningState {
  std::string problem_id;
  int step = 0;      // refinement calls made so far
  std::string text;  // empty at step 0
  std::vector<CallUsage> call_log;

  bool operator==(const ReasoningState&) const = default;
};

struct RunRecord {
  std::string run_id;
  std::string problem_id;
  std::string dataset_name;
  SolveMode mode = SolveMode::kNoHint;
  std::optional<HintSource> hint_source;
  int hints_used = 0;
  int samples = 1;      // K requested
  int k_effective = 1;  // samples that produced an answer
  std::vector<std::string> sample_answers;  // normalized, self-consistency only
  std::string final_answer_raw;
  std::string final_answer_normalized;
  std::string reasoning_summary;
  std::vector<CallUsage> per_call_usage;  // solver-side calls
  std::vector<CallUsage> hint_usage;      // hinter-side calls made during the run
  std::int64_t total_prompt_tokens = 0;
  std::int64_t total_completion_tokens = 0;
  std::int64_t hint_tokens = 0;  // hinter completion tokens attributable to this run
  double wall_time = 0.0;        // sum of call latencies, seconds
  std::int64_t seed = 0;
  int repeat = 0;
  RunStatus status = RunStatus::kCompleted;
  std::string error;
  int dropped_hints = 0;
  std::optional<Outcome> verdict;

  std::int64_t total_tokens() const { return total_prompt_tokens + total_completion_tokens; }
  std::size_t call_count() const { return per_call_usage.size(); }
  bool operator==(const RunRecord&) const = default;
};

struct Verdict {
  std::string run_id;
  std::string problem_id;
  Outcome outcome = Outcome::kIncorrect;
  VerifyMethod method = VerifyMethod::kExactMatch;
  std::optional<std::string> judge_rationale;

  bool operator==(const Verdict&) const = default;
};

// Canonical run identifier: "<mode>[-<hint_source>]/<problem_id>/r<repeat>s<seed>".
std::string make_run_id(SolveMode mode, std::optional<HintSource> source,
                        std::string_view problem_id, int repeat, std::int64_t seed);

}  // namespace hintstep
