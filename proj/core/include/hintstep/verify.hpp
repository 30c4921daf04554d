// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hintstep/backend.hpp"
#include "hintstep/prompt.hpp"
#include "hintstep/types.hpp"

namespace hintstep {

// Correct iff the normalized answers are equal. Throws VerifyError when the
// problem has no ground-truth answer (those go to a judge).
Verdict verify_exact(const RunRecord& run, const Problem& problem);

enum class JudgeCall { kCorrect, kIncorrect, kUnsure };

struct JudgeReply {
  JudgeCall call = JudgeCall::kUnsure;
  std::string rationale;
};

// {"verdict": "correct"|"incorrect"|"unsure", "rationale": ...}, optionally
// fenced or embedded in prose. nullopt (with *error set) when unusable.
std::optional<JudgeReply> parse_judge_reply(std::string_view reply, std::string* error = nullptr);

// Asks the judge (temperature 0, JSON output) whether the run's answer matches
// the ground truth, or the reference solution when there is no answer. A
// malformed reply gets one repair turn. Outcome:
//   judge unsure or unparseable            -> pending_review
//   ground truth present, exact != judge   -> pending_review
//   otherwise                              -> the judge's call
// method is judge_model. Throws BackendError on call failure and VerifyError
// when the problem has neither answer nor solution.
Verdict verify_with_judge(const RunRecord& run, const Problem& problem, Backend& judge,
                          const PromptSet& prompts, CallUsage* usage = nullptr);

// The full per-run pipeline used by the CLI:
//   aborted run                    -> incorrect (exact_match)
//   judge configured               -> verify_with_judge; a failed judge call
//                                     leaves the run pending_review
//   ground truth, no judge         -> verify_exact
//   no ground truth, no judge      -> pending_review (exact_match)
Verdict verify_run(const RunRecord& run, const Problem& problem, Backend* judge,
                   const PromptSet& prompts);

struct Override {
  std::string run_id;
  Outcome outcome = Outcome::kCorrect;
};

// Replaces pending_review verdicts by human decisions (method human_override).
// Throws VerifyError for unknown run ids, for verdicts that are not pending,
// for repeated run ids, and for overrides to pending_review.
std::vector<Verdict> apply_human_override(const std::vector<Override>& overrides,
                                          std::vector<Verdict> verdicts);
std::vector<Verdict> apply_human_override(const std::filesystem::path& override_file,
                                          std::vector<Verdict> verdicts);

std::vector<Override> load_overrides(const std::filesystem::path& path);
std::vector<Verdict> load_verdicts(const std::filesystem::path& path);
void save_verdicts(const std::vector<Verdict>& verdicts, const std::filesystem::path& path);

}  // namespace hintstep
