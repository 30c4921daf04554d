// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>

#include "hintstep/config.hpp"

namespace hintstep {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFatal = 1;
inline constexpr int kExitPartial = 2;

// Each command reads and writes only the files named in the config and
// reports progress and skipped items on `log`. Fatal problems throw (the CLI
// maps any exception to kExitFatal); otherwise the result is kExitOk or
// kExitPartial.

// problems -> hints.jsonl. Ineligible problems and problems whose hints all
// leaked are skipped.
int cmd_gen_hints(const RunConfig& config, std::ostream& log);

// problems + hints -> training.jsonl and training_prompts.jsonl.
int cmd_export_training(const RunConfig& config, std::ostream& log);

// problems (+ hints) -> runs.jsonl and transcripts.jsonl, appending R x N
// records. Refuses to append a run_id that is already in runs.jsonl.
int cmd_solve(const RunConfig& config, std::ostream& log);

// problems + runs -> verdicts.jsonl.
int cmd_verify(const RunConfig& config, std::ostream& log);

// runs + verdicts (+ overrides) -> report.csv, report.json, report.md,
// plot_points.csv in the report directory.
int cmd_report(const RunConfig& config, std::ostream& log);

}  // namespace hintstep
