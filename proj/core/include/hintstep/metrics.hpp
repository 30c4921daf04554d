// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hintstep/types.hpp"

namespace hintstep {

struct AccuracyResult {
  int correct = 0;
  int total = 0;
  double percent = 0.0;  // full precision

  bool operator==(const AccuracyResult&) const = default;
};

// 100 * correct / total. Throws MetricsError when total <= 0 or correct is
// out of range.
AccuracyResult accuracy(int correct, int total);

// Accuracy of one run: one verdict per problem id. pending_review counts as
// not correct; with drop_pending it is left out of the denominator as well.
// Throws MetricsError listing problem ids without a verdict.
AccuracyResult accuracy(const std::vector<std::string>& problem_ids,
                        const std::vector<Verdict>& verdicts, bool drop_pending = false);

struct Stability {
  double mean = 0.0;
  std::optional<double> std_error;  // absent when R = 1
};

// Mean and standard error (sample std with divisor R-1, over sqrt R) of
// per-run accuracies. Throws MetricsError on empty input.
Stability stability(const std::vector<double>& per_run_accuracies);

// 100 * (llm - slm) / llm; negative when the SLM spends more. Throws
// MetricsError unless llm_avg_tokens > 0.
double token_reduction(double llm_avg_tokens, double slm_avg_tokens);

struct Efficiency {
  double avg_time_s = 0.0;
  double avg_tokens = 0.0;
};

// Mean wall time and mean solver-side total tokens. Throws MetricsError on
// empty input.
Efficiency efficiency_summary(const std::vector<RunRecord>& runs);

// Two-decimal display form ("78.67").
std::string format_fixed2(double v);

struct EvalReport {
  std::string dataset_name;
  SolveMode mode = SolveMode::kNoHint;  // requested configuration
  std::optional<HintSource> hint_source;
  int k = 1;  // samples per problem
  int n_problems = 0;  // records over all runs
  int n_correct = 0;
  int n_pending = 0;
  int n_aborted = 0;
  double accuracy = 0.0;  // under the chosen pending policy
  double accuracy_drop_pending = 0.0;
  double accuracy_keep_pending = 0.0;
  bool drop_pending = false;
  int runs = 1;
  std::vector<double> per_run_accuracy;  // by repeat index
  double mean_accuracy = 0.0;
  std::optional<double> std_error;
  double avg_wall_time = 0.0;
  double avg_total_tokens = 0.0;
  double avg_hint_tokens = 0.0;
  std::optional<double> reduction_pct;  // SLM hinted rows vs the LLM hinted row

  // "Hinted (FT-SLM)", "SC (K=8)", ...
  std::string label() const;
};

struct ReportOptions {
  bool drop_pending = false;
};

// Groups runs by (dataset, requested mode, hint source) and aggregates them.
// A run carrying a hint_source belongs to the hinted configuration even if it
// fell back to no_hint. Rows are ordered by dataset, then no_hint, hinted
// (llm, ft_slm, nft_slm), self_consistency. Throws MetricsError for runs
// without a verdict or a self-consistency group mixing K values.
std::vector<EvalReport> build_reports(const std::vector<RunRecord>& runs,
                                      const std::vector<Verdict>& verdicts,
                                      const ReportOptions& options = {});

enum class ReportFormat { kCsv, kJson, kMarkdown };

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format);
void emit_report(const std::vector<EvalReport>& reports, ReportFormat format,
                 const std::filesystem::path& path);

struct PlotPoint {
  std::string dataset_name;
  HintSource hint_source = HintSource::kLlm;
  int hints_used = 0;
  double cumulative_accuracy = 0.0;  // over hinted runs that used <= hints_used hints
};

// Accuracy against number of hints consumed, one curve per hinted group.
std::vector<PlotPoint> plot_points(const std::vector<RunRecord>& runs,
                                   const std::vector<Verdict>& verdicts);
std::string render_plot_points(const std::vector<PlotPoint>& points);

}  // namespace hintstep
