// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "hintstep/error.hpp"
#include "json.hpp"

namespace hintstep {
namespace {

using nlohmann::json;

int mode_rank(SolveMode m) {
  switch (m) {
    case SolveMode::kNoHint: return 0;
    case SolveMode::kHinted: return 1;
    case SolveMode::kSelfConsistency: return 2;
  }
  return 3;
}

int source_rank(const std::optional<HintSource>& s) {
  return s ? static_cast<int>(*s) + 1 : 0;
}

struct GroupKey {
  std::string dataset;
  SolveMode mode;
  std::optional<HintSource> source;

  auto tie() const { return std::tuple(dataset, mode_rank(mode), source_rank(source)); }
  bool operator<(const GroupKey& o) const { return tie() < o.tie(); }
};

// The configuration a run was requested under.
GroupKey key_of(const RunRecord& r) {
  SolveMode mode = r.hint_source ? SolveMode::kHinted : r.mode;
  return {r.dataset_name, mode, r.hint_source};
}

std::map<std::string_view, const Verdict*> index_verdicts(const std::vector<Verdict>& verdicts) {
  std::map<std::string_view, const Verdict*> out;
  for (const Verdict& v : verdicts) out.emplace(v.run_id, &v);
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string opt2(const std::optional<double>& v) { return v ? format_fixed2(*v) : std::string(); }

std::string source_name(const std::optional<HintSource>& s) {
  return s ? std::string(to_string(*s)) : std::string();
}

std::string render_csv(const std::vector<EvalReport>& reports) {
  std::string out =
      "dataset,mode,hint_source,n,correct,accuracy,runs,mean,se,avg_time_s,avg_tokens,"
      "avg_hint_tokens,reduction_pct\n";
  for (const EvalReport& r : reports) {
    out += csv_field(r.dataset_name) + ',' + std::string(to_string(r.mode)) + ',' +
           source_name(r.hint_source) + ',' + std::to_string(r.n_problems) + ',' +
           std::to_string(r.n_correct) + ',' + format_fixed2(r.accuracy) + ',' +
           std::to_string(r.runs) + ',' + format_fixed2(r.mean_accuracy) + ',' +
           opt2(r.std_error) + ',' + format_fixed2(r.avg_wall_time) + ',' +
           format_fixed2(r.avg_total_tokens) + ',' + format_fixed2(r.avg_hint_tokens) + ',' +
           opt2(r.reduction_pct) + '\n';
  }
  return out;
}

std::string render_json(const std::vector<EvalReport>& reports) {
  json rows = json::array();
  for (const EvalReport& r : reports) {
    json j = {{"dataset", r.dataset_name},
              {"mode", to_string(r.mode)},
              {"hint_source", r.hint_source ? json(to_string(*r.hint_source)) : json(nullptr)},
              {"k", r.k},
              {"n", r.n_problems},
              {"correct", r.n_correct},
              {"pending", r.n_pending},
              {"aborted", r.n_aborted},
              {"drop_pending", r.drop_pending},
              {"accuracy", r.accuracy},
              {"accuracy_keep_pending", r.accuracy_keep_pending},
              {"accuracy_drop_pending", r.accuracy_drop_pending},
              {"runs", r.runs},
              {"per_run_accuracy", r.per_run_accuracy},
              {"mean", r.mean_accuracy},
              {"se", r.std_error ? json(*r.std_error) : json(nullptr)},
              {"avg_time_s", r.avg_wall_time},
              {"avg_tokens", r.avg_total_tokens},
              {"avg_hint_tokens", r.avg_hint_tokens},
              {"reduction_pct", r.reduction_pct ? json(*r.reduction_pct) : json(nullptr)}};
    rows.push_back(std::move(j));
  }
  return json({{"reports", rows}}).dump(2, ' ', false) + '\n';
}

std::string render_markdown(const std::vector<EvalReport>& reports) {
  std::vector<std::string> datasets;
  std::vector<std::string> labels;
  std::map<std::pair<std::string, std::string>, const EvalReport*> cells;
  bool any_repeats = false;
  for (const EvalReport& r : reports) {
    if (std::find(datasets.begin(), datasets.end(), r.dataset_name) == datasets.end()) {
      datasets.push_back(r.dataset_name);
    }
    if (std::find(labels.begin(), labels.end(), r.label()) == labels.end()) {
      labels.push_back(r.label());
    }
    cells[{r.label(), r.dataset_name}] = &r;
    any_repeats = any_repeats || r.runs > 1;
  }
  std::sort(datasets.begin(), datasets.end());
  // Rows keep the configuration order of the first dataset they appear in.
  std::vector<std::pair<std::tuple<int, int, int>, std::string>> ordered;
  for (const std::string& l : labels) {
    for (const EvalReport& r : reports) {
      if (r.label() == l) {
        ordered.push_back({{mode_rank(r.mode), source_rank(r.hint_source), r.k}, l});
        break;
      }
    }
  }
  std::sort(ordered.begin(), ordered.end());

  auto grid = [&](const std::string& title, auto cell) {
    std::string out = "## " + title + "\n\n| Method |";
    for (const auto& d : datasets) out += " " + d + " |";
    out += "\n|---|";
    for (std::size_t i = 0; i < datasets.size(); ++i) out += "---|";
    out += '\n';
    for (const auto& [rank, label] : ordered) {
      out += "| " + label + " |";
      for (const auto& d : datasets) {
        auto it = cells.find({label, d});
        out += " " + (it == cells.end() ? std::string("-") : cell(*it->second)) + " |";
      }
      out += '\n';
    }
    return out + '\n';
  };

  std::string out = "# Evaluation report\n\n";
  out += grid("Accuracy", [](const EvalReport& r) {
    return format_fixed2(r.accuracy) + "% (" + std::to_string(r.n_correct) + "/" +
           std::to_string(r.n_problems) + ")";
  });
  if (any_repeats) {
    out += grid("Stability (mean ± SE over runs)", [](const EvalReport& r) {
      return format_fixed2(r.mean_accuracy) + " ± " +
             (r.std_error ? format_fixed2(*r.std_error) : std::string("n/a"));
    });
  }
  out += "## Detail\n\n";
  out +=
      "| dataset | mode | hint_source | n | correct | pending | aborted | accuracy | runs | mean | "
      "se | avg_time_s | avg_tokens | avg_hint_tokens | reduction_pct |\n";
  out += "|---|---|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
  for (const EvalReport& r : reports) {
    auto or_dash = [](std::string s) { return s.empty() ? std::string("-") : s; };
    out += "| " + r.dataset_name + " | " + std::string(to_string(r.mode)) + " | " +
           or_dash(source_name(r.hint_source)) + " | " + std::to_string(r.n_problems) + " | " +
           std::to_string(r.n_correct) + " | " + std::to_string(r.n_pending) + " | " +
           std::to_string(r.n_aborted) + " | " + format_fixed2(r.accuracy) + " | " +
           std::to_string(r.runs) + " | " + format_fixed2(r.mean_accuracy) + " | " +
           or_dash(opt2(r.std_error)) + " | " + format_fixed2(r.avg_wall_time) + " | " +
           format_fixed2(r.avg_total_tokens) + " | " + format_fixed2(r.avg_hint_tokens) + " | " +
           or_dash(opt2(r.reduction_pct)) + " |\n";
  }
  if (std::any_of(reports.begin(), reports.end(), [](const EvalReport& r) { return r.drop_pending; })) {
    out += "\npending_review runs are excluded from the denominator.\n";
  } else {
    out += "\npending_review runs count as incorrect.\n";
  }
  return out;
}

}  // namespace

AccuracyResult accuracy(int correct, int total) {
  if (total <= 0) throw MetricsError("accuracy over zero problems");
  if (correct < 0 || correct > total) {
    throw MetricsError("correct count " + std::to_string(correct) + " outside 0.." +
                       std::to_string(total));
  }
  return {correct, total, 100.0 * correct / total};
}

AccuracyResult accuracy(const std::vector<std::string>& problem_ids,
                        const std::vector<Verdict>& verdicts, bool drop_pending) {
  std::map<std::string_view, const Verdict*> by_problem;
  for (const Verdict& v : verdicts) {
    if (!by_problem.emplace(v.problem_id, &v).second) {
      throw MetricsError("problem " + v.problem_id + " has more than one verdict in this run");
    }
  }
  std::string missing;
  int correct = 0;
  int total = 0;
  for (const std::string& id : problem_ids) {
    auto it = by_problem.find(id);
    if (it == by_problem.end()) {
      missing += (missing.empty() ? "" : ", ") + id;
      continue;
    }
    const Outcome o = it->second->outcome;
    if (o == Outcome::kPendingReview && drop_pending) continue;
    ++total;
    if (o == Outcome::kCorrect) ++correct;
  }
  if (!missing.empty()) throw MetricsError("no verdict for problems: " + missing);
  return accuracy(correct, total);
}

Stability stability(const std::vector<double>& xs) {
  if (xs.empty()) throw MetricsError("stability over zero runs");
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  Stability s;
  s.mean = sum / n;
  if (xs.size() == 1) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std_error = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return s;
}

double token_reduction(double llm_avg_tokens, double slm_avg_tokens) {
  if (!(llm_avg_tokens > 0.0)) throw MetricsError("LLM average tokens must be positive");
  return 100.0 * (llm_avg_tokens - slm_avg_tokens) / llm_avg_tokens;
}

Efficiency efficiency_summary(const std::vector<RunRecord>& runs) {
  if (runs.empty()) throw MetricsError("efficiency summary over zero runs");
  double time = 0.0;
  double tokens = 0.0;
  for (const RunRecord& r : runs) {
    time += r.wall_time;
    tokens += static_cast<double>(r.total_tokens());
  }
  const double n = static_cast<double>(runs.size());
  return {time / n, tokens / n};
}

std::string format_fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string EvalReport::label() const {
  switch (mode) {
    case SolveMode::kNoHint: return "No hint";
    case SolveMode::kSelfConsistency: return "SC (K=" + std::to_string(k) + ")";
    case SolveMode::kHinted: break;
  }
  if (!hint_source) return "Hinted";
  switch (*hint_source) {
    case HintSource::kLlm: return "Hinted (LLM)";
    case HintSource::kFtSlm: return "Hinted (FT-SLM)";
    case HintSource::kNftSlm: return "Hinted (NFT-SLM)";
  }
  return "Hinted";
}

std::vector<EvalReport> build_reports(const std::vector<RunRecord>& runs,
                                      const std::vector<Verdict>& verdicts,
                                      const ReportOptions& options) {
  const auto by_run = index_verdicts(verdicts);
  std::map<GroupKey, std::vector<const RunRecord*>> groups;
  std::string missing;
  for (const RunRecord& r : runs) {
    if (by_run.find(r.run_id) == by_run.end()) missing += (missing.empty() ? "" : ", ") + r.run_id;
    groups[key_of(r)].push_back(&r);
  }
  if (!missing.empty()) throw MetricsError("no verdict for runs: " + missing);

  std::vector<EvalReport> out;
  for (const auto& [key, members] : groups) {
    EvalReport rep;
    rep.dataset_name = key.dataset;
    rep.mode = key.mode;
    rep.hint_source = key.source;
    rep.drop_pending = options.drop_pending;
    rep.k = members.front()->samples;

    std::map<int, std::pair<std::vector<std::string>, std::vector<Verdict>>> per_repeat;
    std::vector<RunRecord> copies;
    int kept = 0;
    int kept_correct = 0;
    double hint_tokens = 0.0;
    for (const RunRecord* r : members) {
      if (r->samples != rep.k) {
        throw MetricsError("runs for " + key.dataset + "/" + std::string(to_string(key.mode)) +
                           " mix K=" + std::to_string(rep.k) + " and K=" +
                           std::to_string(r->samples) + "; report them separately");
      }
      const Verdict& v = *by_run.at(r->run_id);
      ++rep.n_problems;
      if (v.outcome == Outcome::kCorrect) ++rep.n_correct;
      if (v.outcome == Outcome::kPendingReview) ++rep.n_pending;
      if (v.outcome != Outcome::kPendingReview) {
        ++kept;
        if (v.outcome == Outcome::kCorrect) ++kept_correct;
      }
      if (r->status == RunStatus::kAborted) ++rep.n_aborted;
      hint_tokens += static_cast<double>(r->hint_tokens);
      auto& [ids, vs] = per_repeat[r->repeat];
      ids.push_back(r->problem_id);
      vs.push_back(v);
      copies.push_back(*r);
    }
    rep.accuracy_keep_pending = accuracy(rep.n_correct, rep.n_problems).percent;
    rep.accuracy_drop_pending = kept > 0 ? accuracy(kept_correct, kept).percent : 0.0;
    rep.accuracy = options.drop_pending ? rep.accuracy_drop_pending : rep.accuracy_keep_pending;
    if (options.drop_pending) rep.n_problems = kept;

    for (const auto& [repeat, pv] : per_repeat) {
      const auto& [ids, vs] = pv;
      const bool all_pending = std::all_of(vs.begin(), vs.end(), [](const Verdict& v) {
        return v.outcome == Outcome::kPendingReview;
      });
      rep.per_run_accuracy.push_back(options.drop_pending && all_pending
                                         ? 0.0
                                         : accuracy(ids, vs, options.drop_pending).percent);
    }
    rep.runs = static_cast<int>(per_repeat.size());
    Stability st = stability(rep.per_run_accuracy);
    rep.mean_accuracy = st.mean;
    rep.std_error = st.std_error;

    Efficiency eff = efficiency_summary(copies);
    rep.avg_wall_time = eff.avg_time_s;
    rep.avg_total_tokens = eff.avg_tokens;
    rep.avg_hint_tokens = hint_tokens / static_cast<double>(members.size());
    out.push_back(std::move(rep));
  }

  for (EvalReport& rep : out) {
    if (rep.mode != SolveMode::kHinted || !rep.hint_source || *rep.hint_source == HintSource::kLlm) {
      continue;
    }
    auto llm = std::find_if(out.begin(), out.end(), [&](const EvalReport& o) {
      return o.dataset_name == rep.dataset_name && o.mode == SolveMode::kHinted &&
             o.hint_source == HintSource::kLlm;
    });
    if (llm != out.end() && llm->avg_hint_tokens > 0.0) {
      rep.reduction_pct = token_reduction(llm->avg_hint_tokens, rep.avg_hint_tokens);
    }
  }
  return out;
}

std::string render_report(const std::vector<EvalReport>& reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::kCsv: return render_csv(reports);
    case ReportFormat::kJson: return render_json(reports);
    case ReportFormat::kMarkdown: return render_markdown(reports);
  }
  return {};
}

namespace {

void write_text(const std::string& text, const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

}  // namespace

void emit_report(const std::vector<EvalReport>& reports, ReportFormat format,
                 const std::filesystem::path& path) {
  write_text(render_report(reports, format), path);
}

std::vector<PlotPoint> plot_points(const std::vector<RunRecord>& runs,
                                   const std::vector<Verdict>& verdicts) {
  const auto by_run = index_verdicts(verdicts);
  // (dataset, source) -> hints_used -> (correct, total)
  std::map<std::pair<std::string, HintSource>, std::map<int, std::pair<int, int>>> curves;
  for (const RunRecord& r : runs) {
    if (!r.hint_source) continue;
    auto v = by_run.find(r.run_id);
    if (v == by_run.end()) throw MetricsError("no verdict for run " + r.run_id);
    auto& cell = curves[{r.dataset_name, *r.hint_source}][r.hints_used];
    ++cell.second;
    if (v->second->outcome == Outcome::kCorrect) ++cell.first;
  }
  std::vector<PlotPoint> out;
  for (const auto& [key, by_hints] : curves) {
    int correct = 0;
    int total = 0;
    for (const auto& [hints, ct] : by_hints) {
      correct += ct.first;
      total += ct.second;
      out.push_back({key.first, key.second, hints, 100.0 * correct / total});
    }
  }
  return out;
}

std::string render_plot_points(const std::vector<PlotPoint>& points) {
  std::string out = "dataset,hint_source,hints_used,cumulative_accuracy\n";
  for (const PlotPoint& p : points) {
    out += csv_field(p.dataset_name) + ',' + std::string(to_string(p.hint_source)) + ',' +
           std::to_string(p.hints_used) + ',' + format_fixed2(p.cumulative_accuracy) + '\n';
  }
  return out;
}

}  // namespace hintstep
