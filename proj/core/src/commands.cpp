// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/commands.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>
#include <tuple>

#include "hintstep/dataset.hpp"
#include "hintstep/error.hpp"
#include "hintstep/hinter.hpp"
#include "hintstep/metrics.hpp"
#include "hintstep/solver.hpp"
#include "hintstep/verify.hpp"
#include "json_codec.hpp"
#include "jsonl_io.hpp"

namespace hintstep {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// Runs fn(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any call is rethrown after all threads finish.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn fn) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(mu);
          if (!first_error) first_error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

const fs::path& require_path(const fs::path& p, const char* key) {
  if (p.empty()) throw ConfigError(std::string("paths.") + key + " is not set");
  return p;
}

const fs::path& require_file(const fs::path& p, const char* key) {
  require_path(p, key);
  if (!fs::exists(p)) throw IoError(std::string(key) + " file not found: " + p.string());
  return p;
}

const BackendSpec& require_backend(const std::optional<BackendSpec>& b, const char* role) {
  if (!b) throw ConfigError(std::string("backends.") + role + " is not configured");
  return *b;
}

json messages_json(const ChatTranscript& t) {
  json out = json::array();
  for (const ChatMessage& m : t.messages()) {
    out.push_back({{"role", to_string(m.role)}, {"content", m.content}});
  }
  return out;
}

json decoding_json(const DecodingParams& d) {
  json j = {{"temperature", d.temperature},
            {"top_p", d.top_p},
            {"max_new_tokens", d.max_new_tokens},
            {"response_format",
             d.response_format == ResponseFormat::kConstrainedJson ? "constrained_json" : "free_text"}};
  j["seed"] = d.seed ? json(*d.seed) : json(nullptr);
  return j;
}

json trace_json(const RunRecord& run, const SolveTrace& trace) {
  json calls = json::array();
  for (const CallTrace& c : trace.calls) {
    calls.push_back({{"kind", c.kind},
                     {"step", c.step},
                     {"messages", messages_json(c.transcript)},
                     {"decoding", decoding_json(c.decoding)},
                     {"response", c.response},
                     {"usage", codec::to_json(c.usage)}});
  }
  return {{"run_id", run.run_id},
          {"problem_id", run.problem_id},
          {"calls", std::move(calls)},
          {"states", trace.states}};
}

void write_text_file(const std::string& text, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out.flush()) throw IoError("write error on " + path.string());
}

}  // namespace

int cmd_gen_hints(const RunConfig& config, std::ostream& log) {
  const auto problems = load_problems(require_file(config.problems, "problems"));
  auto backend = make_backend(require_backend(config.hinter, "hinter"));
  const PromptSet prompts = load_prompts(config);
  OracleHintOptions options;
  options.max_hints = config.max_hints;
  options.include_prior_hints = config.include_prior_hints;
  options.created_at = artifact_timestamp(*backend);

  std::vector<std::optional<HintSequence>> results(problems.size());
  std::vector<std::string> skipped(problems.size());
  parallel_for(problems.size(), backend->max_concurrency(), [&](std::size_t i) {
    const Problem& p = problems[i];
    if (!p.eligible_for_hints()) {
      skipped[i] = "no reference_solution or ground_truth_answer";
      return;
    }
    try {
      results[i] = generate_oracle_hints(p, *backend, prompts, options);
    } catch (const NoUsableHintsError& e) {
      skipped[i] = e.what();
    } catch (const BackendError& e) {
      skipped[i] = std::string("backend error: ") + e.what();
    }
  });

  std::vector<HintSequence> out;
  int skips = 0;
  for (std::size_t i = 0; i < problems.size(); ++i) {
    if (results[i]) {
      for (const GenerationEvent& ev : results[i]->events) {
        log << "hint " << problems[i].id << " step " << ev.step << ": " << ev.event << " ("
            << ev.evidence << ")\n";
      }
      out.push_back(std::move(*results[i]));
    } else {
      ++skips;
      log << "skipped " << problems[i].id << ": " << skipped[i] << '\n';
    }
  }
  save_hints(out, require_path(config.hints, "hints"));
  log << "wrote " << out.size() << " hint sequences to " << config.hints.string() << '\n';
  return skips > 0 ? kExitPartial : kExitOk;
}

int cmd_export_training(const RunConfig& config, std::ostream& log) {
  const auto problems = load_problems(require_file(config.problems, "problems"));
  const auto hints = load_hints(require_file(config.hints, "hints"));
  const PromptSet prompts = load_prompts(config);
  const HintPromptTemplate step(prompts.step_hint, HintTemplateMode::kStep);

  ExportResult result = export_training_instances(problems, hints);
  for (const ExportError& e : result.errors) log << "skipped " << e.problem_id << ": " << e.message << '\n';
  save_training(result.instances, require_path(config.training, "training"));

  std::vector<json> rows;
  for (const TrainingInstance& inst : result.instances) {
    TrainingPrompt tp = render_training_prompt(inst, step);
    rows.push_back({{"problem_id", tp.problem_id},
                    {"step_index", tp.step_index},
                    {"system", tp.system},
                    {"prompt", tp.prompt},
                    {"completion", tp.completion}});
  }
  jsonl::write_lines(rows, require_path(config.training_prompts, "training_prompts"));
  log << "wrote " << result.instances.size() << " training instances to "
      << config.training.string() << '\n';
  return result.errors.empty() ? kExitOk : kExitPartial;
}

int cmd_solve(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto problems = load_problems(require_file(config.problems, "problems"));
  auto solver = make_backend(require_backend(config.solver, "solver"));
  const PromptSet prompts = load_prompts(config);
  const bool hinted = config.mode == SolveMode::kHinted;
  const bool online = hinted && config.hint_source != HintSource::kLlm;

  std::map<std::string, HintSequence> hints_by_problem;
  if (hinted && !online) {
    for (HintSequence& h : load_hints(require_file(config.hints, "hints"))) {
      std::string id = h.problem_id;
      hints_by_problem.emplace(std::move(id), std::move(h));
    }
  }
  std::unique_ptr<Backend> step_hinter;
  if (online) step_hinter = make_backend(require_backend(config.step_hinter, "step_hinter"));

  const fs::path& runs_path = require_path(config.runs, "runs");
  std::set<std::string> existing;
  if (fs::exists(runs_path)) {
    for (const RunRecord& r : load_runs(runs_path)) existing.insert(r.run_id);
  }

  struct Job {
    const Problem* problem;
    int repeat;
    std::int64_t seed;
  };
  std::vector<Job> jobs;
  const std::optional<HintSource> source =
      hinted ? std::optional<HintSource>(config.hint_source) : std::nullopt;
  for (int r = 0; r < config.runs_count; ++r) {
    for (const Problem& p : problems) {
      Job job{&p, r, config.seed + r};
      std::string id = make_run_id(config.mode, source, p.id, r, job.seed);
      if (existing.count(id) != 0) {
        throw Error("run " + id + " already exists in " + runs_path.string() +
                    "; choose another --seed or --out");
      }
      jobs.push_back(job);
    }
  }
  for (const Problem& p : problems) {
    if (hinted && !online && hints_by_problem.count(p.id) == 0) {
      log << "no hints for " << p.id << "; it will be solved without hints\n";
    }
  }

  std::mutex writer;
  int aborted = 0;
  int workers = solver->max_concurrency();
  if (step_hinter) workers = std::min(workers, step_hinter->max_concurrency());
  parallel_for(jobs.size(), workers, [&](std::size_t i) {
    const Job& job = jobs[i];
    SolverOptions opts;
    opts.seed = job.seed;
    opts.repeat = job.repeat;
    opts.include_problem_every_step = config.include_problem_every_step;
    opts.hint_source = config.hint_source;
    opts.refinement = refinement_preset();
    opts.synthesis = synthesis_preset();
    SolveTrace trace;
    RunRecord rec;
    switch (config.mode) {
      case SolveMode::kNoHint:
        rec = solve_no_hint(*job.problem, *solver, prompts, opts, &trace);
        break;
      case SolveMode::kSelfConsistency:
        rec = solve_self_consistency(*job.problem, *solver, prompts, config.k, opts, &trace);
        break;
      case SolveMode::kHinted:
        if (online) {
          rec = solve_hinted_online(*job.problem, *solver, *step_hinter, prompts, config.max_hints,
                                    opts, &trace);
        } else {
          auto it = hints_by_problem.find(job.problem->id);
          HintSequence none{job.problem->id, {}, {}, {}, {}, {}};
          rec = solve_hinted(*job.problem, it == hints_by_problem.end() ? none : it->second,
                             *solver, prompts, opts, &trace);
        }
        break;
    }
    std::lock_guard lock(writer);
    append_runs({rec}, runs_path);
    jsonl::write_lines({trace_json(rec, trace)}, require_path(config.transcripts, "transcripts"),
                       /*append=*/true);
    if (rec.status == RunStatus::kAborted) {
      ++aborted;
      log << "aborted " << rec.run_id << ": " << rec.error << '\n';
    }
  });
  log << "appended " << jobs.size() << " runs to " << runs_path.string() << '\n';
  return aborted > 0 ? kExitPartial : kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& log) {
  const auto problems = load_problems(require_file(config.problems, "problems"));
  auto runs = load_runs(require_file(config.runs, "runs"));
  const PromptSet prompts = load_prompts(config);
  std::unique_ptr<Backend> judge;
  if (config.judge) judge = make_backend(*config.judge);

  std::map<std::string_view, const Problem*> by_id;
  for (const Problem& p : problems) by_id.emplace(p.id, &p);
  for (const RunRecord& r : runs) {
    if (by_id.count(r.problem_id) == 0) {
      throw VerifyError("run " + r.run_id + " refers to unknown problem " + r.problem_id);
    }
  }
  std::sort(runs.begin(), runs.end(),
            [](const RunRecord& a, const RunRecord& b) { return a.run_id < b.run_id; });

  std::vector<Verdict> verdicts(runs.size());
  parallel_for(runs.size(), judge ? judge->max_concurrency() : 1, [&](std::size_t i) {
    verdicts[i] = verify_run(runs[i], *by_id.at(runs[i].problem_id), judge.get(), prompts);
  });
  int pending = 0;
  for (const Verdict& v : verdicts) {
    if (v.outcome == Outcome::kPendingReview) {
      ++pending;
      log << "pending_review " << v.run_id << '\n';
    }
  }
  save_verdicts(verdicts, require_path(config.verdicts, "verdicts"));
  log << "wrote " << verdicts.size() << " verdicts (" << pending << " pending review) to "
      << config.verdicts.string() << '\n';
  return kExitOk;
}

int cmd_report(const RunConfig& config, std::ostream& log) {
  auto runs = load_runs(require_file(config.runs, "runs"));
  auto verdicts = load_verdicts(require_file(config.verdicts, "verdicts"));
  if (config.overrides) verdicts = apply_human_override(*config.overrides, std::move(verdicts));
  std::sort(runs.begin(), runs.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.problem_id, a.mode, a.run_id) < std::tie(b.problem_id, b.mode, b.run_id);
  });

  ReportOptions options;
  options.drop_pending = config.drop_pending;
  const auto reports = build_reports(runs, verdicts, options);
  const fs::path dir = config.report_dir;
  emit_report(reports, ReportFormat::kCsv, dir / "report.csv");
  emit_report(reports, ReportFormat::kJson, dir / "report.json");
  emit_report(reports, ReportFormat::kMarkdown, dir / "report.md");
  write_text_file(render_plot_points(plot_points(runs, verdicts)), dir / "plot_points.csv");
  log << "wrote " << reports.size() << " report rows to " << dir.string() << '\n';
  return kExitOk;
}

}  // namespace hintstep
