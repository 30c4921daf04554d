// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/solver.hpp"

#include <algorithm>
#include <map>

#include "hintstep/error.hpp"
#include "hintstep/hinter.hpp"
#include "hintstep/normalize.hpp"
#include "json.hpp"
#include "text_util.hpp"

namespace hintstep {
namespace {

using nlohmann::json;

std::string_view strip_code_fence(std::string_view s) {
  s = text::trim(s);
  if (s.substr(0, 3) != "```") return s;
  std::size_t first_nl = s.find('\n');
  if (first_nl == std::string_view::npos) return s;
  std::size_t close = s.rfind("```");
  if (close <= first_nl) return s.substr(first_nl + 1);
  return text::trim(s.substr(first_nl + 1, close - first_nl - 1));
}

std::optional<Synthesis> synthesis_from(const json& j, std::string* error) {
  auto fail = [&](std::string why) -> std::optional<Synthesis> {
    if (error) *error = std::move(why);
    return std::nullopt;
  };
  if (!j.is_object()) return fail("reply is not a JSON object");
  auto it = j.find("final_answer");
  if (it == j.end()) return fail("missing \"final_answer\"");
  Synthesis s;
  if (it->is_string()) {
    s.final_answer = it->get<std::string>();
  } else if (it->is_number()) {
    s.final_answer = it->dump();
  } else {
    return fail("\"final_answer\" must be a string");
  }
  if (auto sum = j.find("reasoning_summary"); sum != j.end() && sum->is_string()) {
    s.reasoning_summary = sum->get<std::string>();
  }
  return s;
}

void add_usage(RunRecord& r, CallUsage u) {
  r.total_prompt_tokens += u.prompt_tokens;
  r.total_completion_tokens += u.completion_tokens;
  r.wall_time += u.wall_time;
  r.per_call_usage.push_back(std::move(u));
}

// Issues one call, tags its usage and records it on the run and the trace.
Completion call(Backend& backend, const ChatTranscript& transcript, const DecodingParams& decoding,
                const char* kind, int step, RunRecord& run, SolveTrace* trace) {
  Completion c = backend.complete(transcript, decoding);
  c.usage.kind = kind;
  add_usage(run, c.usage);
  if (trace) trace->calls.push_back({kind, step, transcript, decoding, c.text, c.usage});
  return c;
}

DecodingParams with_seed(DecodingParams d, std::int64_t seed) {
  if (!d.seed) d.seed = seed;
  return d;
}

RunRecord new_record(const Problem& problem, SolveMode requested, std::optional<HintSource> source,
                     const SolverOptions& options) {
  RunRecord r;
  r.run_id = make_run_id(requested, source, problem.id, options.repeat, options.seed);
  r.problem_id = problem.id;
  r.dataset_name = problem.dataset_name;
  r.mode = requested;
  r.hint_source = source;
  r.seed = options.seed;
  r.repeat = options.repeat;
  return r;
}

void abort_run(RunRecord& r, const std::string& why) {
  r.status = RunStatus::kAborted;
  r.error = why;
  r.final_answer_raw.clear();
  r.final_answer_normalized.clear();
  r.reasoning_summary.clear();
}

void set_answer(RunRecord& r, const Synthesis& s) {
  r.final_answer_raw = s.final_answer;
  r.final_answer_normalized = normalize_answer(s.final_answer);
  r.reasoning_summary = s.reasoning_summary;
}

// Synthesis-format call with a single repair re-ask on malformed JSON.
// Throws BackendError on call failure, Error when the repaired reply is still
// unusable.
Synthesis synthesize(Backend& backend, const PromptSet& prompts, ChatTranscript transcript,
                     const DecodingParams& decoding, const char* kind, RunRecord& run,
                     SolveTrace* trace) {
  Completion c = call(backend, transcript, decoding, kind, 0, run, trace);
  std::string why;
  if (auto s = parse_synthesis(c.text, &why)) return *s;
  transcript.assistant(c.text);
  transcript.user(prompts.repair.render("user", {{"error", why}}));
  Completion again = call(backend, transcript, decoding, "repair", 0, run, trace);
  if (auto s = parse_synthesis(again.text, &why)) return *s;
  throw Error("malformed synthesis reply after repair: " + why);
}

ChatTranscript direct_transcript(const PromptSet& prompts, const Problem& problem) {
  ChatTranscript t;
  t.system(prompts.solver_direct.section("system"));
  t.user(prompts.solver_direct.render("user", {{"statement", problem.statement}}));
  return t;
}

ChatTranscript synthesis_transcript(const PromptSet& prompts, const Problem& problem,
                                    std::string_view state) {
  ChatTranscript t;
  t.system(prompts.solver_synthesize.section("system"));
  t.user(prompts.solver_synthesize.render(
      "user", {{"reasoning_state", state.empty() ? std::string(kEmptyReasoningState)
                                                 : std::string(state)},
               {"statement", problem.statement}}));
  return t;
}

void no_hint_into(RunRecord& r, const Problem& problem, Backend& backend,
                  const PromptSet& prompts, const SolverOptions& options, SolveTrace* trace) {
  try {
    set_answer(r, synthesize(backend, prompts, direct_transcript(prompts, problem),
                             with_seed(options.synthesis, options.seed), "synthesize", r, trace));
  } catch (const Error& e) {
    abort_run(r, e.what());
  }
}

// Refines W_{t-1} with h_t; returns W_t.
std::string refine(Backend& backend, const PromptSet& prompts, const Problem& problem,
                   const std::string& prior, const std::string& hint, int step,
                   const SolverOptions& options, RunRecord& run, SolveTrace* trace) {
  ChatTranscript t = refinement_transcript(prompts, problem.statement, prior, hint, step,
                                           options.include_problem_every_step);
  Completion c =
      call(backend, t, with_seed(options.refinement, options.seed), "refine", step, run, trace);
  if (trace) trace->states.push_back(c.text);
  return std::move(c.text);
}

void finish_hinted(RunRecord& r, const Problem& problem, Backend& backend,
                   const PromptSet& prompts, const std::string& state,
                   const SolverOptions& options, SolveTrace* trace) {
  set_answer(r, synthesize(backend, prompts, synthesis_transcript(prompts, problem, state),
                           with_seed(options.synthesis, options.seed), "synthesize", r, trace));
}

// Forwards to a backend and copies each hinter call into the solve trace.
class TracingBackend final : public Backend {
 public:
  TracingBackend(Backend& inner, SolveTrace* trace) : inner_(inner), trace_(trace) {}
  Completion complete(const ChatTranscript& t, const DecodingParams& d) override {
    Completion c = inner_.complete(t, d);
    if (trace_) {
      CallUsage u = c.usage;
      u.kind = "hint";
      trace_->calls.push_back({"hint", step, t, d, c.text, u});
    }
    return c;
  }
  const DecodingParams& default_decoding() const override { return inner_.default_decoding(); }
  std::string model_name() const override { return inner_.model_name(); }
  int max_concurrency() const override { return inner_.max_concurrency(); }
  bool scripted() const override { return inner_.scripted(); }

  int step = 0;

 private:
  Backend& inner_;
  SolveTrace* trace_;
};

}  // namespace

std::optional<Synthesis> parse_synthesis(std::string_view reply, std::string* error) {
  std::string_view body = strip_code_fence(reply);
  json j = json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) {
    std::size_t open = body.find('{');
    std::size_t close = body.rfind('}');
    if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
      j = json::parse(body.substr(open, close - open + 1), nullptr, false);
    }
  }
  if (j.is_discarded()) {
    if (error) *error = "reply is not valid JSON";
    return std::nullopt;
  }
  return synthesis_from(j, error);
}

std::string majority_vote(const std::vector<std::string>& answers) {
  if (answers.empty()) throw Error("majority vote over no answers");
  std::map<std::string_view, int> counts;
  for (const std::string& a : answers) ++counts[a];
  // Scanning in sample order and replacing only on a strictly larger count
  // keeps the earliest answer among ties.
  std::string_view best;
  int best_count = 0;
  for (const std::string& a : answers) {
    if (counts[a] > best_count) {
      best = a;
      best_count = counts[a];
    }
  }
  return std::string(best);
}

ChatTranscript refinement_transcript(const PromptSet& prompts, std::string_view statement,
                                     std::string_view prior_state, std::string_view hint, int step,
                                     bool include_problem_every_step) {
  const PromptTemplate& tmpl = prompts.solver_refine;
  ChatTranscript t;
  t.system(tmpl.section("system"));
  if (step <= 1 || include_problem_every_step) {
    t.user(tmpl.render("problem", {{"statement", std::string(statement)}}));
  }
  if (step > 1) {
    t.user(tmpl.render("state", {{"reasoning_state", prior_state.empty()
                                                         ? std::string(kEmptyReasoningState)
                                                         : std::string(prior_state)}}));
  }
  t.user(tmpl.render("hint", {{"hint", std::string(hint)}}));
  return t;
}

RunRecord solve_no_hint(const Problem& problem, Backend& backend, const PromptSet& prompts,
                        const SolverOptions& options, SolveTrace* trace) {
  RunRecord r = new_record(problem, SolveMode::kNoHint, std::nullopt, options);
  no_hint_into(r, problem, backend, prompts, options, trace);
  return r;
}

RunRecord solve_hinted(const Problem& problem, const HintSequence& hints, Backend& backend,
                       const PromptSet& prompts, const SolverOptions& options, SolveTrace* trace) {
  if (hints.problem_id != problem.id) {
    throw Error("hint sequence for " + hints.problem_id + " used with problem " + problem.id);
  }
  RunRecord r = new_record(problem, SolveMode::kHinted, options.hint_source, options);
  r.hint_tokens = hints.completion_tokens();
  if (hints.hints.empty()) {
    r.mode = SolveMode::kNoHint;
    no_hint_into(r, problem, backend, prompts, options, trace);
    return r;
  }
  std::string state;
  try {
    for (const Hint& h : hints.hints) {
      state = refine(backend, prompts, problem, state, h.text, r.hints_used + 1, options, r, trace);
      ++r.hints_used;
    }
    finish_hinted(r, problem, backend, prompts, state, options, trace);
  } catch (const Error& e) {
    abort_run(r, e.what());
  }
  return r;
}

RunRecord solve_hinted_online(const Problem& problem, Backend& solver, Backend& hinter,
                              const PromptSet& prompts, int max_hints,
                              const SolverOptions& options, SolveTrace* trace) {
  if (max_hints < 1) throw Error("max_hints must be >= 1");
  const HintPromptTemplate step_template(prompts.step_hint, HintTemplateMode::kStep);
  const HintProvenance provenance = provenance_for(options.hint_source);
  TracingBackend traced(hinter, trace);

  RunRecord r = new_record(problem, SolveMode::kHinted, options.hint_source, options);
  ReasoningState state{problem.id, 0, {}, {}};
  try {
    for (int t = 1; t <= max_hints; ++t) {
      traced.step = t;
      StepHintResult hint = generate_step_hint(problem, state, traced, step_template, provenance);
      for (CallUsage& u : hint.usage) {
        r.hint_tokens += u.completion_tokens;
        r.wall_time += u.wall_time;
        r.hint_usage.push_back(std::move(u));
      }
      if (!hint.hint) break;
      if (hint.leakage.leaked) {
        ++r.dropped_hints;
        break;
      }
      state.text = refine(solver, prompts, problem, state.text, hint.hint->text, t, options, r,
                          trace);
      state.step = t;
      state.call_log.push_back(r.per_call_usage.back());
      r.hints_used = t;
    }
    if (r.hints_used == 0) {
      r.mode = SolveMode::kNoHint;
      no_hint_into(r, problem, solver, prompts, options, trace);
      return r;
    }
    finish_hinted(r, problem, solver, prompts, state.text, options, trace);
  } catch (const Error& e) {
    abort_run(r, e.what());
  }
  return r;
}

RunRecord solve_self_consistency(const Problem& problem, Backend& backend,
                                 const PromptSet& prompts, int k, const SolverOptions& options,
                                 SolveTrace* trace) {
  if (k < 1) throw Error("self-consistency needs K >= 1");
  RunRecord r = new_record(problem, SolveMode::kSelfConsistency, std::nullopt, options);
  r.samples = k;
  r.k_effective = 0;
  const ChatTranscript transcript = direct_transcript(prompts, problem);
  std::vector<Synthesis> parsed;
  std::string last_error;
  for (int i = 0; i < k; ++i) {
    DecodingParams d = options.synthesis;
    d.seed = options.seed + i;
    try {
      Completion c = call(backend, transcript, d, "sample", i + 1, r, trace);
      std::string why;
      if (auto s = parse_synthesis(c.text, &why)) {
        r.sample_answers.push_back(normalize_answer(s->final_answer));
        parsed.push_back(std::move(*s));
      } else {
        last_error = "sample " + std::to_string(i + 1) + ": " + why;
      }
    } catch (const BackendError& e) {
      last_error = "sample " + std::to_string(i + 1) + ": " + e.what();
    }
  }
  r.k_effective = static_cast<int>(parsed.size());
  if (parsed.empty()) {
    abort_run(r, "all " + std::to_string(k) + " samples failed; last: " + last_error);
    return r;
  }
  const std::string winner = majority_vote(r.sample_answers);
  auto it = std::find(r.sample_answers.begin(), r.sample_answers.end(), winner);
  set_answer(r, parsed[static_cast<std::size_t>(it - r.sample_answers.begin())]);
  return r;
}

}  // namespace hintstep
