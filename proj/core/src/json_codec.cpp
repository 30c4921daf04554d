// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "json_codec.hpp"

#include "hintstep/normalize.hpp"

namespace hintstep::codec {
namespace {

template <class E>
E enum_field(const jsonl::Reader& r, const char* key) {
  std::string s = r.string(key);
  if (auto v = enum_from_string<E>(s)) return *v;
  r.fail(std::string("invalid value '") + s + "' for field '" + key + "'");
}

json usage_list(const std::vector<CallUsage>& usage) {
  json out = json::array();
  for (const auto& u : usage) out.push_back(to_json(u));
  return out;
}

std::vector<CallUsage> usage_list_from(const jsonl::Reader& r, const char* key) {
  std::vector<CallUsage> out;
  for (const auto& item : r.array(key, false)) out.push_back(usage_from(item, r));
  return out;
}

}  // namespace

json to_json(const Problem& p) {
  json j = {{"id", p.id}, {"statement", p.statement}, {"dataset_name", p.dataset_name}};
  if (p.reference_solution) j["reference_solution"] = *p.reference_solution;
  if (p.ground_truth_answer) {
    j["ground_truth_answer"] = *p.ground_truth_answer;
    j["ground_truth_normalized"] = p.ground_truth_normalized;
  }
  j["tags"] = p.tags;
  return j;
}

json to_json(const Hint& h) {
  return {{"index", h.index}, {"text", h.text}, {"provenance", to_string(h.provenance)}};
}

json to_json(const CallUsage& u) {
  return {{"kind", u.kind},
          {"prompt_tokens", u.prompt_tokens},
          {"completion_tokens", u.completion_tokens},
          {"wall_time", u.wall_time},
          {"estimated", u.estimated},
          {"retries", u.retries}};
}

json to_json(const GenerationEvent& e) {
  return {{"step", e.step}, {"event", e.event}, {"evidence", e.evidence}};
}

json to_json(const HintSequence& h) {
  json hints = json::array();
  for (const auto& hint : h.hints) hints.push_back(to_json(hint));
  json events = json::array();
  for (const auto& e : h.events) events.push_back(to_json(e));
  return {{"problem_id", h.problem_id},
          {"generator_model", h.generator_model},
          {"created_at", h.created_at},
          {"hints", std::move(hints)},
          {"usage", usage_list(h.usage)},
          {"events", std::move(events)}};
}

json to_json(const TrainingInstance& t) {
  return {{"problem_id", t.problem_id},
          {"step_index", t.step_index},
          {"problem_statement", t.problem_statement},
          {"reasoning_state", t.reasoning_state},
          {"target_hint", t.target_hint}};
}

json to_json(const RunRecord& r) {
  json j = {
      {"run_id", r.run_id},
      {"problem_id", r.problem_id},
      {"dataset_name", r.dataset_name},
      {"mode", to_string(r.mode)},
      {"hint_source", r.hint_source ? json(to_string(*r.hint_source)) : json(nullptr)},
      {"hints_used", r.hints_used},
      {"samples", r.samples},
      {"k_effective", r.k_effective},
      {"sample_answers", r.sample_answers},
      {"final_answer_raw", r.final_answer_raw},
      {"final_answer_normalized", r.final_answer_normalized},
      {"reasoning_summary", r.reasoning_summary},
      {"per_call_usage", usage_list(r.per_call_usage)},
      {"hint_usage", usage_list(r.hint_usage)},
      {"total_prompt_tokens", r.total_prompt_tokens},
      {"total_completion_tokens", r.total_completion_tokens},
      {"hint_tokens", r.hint_tokens},
      {"wall_time", r.wall_time},
      {"seed", r.seed},
      {"repeat", r.repeat},
      {"status", to_string(r.status)},
      {"error", r.error},
      {"dropped_hints", r.dropped_hints},
      {"verdict", r.verdict ? json(to_string(*r.verdict)) : json(nullptr)},
  };
  return j;
}

json to_json(const Verdict& v) {
  json j = {{"run_id", v.run_id},
            {"problem_id", v.problem_id},
            {"outcome", to_string(v.outcome)},
            {"method", to_string(v.method)}};
  if (v.judge_rationale) j["judge_rationale"] = *v.judge_rationale;
  return j;
}

Problem problem_from(const jsonl::Reader& r) {
  Problem p;
  p.id = r.string("id");
  p.statement = r.string("statement");
  p.dataset_name = r.string("dataset_name");
  p.reference_solution = r.optional_string("reference_solution");
  p.ground_truth_answer = r.optional_string("ground_truth_answer");
  if (p.ground_truth_answer) p.ground_truth_normalized = normalize_answer(*p.ground_truth_answer);
  p.tags = r.string_list("tags");
  return p;
}

CallUsage usage_from(const json& obj, const jsonl::Reader& context) {
  if (!obj.is_object()) context.fail("usage entries must be objects");
  jsonl::Reader r(obj, context.path(), context.line());
  CallUsage u;
  u.kind = r.optional_string("kind").value_or("");
  u.prompt_tokens = r.integer("prompt_tokens");
  u.completion_tokens = r.integer("completion_tokens");
  u.wall_time = r.optional_number("wall_time").value_or(0.0);
  u.estimated = r.boolean("estimated", false);
  u.retries = static_cast<int>(r.optional_int("retries").value_or(0));
  if (u.prompt_tokens < 0 || u.completion_tokens < 0) r.fail("token counts must be >= 0");
  if (u.wall_time < 0) r.fail("wall_time must be >= 0");
  return u;
}

HintSequence hints_from(const jsonl::Reader& r, const json& obj) {
  (void)obj;
  HintSequence h;
  h.problem_id = r.string("problem_id");
  h.generator_model = r.string("generator_model");
  h.created_at = r.optional_string("created_at").value_or("");
  for (const auto& item : r.array("hints", true)) {
    if (!item.is_object()) r.fail("hints entries must be objects");
    jsonl::Reader hr(item, r.path(), r.line());
    Hint hint;
    hint.index = static_cast<int>(hr.integer("index"));
    hint.text = hr.string("text");
    hint.provenance = enum_field<HintProvenance>(hr, "provenance");
    h.hints.push_back(std::move(hint));
  }
  h.usage = usage_list_from(r, "usage");
  for (const auto& item : r.array("events", false)) {
    if (!item.is_object()) r.fail("events entries must be objects");
    jsonl::Reader er(item, r.path(), r.line());
    h.events.push_back({static_cast<int>(er.integer("step")), er.string("event"),
                        er.optional_string("evidence").value_or("")});
  }
  return h;
}

TrainingInstance training_from(const jsonl::Reader& r) {
  TrainingInstance t;
  t.problem_id = r.string("problem_id");
  t.step_index = static_cast<int>(r.integer("step_index"));
  t.problem_statement = r.string("problem_statement");
  t.reasoning_state = r.string("reasoning_state");
  t.target_hint = r.string("target_hint");
  return t;
}

RunRecord run_from(const jsonl::Reader& r, const json& obj) {
  (void)obj;
  RunRecord rec;
  rec.run_id = r.string("run_id");
  rec.problem_id = r.string("problem_id");
  rec.dataset_name = r.optional_string("dataset_name").value_or("");
  rec.mode = enum_field<SolveMode>(r, "mode");
  if (r.find("hint_source") != nullptr) rec.hint_source = enum_field<HintSource>(r, "hint_source");
  rec.hints_used = static_cast<int>(r.integer("hints_used"));
  rec.samples = static_cast<int>(r.integer("samples"));
  rec.k_effective = static_cast<int>(r.optional_int("k_effective").value_or(rec.samples));
  rec.sample_answers = r.string_list("sample_answers");
  rec.final_answer_raw = r.string("final_answer_raw");
  rec.final_answer_normalized = r.string("final_answer_normalized");
  rec.reasoning_summary = r.optional_string("reasoning_summary").value_or("");
  rec.per_call_usage = usage_list_from(r, "per_call_usage");
  rec.hint_usage = usage_list_from(r, "hint_usage");
  rec.total_prompt_tokens = r.integer("total_prompt_tokens");
  rec.total_completion_tokens = r.integer("total_completion_tokens");
  rec.hint_tokens = r.optional_int("hint_tokens").value_or(0);
  rec.wall_time = r.number("wall_time");
  rec.seed = r.integer("seed");
  rec.repeat = static_cast<int>(r.optional_int("repeat").value_or(0));
  rec.status = r.find("status") ? enum_field<RunStatus>(r, "status") : RunStatus::kCompleted;
  rec.error = r.optional_string("error").value_or("");
  rec.dropped_hints = static_cast<int>(r.optional_int("dropped_hints").value_or(0));
  if (r.find("verdict") != nullptr) rec.verdict = enum_field<Outcome>(r, "verdict");
  return rec;
}

Verdict verdict_from(const jsonl::Reader& r) {
  Verdict v;
  v.run_id = r.string("run_id");
  v.problem_id = r.string("problem_id");
  v.outcome = enum_field<Outcome>(r, "outcome");
  v.method = enum_field<VerifyMethod>(r, "method");
  v.judge_rationale = r.optional_string("judge_rationale");
  return v;
}

}  // namespace hintstep::codec
