// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/verify.hpp"

#include <map>
#include <set>

#include "hintstep/error.hpp"
#include "hintstep/normalize.hpp"
#include "json_codec.hpp"
#include "text_util.hpp"

namespace hintstep {
namespace {

using nlohmann::json;

json parse_lenient(std::string_view reply) {
  std::string_view body = text::trim(reply);
  if (body.substr(0, 3) == "```") {
    std::size_t nl = body.find('\n');
    std::size_t close = body.rfind("```");
    if (nl != std::string_view::npos && close > nl) body = body.substr(nl + 1, close - nl - 1);
  }
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) {
    std::size_t open = body.find('{');
    std::size_t close = body.rfind('}');
    if (open != std::string_view::npos && close != std::string_view::npos && close > open) {
      j = json::parse(body.substr(open, close - open + 1), nullptr, false);
    }
  }
  return j;
}

Verdict base_verdict(const RunRecord& run) {
  Verdict v;
  v.run_id = run.run_id;
  v.problem_id = run.problem_id;
  return v;
}

}  // namespace

Verdict verify_exact(const RunRecord& run, const Problem& problem) {
  if (!problem.ground_truth_answer) {
    throw VerifyError("problem " + problem.id +
                      " has no ground_truth_answer; exact match is impossible, use a judge");
  }
  Verdict v = base_verdict(run);
  v.method = VerifyMethod::kExactMatch;
  const bool same = run.status == RunStatus::kCompleted &&
                    normalize_answer(run.final_answer_raw) == problem.ground_truth_normalized;
  v.outcome = same ? Outcome::kCorrect : Outcome::kIncorrect;
  return v;
}

std::optional<JudgeReply> parse_judge_reply(std::string_view reply, std::string* error) {
  auto fail = [&](const char* why) -> std::optional<JudgeReply> {
    if (error) *error = why;
    return std::nullopt;
  };
  json j = parse_lenient(reply);
  if (j.is_discarded()) return fail("reply is not valid JSON");
  if (!j.is_object()) return fail("reply is not a JSON object");
  auto it = j.find("verdict");
  if (it == j.end() || !it->is_string()) return fail("missing string field \"verdict\"");
  JudgeReply out;
  std::string call = text::to_lower(text::trim(it->get<std::string>()));
  if (call == "correct") {
    out.call = JudgeCall::kCorrect;
  } else if (call == "incorrect") {
    out.call = JudgeCall::kIncorrect;
  } else if (call == "unsure") {
    out.call = JudgeCall::kUnsure;
  } else {
    return fail("\"verdict\" must be correct, incorrect or unsure");
  }
  if (auto r = j.find("rationale"); r != j.end() && r->is_string()) {
    out.rationale = r->get<std::string>();
  }
  return out;
}

Verdict verify_with_judge(const RunRecord& run, const Problem& problem, Backend& judge,
                          const PromptSet& prompts, CallUsage* usage) {
  const std::optional<std::string>& reference =
      problem.ground_truth_answer ? problem.ground_truth_answer : problem.reference_solution;
  if (!reference) {
    throw VerifyError("problem " + problem.id +
                      " has neither an answer nor a solution to judge against");
  }
  ChatTranscript t;
  t.system(prompts.judge.section("system"));
  t.user(prompts.judge.render("user", {{"statement", problem.statement},
                                       {"reference", *reference},
                                       {"answer", run.final_answer_raw},
                                       {"summary", run.reasoning_summary}}));
  DecodingParams d = judge.default_decoding();
  d.temperature = 0.0;
  d.response_format = ResponseFormat::kConstrainedJson;

  CallUsage total;
  total.kind = "judge";
  auto ask = [&](const ChatTranscript& transcript) {
    Completion c = judge.complete(transcript, d);
    total.prompt_tokens += c.usage.prompt_tokens;
    total.completion_tokens += c.usage.completion_tokens;
    total.wall_time += c.usage.wall_time;
    total.estimated = total.estimated || c.usage.estimated;
    return c.text;
  };

  std::string why;
  std::string text = ask(t);
  std::optional<JudgeReply> reply = parse_judge_reply(text, &why);
  if (!reply) {
    t.assistant(text);
    std::string repair = prompts.judge.has_section("repair")
                             ? prompts.judge.render("repair", {{"error", why}})
                             : prompts.repair.render("user", {{"error", why}});
    t.user(std::move(repair));
    reply = parse_judge_reply(ask(t), &why);
  }
  if (usage) *usage = total;

  Verdict v = base_verdict(run);
  v.method = VerifyMethod::kJudgeModel;
  if (!reply) {
    v.outcome = Outcome::kPendingReview;
    v.judge_rationale = "judge reply unusable after repair: " + why;
    return v;
  }
  v.judge_rationale = reply->rationale;
  if (reply->call == JudgeCall::kUnsure) {
    v.outcome = Outcome::kPendingReview;
    return v;
  }
  const Outcome judged =
      reply->call == JudgeCall::kCorrect ? Outcome::kCorrect : Outcome::kIncorrect;
  if (problem.ground_truth_answer && verify_exact(run, problem).outcome != judged) {
    v.outcome = Outcome::kPendingReview;
    return v;
  }
  v.outcome = judged;
  return v;
}

Verdict verify_run(const RunRecord& run, const Problem& problem, Backend* judge,
                   const PromptSet& prompts) {
  if (run.status == RunStatus::kAborted) {
    Verdict v = base_verdict(run);
    v.outcome = Outcome::kIncorrect;
    v.method = VerifyMethod::kExactMatch;
    return v;
  }
  if (judge != nullptr) {
    try {
      return verify_with_judge(run, problem, *judge, prompts);
    } catch (const BackendError& e) {
      Verdict v = base_verdict(run);
      v.outcome = Outcome::kPendingReview;
      v.method = VerifyMethod::kJudgeModel;
      v.judge_rationale = std::string("judge call failed: ") + e.what();
      return v;
    }
  }
  if (problem.ground_truth_answer) return verify_exact(run, problem);
  Verdict v = base_verdict(run);
  v.outcome = Outcome::kPendingReview;
  v.method = VerifyMethod::kExactMatch;
  return v;
}

std::vector<Verdict> apply_human_override(const std::vector<Override>& overrides,
                                          std::vector<Verdict> verdicts) {
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < verdicts.size(); ++i) index.emplace(verdicts[i].run_id, i);
  std::set<std::string_view> seen;
  for (const Override& o : overrides) {
    if (!seen.insert(o.run_id).second) {
      throw VerifyError("run " + o.run_id + " is overridden more than once");
    }
    if (o.outcome == Outcome::kPendingReview) {
      throw VerifyError("override for run " + o.run_id + " must be correct or incorrect");
    }
    auto it = index.find(o.run_id);
    if (it == index.end()) throw VerifyError("override names unknown run " + o.run_id);
    Verdict& v = verdicts[it->second];
    if (v.outcome != Outcome::kPendingReview) {
      throw VerifyError("run " + o.run_id + " is already " + std::string(to_string(v.outcome)) +
                        "; only pending_review verdicts may be overridden");
    }
    v.outcome = o.outcome;
    v.method = VerifyMethod::kHumanOverride;
  }
  return verdicts;
}

std::vector<Verdict> apply_human_override(const std::filesystem::path& override_file,
                                          std::vector<Verdict> verdicts) {
  return apply_human_override(load_overrides(override_file), std::move(verdicts));
}

std::vector<Override> load_overrides(const std::filesystem::path& path) {
  std::vector<Override> out;
  jsonl::for_each_object(path, [&](const json& obj, std::size_t line) {
    jsonl::Reader r(obj, path.string(), line);
    Override o;
    o.run_id = r.string("run_id");
    const std::string outcome = r.string("outcome");
    auto parsed = enum_from_string<Outcome>(outcome);
    if (!parsed) r.fail("invalid value '" + outcome + "' for field 'outcome'");
    o.outcome = *parsed;
    out.push_back(std::move(o));
  });
  return out;
}

std::vector<Verdict> load_verdicts(const std::filesystem::path& path) {
  std::vector<Verdict> out;
  std::map<std::string, std::size_t> seen;
  jsonl::for_each_object(path, [&](const json& obj, std::size_t line) {
    jsonl::Reader r(obj, path.string(), line);
    Verdict v = codec::verdict_from(r);
    auto [it, fresh] = seen.emplace(v.run_id, line);
    if (!fresh) {
      throw DuplicateIdError(path.string(), line,
                             "duplicate run_id '" + v.run_id + "' (first seen on line " +
                                 std::to_string(it->second) + ")");
    }
    out.push_back(std::move(v));
  });
  return out;
}

void save_verdicts(const std::vector<Verdict>& verdicts, const std::filesystem::path& path) {
  std::vector<json> rows;
  rows.reserve(verdicts.size());
  for (const Verdict& v : verdicts) rows.push_back(codec::to_json(v));
  jsonl::write_lines(rows, path);
}

}  // namespace hintstep
