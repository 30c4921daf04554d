// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/solver.hpp"

#include <gtest/gtest.h>

#include "hintstep/error.hpp"
#include "hintstep/mock_backend.hpp"
#include "test_util.hpp"

namespace hintstep {
namespace {

using testing::make_hints;
using testing::make_problem;
using testing::synthesis_json;

MockEntry failing(const char* why) {
  MockEntry e;
  e.fail = why;
  return e;
}

Problem toy() { return make_problem("t1", "Compute 3 * 4.", "3 * 4 = 12.", "12"); }

std::vector<std::string> kinds(const RunRecord& r) {
  std::vector<std::string> out;
  for (const auto& u : r.per_call_usage) out.push_back(u.kind);
  return out;
}

TEST(Hinted, CallOrderAndStateThreading) {
  MockBackend m({reply("W1", 10, 3, 0.5), reply("W2", 11, 4, 0.25), reply("W3", 12, 5, 0.25),
                 reply(synthesis_json("\\boxed{12}", "multiplied"), 20, 6, 1.0)});
  SolverOptions opt;
  opt.seed = 17;
  SolveTrace trace;
  HintSequence hints = make_hints("t1", {"h-one", "h-two", "h-three"});
  hints.usage.push_back({"hint", 5, 40, 0.1, false, 0});
  RunRecord r = solve_hinted(toy(), hints, m, PromptSet::defaults(), opt, &trace);

  EXPECT_EQ(r.status, RunStatus::kCompleted);
  EXPECT_EQ(r.call_count(), 4u);
  EXPECT_EQ(kinds(r), (std::vector<std::string>{"refine", "refine", "refine", "synthesize"}));
  EXPECT_EQ(trace.states, (std::vector<std::string>{"W1", "W2", "W3"}));
  EXPECT_EQ(r.hints_used, 3);
  EXPECT_EQ(r.final_answer_raw, "\\boxed{12}");
  EXPECT_EQ(r.final_answer_normalized, "12");
  EXPECT_EQ(r.reasoning_summary, "multiplied");
  EXPECT_EQ(r.total_prompt_tokens, 53);
  EXPECT_EQ(r.total_completion_tokens, 18);
  EXPECT_DOUBLE_EQ(r.wall_time, 2.0);
  EXPECT_EQ(r.hint_tokens, 40);
  EXPECT_EQ(r.mode, SolveMode::kHinted);
  EXPECT_EQ(r.hint_source, HintSource::kLlm);
  EXPECT_EQ(r.run_id, make_run_id(SolveMode::kHinted, HintSource::kLlm, "t1", 0, 17));

  auto log = m.call_log();
  const auto& m1 = log[0].transcript.messages();
  ASSERT_EQ(m1.size(), 3u);
  EXPECT_NE(m1[1].content.find("Compute 3 * 4."), std::string::npos);
  EXPECT_NE(m1[2].content.find("h-one"), std::string::npos);
  const auto& m2 = log[1].transcript.messages();
  ASSERT_EQ(m2.size(), 3u);
  EXPECT_NE(m2[1].content.find("W1"), std::string::npos);
  EXPECT_NE(m2[2].content.find("h-two"), std::string::npos);
  EXPECT_EQ(log[1].transcript.joined().find("Compute 3 * 4."), std::string::npos);
  EXPECT_NE(log[2].transcript.joined().find("W2"), std::string::npos);
  EXPECT_NE(log[3].transcript.joined().find("W3"), std::string::npos);

  EXPECT_EQ(log[0].decoding.temperature, 0.0);
  EXPECT_EQ(log[0].decoding.seed, 17);
  EXPECT_EQ(log[3].decoding.response_format, ResponseFormat::kConstrainedJson);
  EXPECT_DOUBLE_EQ(log[3].decoding.temperature, 0.7);
  EXPECT_EQ(log[3].decoding.seed, 17);
}

TEST(Hinted, ProblemEveryStepOption) {
  MockBackend m({reply("W1", 1, 1), reply("W2", 1, 1), reply(synthesis_json("12"), 1, 1)});
  SolverOptions opt;
  opt.include_problem_every_step = true;
  solve_hinted(toy(), make_hints("t1", {"a", "b"}), m, PromptSet::defaults(), opt);
  const auto log = m.call_log();
  const auto& m2 = log[1].transcript.messages();
  ASSERT_EQ(m2.size(), 4u);
  EXPECT_NE(m2[1].content.find("Compute 3 * 4."), std::string::npos);
  EXPECT_NE(m2[2].content.find("W1"), std::string::npos);
}

TEST(Hinted, EmptyHintsFallBackToNoHint) {
  MockBackend m({reply(synthesis_json("12"), 1, 1)});
  SolverOptions opt;
  opt.hint_source = HintSource::kFtSlm;
  RunRecord r = solve_hinted(toy(), make_hints("t1", {}), m, PromptSet::defaults(), opt);
  EXPECT_EQ(r.call_count(), 1u);
  EXPECT_EQ(r.mode, SolveMode::kNoHint);
  EXPECT_EQ(r.hint_source, HintSource::kFtSlm);
  EXPECT_EQ(r.run_id.rfind("hinted", 0), 0u);
  EXPECT_EQ(r.hints_used, 0);
}

TEST(Hinted, ForeignHintSequenceRejected) {
  MockBackend m({reply("x", 1, 1)});
  EXPECT_THROW(solve_hinted(toy(), make_hints("other", {"a"}), m, PromptSet::defaults(), {}),
               Error);
}

TEST(Hinted, BackendFailureAborts) {
  MockBackend m({reply("W1", 1, 1), failing("gone")});
  RunRecord r = solve_hinted(toy(), make_hints("t1", {"a", "b"}), m, PromptSet::defaults(), {});
  EXPECT_EQ(r.status, RunStatus::kAborted);
  EXPECT_NE(r.error.find("gone"), std::string::npos);
  EXPECT_EQ(r.call_count(), 1u);
  EXPECT_EQ(r.hints_used, 1);
  EXPECT_TRUE(r.final_answer_raw.empty());
}

TEST(Hinted, MalformedSynthesisRepairedOnce) {
  MockBackend m({reply("W1", 1, 1), reply("I think it is 12", 1, 1),
                 reply(synthesis_json("12"), 1, 1)});
  RunRecord r = solve_hinted(toy(), make_hints("t1", {"a"}), m, PromptSet::defaults(), {});
  EXPECT_EQ(r.status, RunStatus::kCompleted);
  EXPECT_EQ(kinds(r), (std::vector<std::string>{"refine", "synthesize", "repair"}));
  const auto repair = m.call_log()[2].transcript.messages();
  EXPECT_EQ(repair[repair.size() - 2].role, Role::kAssistant);
  EXPECT_EQ(r.final_answer_normalized, "12");
}

TEST(Hinted, MalformedAfterRepairAborts) {
  MockBackend m({reply("W1", 1, 1), reply("nope", 1, 1), reply("{\"answer\": 12}", 1, 1)});
  RunRecord r = solve_hinted(toy(), make_hints("t1", {"a"}), m, PromptSet::defaults(), {});
  EXPECT_EQ(r.status, RunStatus::kAborted);
  EXPECT_NE(r.error.find("final_answer"), std::string::npos);
  EXPECT_EQ(r.call_count(), 3u);
}

TEST(NoHint, OneCall) {
  MockBackend m({reply(synthesis_json("12"), 7, 2)});
  SolverOptions opt;
  opt.seed = 3;
  opt.repeat = 2;
  RunRecord r = solve_no_hint(toy(), m, PromptSet::defaults(), opt);
  EXPECT_EQ(r.call_count(), 1u);
  EXPECT_EQ(r.mode, SolveMode::kNoHint);
  EXPECT_FALSE(r.hint_source.has_value());
  EXPECT_EQ(r.repeat, 2);
  EXPECT_EQ(r.seed, 3);
  EXPECT_EQ(m.call_log()[0].decoding.seed, 3);
  EXPECT_EQ(m.call_log()[0].transcript.messages().size(), 2u);
}

TEST(NoHint, PresetSeedIsKept) {
  MockBackend m({reply(synthesis_json("12"), 7, 2)});
  SolverOptions opt;
  opt.seed = 3;
  opt.synthesis.seed = 99;
  solve_no_hint(toy(), m, PromptSet::defaults(), opt);
  EXPECT_EQ(m.call_log()[0].decoding.seed, 99);
}

TEST(SelfConsistency, MajorityWithSeeds) {
  MockBackend m({reply(synthesis_json("\\boxed{12}", "a"), 1, 1),
                 reply(synthesis_json("12.0", "b"), 1, 1), reply(synthesis_json("7", "c"), 1, 1)});
  SolverOptions opt;
  opt.seed = 100;
  RunRecord r = solve_self_consistency(toy(), m, PromptSet::defaults(), 3, opt);
  EXPECT_EQ(r.sample_answers, (std::vector<std::string>{"12", "12", "7"}));
  EXPECT_EQ(r.final_answer_normalized, "12");
  EXPECT_EQ(r.final_answer_raw, "\\boxed{12}");
  EXPECT_EQ(r.reasoning_summary, "a");
  EXPECT_EQ(r.samples, 3);
  EXPECT_EQ(r.k_effective, 3);
  EXPECT_EQ(r.call_count(), 3u);
  auto log = m.call_log();
  for (int i = 0; i < 3; ++i) EXPECT_EQ(log[static_cast<std::size_t>(i)].decoding.seed, 100 + i);
}

TEST(SelfConsistency, TieGoesToEarliest) {
  MockBackend m({reply(synthesis_json("7"), 1, 1), reply(synthesis_json("12"), 1, 1)});
  RunRecord r = solve_self_consistency(toy(), m, PromptSet::defaults(), 2, {});
  EXPECT_EQ(r.final_answer_normalized, "7");
}

TEST(SelfConsistency, FailedSamplesSkipped) {
  MockBackend m({reply(synthesis_json("5"), 1, 1), failing("x"), reply("garbage", 1, 1),
                 reply(synthesis_json("5"), 1, 1)});
  RunRecord r = solve_self_consistency(toy(), m, PromptSet::defaults(), 4, {});
  EXPECT_EQ(r.status, RunStatus::kCompleted);
  EXPECT_EQ(r.k_effective, 2);
  EXPECT_EQ(r.samples, 4);
  EXPECT_EQ(r.call_count(), 3u);
}

TEST(SelfConsistency, AllFailedAborts) {
  MockBackend m({failing("a"), failing("b")});
  RunRecord r = solve_self_consistency(toy(), m, PromptSet::defaults(), 2, {});
  EXPECT_EQ(r.status, RunStatus::kAborted);
  EXPECT_EQ(r.k_effective, 0);
}

TEST(SelfConsistency, RejectsNonPositiveK) {
  MockBackend m({reply("x", 1, 1)});
  EXPECT_THROW(solve_self_consistency(toy(), m, PromptSet::defaults(), 0, {}), Error);
}

TEST(MajorityVote, Examples) {
  EXPECT_EQ(majority_vote({"12", "12", "7"}), "12");
  EXPECT_EQ(majority_vote({"7", "12"}), "7");
  EXPECT_EQ(majority_vote({"a", "b", "b", "a"}), "a");
  EXPECT_EQ(majority_vote({"a", "b", "c", "c"}), "c");
  EXPECT_THROW(majority_vote({}), Error);
}

TEST(ParseSynthesis, AcceptedShapes) {
  EXPECT_EQ(parse_synthesis(R"({"final_answer":"3","reasoning_summary":"s"})")->final_answer, "3");
  EXPECT_EQ(parse_synthesis("```json\n{\"final_answer\": \"4\"}\n```")->final_answer, "4");
  EXPECT_EQ(parse_synthesis("Sure! {\"final_answer\": \"5\"} Hope that helps.")->final_answer, "5");
  EXPECT_EQ(parse_synthesis(R"({"final_answer": 12})")->final_answer, "12");
  EXPECT_EQ(parse_synthesis(R"({"final_answer": "x", "reasoning_summary": 3})")->reasoning_summary,
            "");
}

TEST(ParseSynthesis, Rejections) {
  std::string why;
  EXPECT_FALSE(parse_synthesis("the answer is 12", &why));
  EXPECT_EQ(why, "reply is not valid JSON");
  EXPECT_FALSE(parse_synthesis(R"({"answer": 1})", &why));
  EXPECT_NE(why.find("final_answer"), std::string::npos);
  EXPECT_FALSE(parse_synthesis(R"({"final_answer": [1]})", &why));
  EXPECT_FALSE(parse_synthesis("[1, 2]", &why));
}

TEST(RefinementTranscript, Shape) {
  PromptSet ps = PromptSet::defaults();
  EXPECT_EQ(refinement_transcript(ps, "P", "", "h", 1, false).messages().size(), 3u);
  auto t2 = refinement_transcript(ps, "P", "", "h", 2, false);
  ASSERT_EQ(t2.messages().size(), 3u);
  EXPECT_NE(t2.messages()[1].content.find(kEmptyReasoningState), std::string::npos);
  EXPECT_EQ(refinement_transcript(ps, "P", "W", "h", 5, true).messages().size(), 4u);
}

TEST(Online, HintsFollowSolverState) {
  MockBackend hinter({reply("Multiply.", 5, 2), reply("Check it.", 5, 3), reply("[DONE]", 5, 1)},
                     MockMode::kOrdered, "slm");
  MockBackend solver({reply("W1 text", 1, 1), reply("W2 text", 1, 1),
                      reply(synthesis_json("12"), 1, 1)});
  SolverOptions opt;
  opt.hint_source = HintSource::kFtSlm;
  SolveTrace trace;
  RunRecord r = solve_hinted_online(toy(), solver, hinter, PromptSet::defaults(), 8, opt, &trace);
  EXPECT_EQ(r.status, RunStatus::kCompleted);
  EXPECT_EQ(r.hints_used, 2);
  EXPECT_EQ(r.call_count(), 3u);
  EXPECT_EQ(r.hint_usage.size(), 3u);
  EXPECT_EQ(r.hint_tokens, 6);
  EXPECT_EQ(r.hint_source, HintSource::kFtSlm);
  EXPECT_NE(hinter.call_log()[1].transcript.joined().find("W1 text"), std::string::npos);
  EXPECT_NE(hinter.call_log()[2].transcript.joined().find("W2 text"), std::string::npos);
  EXPECT_NE(solver.call_log()[1].transcript.joined().find("Check it."), std::string::npos);
  std::size_t hint_calls = 0;
  for (const auto& c : trace.calls) hint_calls += c.kind == "hint";
  EXPECT_EQ(hint_calls, 3u);
}

TEST(Online, LeakingHintStopsTheLoop) {
  MockBackend hinter({reply("Multiply.", 1, 1), reply("It is 12.", 1, 1), reply("So 12.", 1, 1)});
  MockBackend solver({reply("W1", 1, 1), reply(synthesis_json("12"), 1, 1)});
  RunRecord r = solve_hinted_online(toy(), solver, hinter, PromptSet::defaults(), 8, {});
  EXPECT_EQ(r.hints_used, 1);
  EXPECT_EQ(r.dropped_hints, 1);
  EXPECT_EQ(r.call_count(), 2u);
}

TEST(Online, ImmediateStopFallsBackToNoHint) {
  MockBackend hinter({reply("[DONE]", 1, 1)});
  MockBackend solver({reply(synthesis_json("12"), 1, 1)});
  SolverOptions opt;
  opt.hint_source = HintSource::kNftSlm;
  RunRecord r = solve_hinted_online(toy(), solver, hinter, PromptSet::defaults(), 8, opt);
  EXPECT_EQ(r.mode, SolveMode::kNoHint);
  EXPECT_EQ(r.hint_source, HintSource::kNftSlm);
  EXPECT_EQ(r.call_count(), 1u);
}

TEST(Online, MaxHintsBoundsLoop) {
  MockBackend hinter({reply("a", 1, 1)}, MockMode::kRules);
  MockEntry synth = reply(synthesis_json("12"), 1, 1);
  synth.contains = {"finishing"};
  MockBackend solver({synth, reply("W", 1, 1)}, MockMode::kRules);
  RunRecord r = solve_hinted_online(toy(), solver, hinter, PromptSet::defaults(), 3, {});
  EXPECT_EQ(r.hints_used, 3);
  EXPECT_EQ(r.call_count(), 4u);
  EXPECT_EQ(r.final_answer_normalized, "12");
}

}  // namespace
}  // namespace hintstep
