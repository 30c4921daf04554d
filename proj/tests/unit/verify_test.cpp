// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/verify.hpp"

#include <gtest/gtest.h>

#include "hintstep/error.hpp"
#include "hintstep/mock_backend.hpp"
#include "hintstep/normalize.hpp"
#include "test_util.hpp"

namespace hintstep {
namespace {

using testing::make_problem;

RunRecord answered(const std::string& run_id, const std::string& problem_id,
                   const std::string& answer) {
  RunRecord r;
  r.run_id = run_id;
  r.problem_id = problem_id;
  r.final_answer_raw = answer;
  r.final_answer_normalized = normalize_answer(answer);
  r.reasoning_summary = "summary";
  return r;
}

std::string judge_json(const char* verdict, const char* rationale = "because") {
  return std::string(R"({"verdict": ")") + verdict + R"(", "rationale": ")" + rationale + "\"}";
}

const Problem kWithAnswer = make_problem("p", "Compute 1/2 + 0.", std::nullopt, "\\frac{1}{2}");
const Problem kProofOnly = make_problem("q", "Prove it.", "By induction.", std::nullopt);

TEST(Exact, NormalizedComparison) {
  Verdict v = verify_exact(answered("r1", "p", "\\dfrac{1}{2}"), kWithAnswer);
  EXPECT_EQ(v.outcome, Outcome::kCorrect);
  EXPECT_EQ(v.method, VerifyMethod::kExactMatch);
  EXPECT_EQ(v.run_id, "r1");
  EXPECT_EQ(v.problem_id, "p");
  EXPECT_EQ(verify_exact(answered("r2", "p", "0.5"), kWithAnswer).outcome, Outcome::kIncorrect);
}

TEST(Exact, NeedsGroundTruth) {
  EXPECT_THROW(verify_exact(answered("r", "q", "x"), kProofOnly), VerifyError);
}

TEST(Exact, AbortedIsIncorrect) {
  RunRecord r = answered("r", "p", "1/2");
  r.status = RunStatus::kAborted;
  EXPECT_EQ(verify_exact(r, kWithAnswer).outcome, Outcome::kIncorrect);
}

TEST(JudgeReply, Parsing) {
  EXPECT_EQ(parse_judge_reply(judge_json("correct"))->call, JudgeCall::kCorrect);
  EXPECT_EQ(parse_judge_reply("```json\n" + judge_json("Incorrect") + "\n```")->call,
            JudgeCall::kIncorrect);
  EXPECT_EQ(parse_judge_reply("Verdict: " + judge_json("unsure", "hmm"))->rationale, "hmm");
  std::string why;
  EXPECT_FALSE(parse_judge_reply("correct", &why));
  EXPECT_FALSE(parse_judge_reply(R"({"verdict": "maybe"})", &why));
  EXPECT_FALSE(parse_judge_reply(R"({"rationale": "x"})", &why));
}

TEST(Judge, AgreesWithExactMatch) {
  MockBackend judge({reply(judge_json("correct", "equal fractions"), 30, 8)});
  CallUsage usage;
  Verdict v = verify_with_judge(answered("r", "p", "1/2"), kWithAnswer, judge,
                                PromptSet::defaults(), &usage);
  EXPECT_EQ(v.outcome, Outcome::kCorrect);
  EXPECT_EQ(v.method, VerifyMethod::kJudgeModel);
  EXPECT_EQ(v.judge_rationale, "equal fractions");
  EXPECT_EQ(usage.kind, "judge");
  EXPECT_EQ(usage.total_tokens(), 38);
  const MockCall call = judge.call_log()[0];
  EXPECT_EQ(call.decoding.temperature, 0.0);
  EXPECT_EQ(call.decoding.response_format, ResponseFormat::kConstrainedJson);
  EXPECT_NE(call.transcript.joined().find("\\frac{1}{2}"), std::string::npos);
}

TEST(Judge, DisagreementWithExactMatchIsPending) {
  MockBackend judge({reply(judge_json("correct"), 1, 1)});
  Verdict v = verify_with_judge(answered("r", "p", "0.5"), kWithAnswer, judge,
                                PromptSet::defaults());
  EXPECT_EQ(v.outcome, Outcome::kPendingReview);
  EXPECT_EQ(v.method, VerifyMethod::kJudgeModel);
}

TEST(Judge, UnsureIsPending) {
  MockBackend judge({reply(judge_json("unsure"), 1, 1)});
  EXPECT_EQ(verify_with_judge(answered("r", "q", "x"), kProofOnly, judge, PromptSet::defaults())
                .outcome,
            Outcome::kPendingReview);
}

TEST(Judge, ProofProblemsUseTheSolution) {
  MockBackend judge({reply(judge_json("incorrect"), 1, 1)});
  Verdict v = verify_with_judge(answered("r", "q", "x"), kProofOnly, judge, PromptSet::defaults());
  EXPECT_EQ(v.outcome, Outcome::kIncorrect);
  EXPECT_NE(judge.call_log()[0].transcript.joined().find("By induction."), std::string::npos);
}

TEST(Judge, RepairThenPendingWhenStillUnusable) {
  MockBackend fixed({reply("yes it is right", 1, 1), reply(judge_json("correct"), 1, 1)});
  EXPECT_EQ(verify_with_judge(answered("r", "p", "1/2"), kWithAnswer, fixed, PromptSet::defaults())
                .outcome,
            Outcome::kCorrect);
  EXPECT_EQ(fixed.calls_made(), 2u);
  EXPECT_NE(fixed.call_log()[1].transcript.joined().find("could not be parsed"), std::string::npos);

  MockBackend broken({reply("no", 1, 1), reply("still no", 1, 1)});
  Verdict v = verify_with_judge(answered("r", "p", "1/2"), kWithAnswer, broken,
                                PromptSet::defaults());
  EXPECT_EQ(v.outcome, Outcome::kPendingReview);
  ASSERT_TRUE(v.judge_rationale);
}

TEST(Judge, NothingToJudgeAgainst) {
  MockBackend judge({reply(judge_json("correct"), 1, 1)});
  Problem bare = make_problem("b", "?", std::nullopt, std::nullopt);
  EXPECT_THROW(verify_with_judge(answered("r", "b", "x"), bare, judge, PromptSet::defaults()),
               VerifyError);
}

TEST(Pipeline, Routing) {
  PromptSet ps = PromptSet::defaults();
  RunRecord aborted = answered("a", "p", "");
  aborted.status = RunStatus::kAborted;
  MockBackend unused({reply("x", 1, 1)});
  Verdict va = verify_run(aborted, kWithAnswer, &unused, ps);
  EXPECT_EQ(va.outcome, Outcome::kIncorrect);
  EXPECT_EQ(va.method, VerifyMethod::kExactMatch);
  EXPECT_EQ(unused.calls_made(), 0u);

  EXPECT_EQ(verify_run(answered("r", "p", "1/2"), kWithAnswer, nullptr, ps).method,
            VerifyMethod::kExactMatch);

  Verdict pending = verify_run(answered("r", "q", "x"), kProofOnly, nullptr, ps);
  EXPECT_EQ(pending.outcome, Outcome::kPendingReview);
  EXPECT_EQ(pending.method, VerifyMethod::kExactMatch);

  MockEntry down;
  down.fail = "offline";
  MockBackend failing({down});
  Verdict vf = verify_run(answered("r", "p", "1/2"), kWithAnswer, &failing, ps);
  EXPECT_EQ(vf.outcome, Outcome::kPendingReview);
  EXPECT_NE(vf.judge_rationale->find("offline"), std::string::npos);
}

std::vector<Verdict> sample_verdicts() {
  return {{"r1", "p", Outcome::kPendingReview, VerifyMethod::kJudgeModel, "unsure"},
          {"r2", "p", Outcome::kCorrect, VerifyMethod::kExactMatch, std::nullopt},
          {"r3", "q", Outcome::kPendingReview, VerifyMethod::kExactMatch, std::nullopt}};
}

TEST(Override, ReplacesPendingOnly) {
  auto out = apply_human_override({{"r1", Outcome::kIncorrect}, {"r3", Outcome::kCorrect}},
                                  sample_verdicts());
  EXPECT_EQ(out[0].outcome, Outcome::kIncorrect);
  EXPECT_EQ(out[0].method, VerifyMethod::kHumanOverride);
  EXPECT_EQ(out[0].judge_rationale, "unsure");
  EXPECT_EQ(out[1], sample_verdicts()[1]);
  EXPECT_EQ(out[2].outcome, Outcome::kCorrect);
}

TEST(Override, Errors) {
  EXPECT_THROW(apply_human_override({{"r2", Outcome::kIncorrect}}, sample_verdicts()), VerifyError);
  EXPECT_THROW(apply_human_override({{"nope", Outcome::kCorrect}}, sample_verdicts()), VerifyError);
  EXPECT_THROW(apply_human_override({{"r1", Outcome::kPendingReview}}, sample_verdicts()),
               VerifyError);
  EXPECT_THROW(apply_human_override({{"r1", Outcome::kCorrect}, {"r1", Outcome::kCorrect}},
                                    sample_verdicts()),
               VerifyError);
}

TEST(Override, FromFile) {
  testing::TempDir dir;
  testing::write_file(dir / "o.jsonl", "{\"run_id\":\"r3\",\"outcome\":\"incorrect\"}\n");
  auto out = apply_human_override(dir / "o.jsonl", sample_verdicts());
  EXPECT_EQ(out[2].outcome, Outcome::kIncorrect);
  testing::write_file(dir / "bad.jsonl", "{\"run_id\":\"r3\",\"outcome\":\"maybe\"}\n");
  EXPECT_THROW(load_overrides(dir / "bad.jsonl"), ValidationError);
}

TEST(Verdicts, RoundTripAndDuplicates) {
  testing::TempDir dir;
  save_verdicts(sample_verdicts(), dir / "v.jsonl");
  EXPECT_EQ(load_verdicts(dir / "v.jsonl"), sample_verdicts());
  auto dup = sample_verdicts();
  dup.push_back(dup.front());
  save_verdicts(dup, dir / "d.jsonl");
  EXPECT_THROW(load_verdicts(dir / "d.jsonl"), DuplicateIdError);
}

}  // namespace
}  // namespace hintstep
