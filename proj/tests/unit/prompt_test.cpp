// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/prompt.hpp"

#include <gtest/gtest.h>

#include "hintstep/error.hpp"
#include "test_util.hpp"

namespace hintstep {
namespace {

TEST(PromptTemplate, ParsesSectionsAndComments) {
  PromptTemplate t = PromptTemplate::parse(
      "# comment\n# another\n[system]\nBe brief.\n\n[user]\n\nProblem: {statement}\n\n", "t");
  EXPECT_EQ(t.section_names(), (std::vector<std::string>{"system", "user"}));
  EXPECT_EQ(t.section("system"), "Be brief.");
  EXPECT_EQ(t.section("user"), "Problem: {statement}");
}

TEST(PromptTemplate, RejectsMalformed) {
  EXPECT_THROW(PromptTemplate::parse("", "t"), TemplateError);
  EXPECT_THROW(PromptTemplate::parse("stray\n[user]\nx", "t"), TemplateError);
  EXPECT_THROW(PromptTemplate::parse("[user]\na\n[user]\nb", "t"), TemplateError);
  EXPECT_THROW(PromptTemplate::parse("[user]\na", "t").section("system"), TemplateError);
}

TEST(PromptTemplate, RenderSubstitutesOnlyKnownNames) {
  PromptTemplate t = PromptTemplate::parse("[user]\n{statement} has \\frac{1}{2} and {\"k\": 1}", "t");
  EXPECT_EQ(t.render("user", {{"statement", "S"}}), "S has \\frac{1}{2} and {\"k\": 1}");
}

TEST(PromptTemplate, RenderIsSinglePass) {
  PromptTemplate t = PromptTemplate::parse("[user]\n{a}|{b}", "t");
  EXPECT_EQ(t.render("user", {{"a", "{b}"}, {"b", "B"}}), "{b}|B");
}

TEST(PromptTemplate, RequireCountsPlaceholders) {
  PromptTemplate t = PromptTemplate::parse("[user]\n{x} {x} {y}", "t");
  EXPECT_THROW(t.require("user", {"x"}), TemplateError);
  EXPECT_NO_THROW(t.require("user", {"y"}, {"z"}));
  EXPECT_THROW(t.require("user", {"y"}, {"x"}), TemplateError);
  EXPECT_THROW(t.require("user", {"missing"}), TemplateError);
  EXPECT_EQ(count_placeholder("{x}{x}{xx}", "x"), 2u);
}

TEST(PromptTemplate, LoadFromFile) {
  testing::TempDir dir;
  testing::write_file(dir / "p.txt", "[system]\ns\n[user]\nu {statement}\n");
  PromptTemplate t = PromptTemplate::load(dir / "p.txt");
  EXPECT_EQ(t.section("user"), "u {statement}");
  EXPECT_THROW(PromptTemplate::load(dir / "absent.txt"), IoError);
}

TEST(HintPromptTemplate, OracleRequiresStatementAndSolution) {
  auto ok = PromptTemplate::parse("[system]\ns\n[user]\n{statement} {solution_or_answer}", "o");
  EXPECT_NO_THROW(HintPromptTemplate(ok, HintTemplateMode::kOracle));
  auto missing = PromptTemplate::parse("[system]\ns\n[user]\n{statement}", "o");
  EXPECT_THROW(HintPromptTemplate(missing, HintTemplateMode::kOracle), TemplateError);
  auto twice = PromptTemplate::parse(
      "[system]\ns\n[user]\n{statement} {solution_or_answer} {prior_hints} {prior_hints}", "o");
  EXPECT_THROW(HintPromptTemplate(twice, HintTemplateMode::kOracle), TemplateError);
}

TEST(HintPromptTemplate, StepRequiresState) {
  auto bad = PromptTemplate::parse("[system]\ns\n[user]\n{statement}", "s");
  EXPECT_THROW(HintPromptTemplate(bad, HintTemplateMode::kStep), TemplateError);
  auto ok = PromptTemplate::parse("[system]\ns\n[user]\n{statement}\n{reasoning_state}", "s");
  HintPromptTemplate h(ok, HintTemplateMode::kStep);
  EXPECT_EQ(h.user_text({{"statement", "P"}, {"reasoning_state", "W"}}), "P\nW");
}

TEST(HintPromptTemplate, RetryText) {
  auto t = PromptTemplate::parse(
      "[system]\ns\n[user]\n{statement} {solution_or_answer}\n[retry]\nleaked {evidence}", "o");
  EXPECT_EQ(HintPromptTemplate(t, HintTemplateMode::kOracle).retry_text("42"), "leaked 42");
}

TEST(PromptSet, DefaultsValidate) {
  PromptSet set = PromptSet::defaults();
  EXPECT_NO_THROW(set.validate());
  EXPECT_TRUE(set.solver_refine.has_section("problem"));
  EXPECT_TRUE(set.solver_refine.has_section("state"));
  EXPECT_TRUE(set.solver_refine.has_section("hint"));
  EXPECT_TRUE(set.judge.has_section("repair"));
}

TEST(PromptSet, ShippedFilesMatchEmbeddedDefaults) {
  for (const char* key : {"oracle_solution", "oracle_answer", "step_hint", "solver_refine",
                          "solver_synthesize", "solver_direct", "repair", "judge"}) {
    std::string path = std::string(HINTSTEP_TEMPLATE_DIR) + "/" + key + ".txt";
    EXPECT_EQ(PromptTemplate::load(path), PromptTemplate::parse(default_template_text(key), key))
        << key;
  }
}

TEST(PromptSet, SetReplacesAndValidateCatchesBadTemplate) {
  PromptSet set = PromptSet::defaults();
  set.set("solver_direct", PromptTemplate::parse("[system]\ns\n[user]\nno placeholder", "d"));
  EXPECT_THROW(set.validate(), TemplateError);
  EXPECT_THROW(set.set("nonsense", PromptTemplate::parse("[user]\nx", "x")), TemplateError);
  EXPECT_THROW(default_template_text("nonsense"), TemplateError);
}

TEST(StopMarker, Spellings) {
  EXPECT_TRUE(is_stop_marker("[DONE]"));
  EXPECT_TRUE(is_stop_marker("  done \n"));
  EXPECT_TRUE(is_stop_marker("[done]"));
  EXPECT_FALSE(is_stop_marker("Done with step 1, now factor."));
  EXPECT_FALSE(is_stop_marker(""));
}

}  // namespace
}  // namespace hintstep
