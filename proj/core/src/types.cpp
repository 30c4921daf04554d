// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/types.hpp"

#include <array>
#include <numeric>
#include <type_traits>
#include <utility>

#include "hintstep/error.hpp"

namespace hintstep {
namespace {

template <class E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

constexpr NameTable<HintProvenance, 4> kProvenanceNames{{
    {HintProvenance::kOracleLlm, "oracle_llm"},
    {HintProvenance::kDistilledSlm, "distilled_slm"},
    {HintProvenance::kNftSlm, "nft_slm"},
    {HintProvenance::kHumanEdited, "human_edited"},
}};
constexpr NameTable<SolveMode, 3> kModeNames{{
    {SolveMode::kNoHint, "no_hint"},
    {SolveMode::kHinted, "hinted"},
    {SolveMode::kSelfConsistency, "self_consistency"},
}};
constexpr NameTable<HintSource, 3> kSourceNames{{
    {HintSource::kLlm, "llm"},
    {HintSource::kFtSlm, "ft_slm"},
    {HintSource::kNftSlm, "nft_slm"},
}};
constexpr NameTable<Outcome, 3> kOutcomeNames{{
    {Outcome::kCorrect, "correct"},
    {Outcome::kIncorrect, "incorrect"},
    {Outcome::kPendingReview, "pending_review"},
}};
constexpr NameTable<VerifyMethod, 3> kMethodNames{{
    {VerifyMethod::kExactMatch, "exact_match"},
    {VerifyMethod::kJudgeModel, "judge_model"},
    {VerifyMethod::kHumanOverride, "human_override"},
}};
constexpr NameTable<RunStatus, 2> kStatusNames{{
    {RunStatus::kCompleted, "completed"},
    {RunStatus::kAborted, "aborted"},
}};

template <class E, std::size_t N>
std::string_view lookup(const NameTable<E, N>& table, E v) {
  for (const auto& [value, name] : table) {
    if (value == v) return name;
  }
  return "?";
}

template <class E, std::size_t N>
std::optional<E> reverse(const NameTable<E, N>& table, std::string_view s) {
  for (const auto& [value, name] : table) {
    if (name == s) return value;
  }
  return std::nullopt;
}

template <class E, std::size_t N>
std::string accepted(const NameTable<E, N>& table) {
  std::string out;
  for (const auto& [value, name] : table) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

template <class E>
const auto& table_for() {
  if constexpr (std::is_same_v<E, HintProvenance>) return kProvenanceNames;
  else if constexpr (std::is_same_v<E, SolveMode>) return kModeNames;
  else if constexpr (std::is_same_v<E, HintSource>) return kSourceNames;
  else if constexpr (std::is_same_v<E, Outcome>) return kOutcomeNames;
  else if constexpr (std::is_same_v<E, VerifyMethod>) return kMethodNames;
  else return kStatusNames;
}

}  // namespace

std::string_view to_string(HintProvenance v) { return lookup(kProvenanceNames, v); }
std::string_view to_string(SolveMode v) { return lookup(kModeNames, v); }
std::string_view to_string(HintSource v) { return lookup(kSourceNames, v); }
std::string_view to_string(Outcome v) { return lookup(kOutcomeNames, v); }
std::string_view to_string(VerifyMethod v) { return lookup(kMethodNames, v); }
std::string_view to_string(RunStatus v) { return lookup(kStatusNames, v); }

template <class E>
std::optional<E> enum_from_string(std::string_view s) {
  return reverse(table_for<E>(), s);
}

template <class E>
E parse_enum(std::string_view s, std::string_view field) {
  if (auto v = enum_from_string<E>(s)) return *v;
  throw Error("invalid value '" + std::string(s) + "' for " + std::string(field) +
              " (expected one of: " + accepted(table_for<E>()) + ")");
}

#define HINTSTEP_INSTANTIATE(E)                                          \
  template std::optional<E> enum_from_string<E>(std::string_view);       \
  template E parse_enum<E>(std::string_view, std::string_view);
HINTSTEP_INSTANTIATE(HintProvenance)
HINTSTEP_INSTANTIATE(SolveMode)
HINTSTEP_INSTANTIATE(HintSource)
HINTSTEP_INSTANTIATE(Outcome)
HINTSTEP_INSTANTIATE(VerifyMethod)
HINTSTEP_INSTANTIATE(RunStatus)
#undef HINTSTEP_INSTANTIATE

std::optional<SolveMode> parse_mode_flag(std::string_view s) {
  if (s == "sc") return SolveMode::kSelfConsistency;
  return enum_from_string<SolveMode>(s);
}

HintProvenance provenance_for(HintSource source) {
  switch (source) {
    case HintSource::kLlm: return HintProvenance::kOracleLlm;
    case HintSource::kFtSlm: return HintProvenance::kDistilledSlm;
    case HintSource::kNftSlm: return HintProvenance::kNftSlm;
  }
  return HintProvenance::kOracleLlm;
}

std::int64_t HintSequence::completion_tokens() const {
  return std::accumulate(usage.begin(), usage.end(), std::int64_t{0},
                         [](std::int64_t acc, const CallUsage& u) {
                           return acc + u.completion_tokens;
                         });
}

std::string make_run_id(SolveMode mode, std::optional<HintSource> source,
                        std::string_view problem_id, int repeat, std::int64_t seed) {
  std::string id(to_string(mode));
  if (source) {
    id += '-';
    id += to_string(*source);
  }
  id += '/';
  id += problem_id;
  id += "/r" + std::to_string(repeat) + "s" + std::to_string(seed);
  return id;
}

}  // namespace hintstep
