// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/hinter.hpp"

#include <algorithm>
#include <map>

#include "hintstep/error.hpp"
#include "hintstep/normalize.hpp"
#include "text_util.hpp"

namespace hintstep {
namespace {

using text::is_alnum;
using text::is_digit;
using text::is_space;

bool is_short_numeral(std::string_view s) {
  if (s.empty() || s.size() > 2) return false;
  std::size_t start = s.front() == '-' ? 1 : 0;
  if (start == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(start), s.end(), is_digit);
}

bool is_word_boundary(char c) {
  switch (c) {
    case '=': case '(': case ')': case '[': case ']': case ',': case ';': case ':':
    case '"': case '\'': case '.': case '!': case '?':
      return true;
    default:
      return is_space(c);
  }
}

// Would `c`, sitting next to the match edge `edge`, extend the token?
// `beyond` is the character on the far side of `c` (for decimal points).
bool continues_token(char c, char edge, std::optional<char> beyond) {
  if (is_alnum(c) && is_alnum(edge)) return true;
  if (c == '.' && is_digit(edge) && beyond && is_digit(*beyond)) return true;
  return false;
}

// First occurrence of needle in hay that is token-bounded, as a position.
std::optional<std::size_t> find_bounded(std::string_view hay, std::string_view needle) {
  if (needle.empty()) return std::nullopt;
  const bool short_numeral = is_short_numeral(needle);
  for (std::size_t pos = hay.find(needle); pos != std::string_view::npos;
       pos = hay.find(needle, pos + 1)) {
    const std::size_t end = pos + needle.size();
    bool ok = true;
    if (pos > 0) {
      std::optional<char> beyond = pos > 1 ? std::optional<char>(hay[pos - 2]) : std::nullopt;
      if (continues_token(hay[pos - 1], needle.front(), beyond)) ok = false;
      if (short_numeral && !is_word_boundary(hay[pos - 1])) ok = false;
    }
    if (end < hay.size()) {
      std::optional<char> beyond =
          end + 1 < hay.size() ? std::optional<char>(hay[end + 1]) : std::nullopt;
      if (continues_token(hay[end], needle.back(), beyond)) ok = false;
      if (short_numeral && !is_word_boundary(hay[end])) ok = false;
    }
    if (ok) return pos;
  }
  return std::nullopt;
}

std::string render_prior_hints(const std::vector<Hint>& hints, bool include) {
  if (!include) return "(not shown)";
  if (hints.empty()) return std::string(kNoPriorHints);
  std::string out;
  for (const Hint& h : hints) {
    if (!out.empty()) out += '\n';
    out += std::to_string(h.index) + ". " + h.text;
  }
  return out;
}

CallUsage tagged(CallUsage u, const char* kind) {
  u.kind = kind;
  return u;
}

}  // namespace

std::string_view to_string(LeakRule r) {
  switch (r) {
    case LeakRule::kExactAnswerMatch: return "exact_answer_match";
    case LeakRule::kNormalizedAnswerMatch: return "normalized_answer_match";
    case LeakRule::kNone: return "none";
  }
  return "none";
}

LeakageVerdict check_leakage(std::string_view hint_text, std::string_view ground_truth_answer) {
  LeakageVerdict v;
  const std::string answer = normalize_answer(ground_truth_answer);
  const std::string hint = normalize_answer(hint_text);
  auto pos = find_bounded(hint, answer);
  if (!pos) return v;
  v.leaked = true;
  std::string_view raw_answer = text::trim(ground_truth_answer);
  if (auto raw = find_bounded(hint_text, raw_answer)) {
    v.rule = LeakRule::kExactAnswerMatch;
    v.evidence = std::string(hint_text.substr(*raw, raw_answer.size()));
  } else {
    v.rule = LeakRule::kNormalizedAnswerMatch;
    v.evidence = hint.substr(*pos, answer.size());
  }
  return v;
}

HintSequence generate_oracle_hints(const Problem& problem, Backend& backend,
                                   const PromptSet& prompts, const OracleHintOptions& options) {
  if (!problem.eligible_for_hints()) {
    throw Error("problem " + problem.id +
                " has neither reference_solution nor ground_truth_answer; ineligible for hint "
                "generation");
  }
  if (options.max_hints < 1) throw Error("max_hints must be >= 1");

  const bool from_solution = problem.reference_solution.has_value();
  const HintPromptTemplate tmpl(from_solution ? prompts.oracle_solution : prompts.oracle_answer,
                                HintTemplateMode::kOracle);
  const std::string& conditioning =
      from_solution ? *problem.reference_solution : *problem.ground_truth_answer;
  const DecodingParams decoding = backend.default_decoding();

  HintSequence seq;
  seq.problem_id = problem.id;
  seq.generator_model = backend.model_name();
  seq.created_at = options.created_at;

  for (int step = 1; step <= options.max_hints; ++step) {
    ChatTranscript transcript;
    transcript.system(tmpl.system_text());
    transcript.user(tmpl.user_text({{"statement", problem.statement},
                                    {"solution_or_answer", conditioning},
                                    {"prior_hints", render_prior_hints(seq.hints,
                                                                       options.include_prior_hints)}}));
    Completion c = backend.complete(transcript, decoding);
    seq.usage.push_back(tagged(c.usage, "hint"));
    std::string hint_text(text::trim(c.text));
    if (hint_text.empty() || is_stop_marker(hint_text)) break;

    if (problem.ground_truth_answer) {
      LeakageVerdict leak = check_leakage(hint_text, *problem.ground_truth_answer);
      if (leak.leaked) {
        seq.events.push_back({step, "leak_retry", *leak.evidence});
        transcript.assistant(hint_text);
        transcript.user(tmpl.retry_text(*leak.evidence));
        Completion retry = backend.complete(transcript, decoding);
        seq.usage.push_back(tagged(retry.usage, "hint"));
        hint_text = std::string(text::trim(retry.text));
        if (hint_text.empty() || is_stop_marker(hint_text)) break;
        LeakageVerdict again = check_leakage(hint_text, *problem.ground_truth_answer);
        if (again.leaked) {
          seq.events.push_back({step, "dropped", *again.evidence});
          continue;
        }
      }
    }
    seq.hints.push_back({static_cast<int>(seq.hints.size()) + 1, std::move(hint_text),
                         HintProvenance::kOracleLlm});
  }
  if (seq.hints.empty()) {
    throw NoUsableHintsError("no usable hints for problem " + problem.id);
  }
  return seq;
}

ChatTranscript step_hint_transcript(const HintPromptTemplate& step_template,
                                    std::string_view statement, std::string_view reasoning_state) {
  ChatTranscript t;
  t.system(step_template.system_text());
  std::string state = reasoning_state.empty() ? std::string(kEmptyReasoningState)
                                              : std::string(reasoning_state);
  t.user(step_template.user_text(
      {{"statement", std::string(statement)}, {"reasoning_state", std::move(state)}}));
  return t;
}

StepHintResult generate_step_hint(const Problem& problem, const ReasoningState& state,
                                  Backend& backend, const HintPromptTemplate& step_template,
                                  HintProvenance provenance) {
  if (state.problem_id != problem.id) {
    throw Error("reasoning state for " + state.problem_id + " does not belong to problem " +
                problem.id);
  }
  StepHintResult out;
  const DecodingParams decoding = backend.default_decoding();
  ChatTranscript transcript = step_hint_transcript(step_template, problem.statement, state.text);
  Completion c = backend.complete(transcript, decoding);
  out.usage.push_back(tagged(c.usage, "hint"));
  std::string hint_text(text::trim(c.text));
  if (hint_text.empty() || is_stop_marker(hint_text)) return out;

  if (problem.ground_truth_answer) {
    out.leakage = check_leakage(hint_text, *problem.ground_truth_answer);
    if (out.leakage.leaked) {
      transcript.assistant(hint_text);
      transcript.user(step_template.retry_text(*out.leakage.evidence));
      Completion retry = backend.complete(transcript, decoding);
      out.usage.push_back(tagged(retry.usage, "hint"));
      std::string retry_text(text::trim(retry.text));
      if (retry_text.empty() || is_stop_marker(retry_text)) {
        out.leakage = {};
        return out;
      }
      hint_text = std::move(retry_text);
      out.leakage = check_leakage(hint_text, *problem.ground_truth_answer);
    }
  }
  out.hint = Hint{state.step + 1, std::move(hint_text), provenance};
  return out;
}

namespace {

std::vector<std::string> split_paragraphs(std::string_view solution) {
  std::vector<std::string> out;
  std::vector<std::string> current;
  auto flush = [&] {
    std::string joined;
    for (const auto& l : current) {
      if (!joined.empty()) joined += '\n';
      joined += l;
    }
    std::string_view trimmed = text::trim(joined);
    if (!trimmed.empty()) out.emplace_back(trimmed);
    current.clear();
  };
  for (const std::string& line : text::split_lines(solution)) {
    if (text::trim(line).empty()) {
      flush();
    } else {
      current.push_back(line);
    }
  }
  flush();
  return out;
}

// Split point nearest the middle among positions where `is_cut` holds.
std::optional<std::size_t> nearest_cut(std::string_view s, auto is_cut) {
  const std::size_t mid = s.size() / 2;
  std::optional<std::size_t> best;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (!is_cut(s, i)) continue;
    auto dist = [&](std::size_t p) { return p > mid ? p - mid : mid - p; };
    if (!best || dist(i) < dist(*best)) best = i;
  }
  return best;
}

std::optional<std::pair<std::string, std::string>> split_near_middle(std::string_view s) {
  auto try_cut = [&](auto is_cut) -> std::optional<std::pair<std::string, std::string>> {
    auto cut = nearest_cut(s, is_cut);
    if (!cut) return std::nullopt;
    std::string_view left = text::trim(s.substr(0, *cut));
    std::string_view right = text::trim(s.substr(*cut));
    if (left.empty() || right.empty()) return std::nullopt;
    return std::pair{std::string(left), std::string(right)};
  };
  if (auto r = try_cut([](std::string_view t, std::size_t i) { return t[i] == '\n'; })) return r;
  if (auto r = try_cut([](std::string_view t, std::size_t i) {
        return is_space(t[i]) && (t[i - 1] == '.' || t[i - 1] == '!' || t[i - 1] == '?');
      })) {
    return r;
  }
  return try_cut([](std::string_view t, std::size_t i) { return is_space(t[i]); });
}

}  // namespace

std::vector<std::string> paragraph_decompose(std::string_view solution, std::size_t segments) {
  std::vector<std::string> parts = split_paragraphs(solution);
  if (segments == 0) return {};
  if (parts.empty()) throw Error("reference solution is empty");

  while (parts.size() > segments) {
    std::size_t best = 0;
    for (std::size_t i = 1; i + 1 < parts.size(); ++i) {
      if (parts[i].size() + parts[i + 1].size() < parts[best].size() + parts[best + 1].size()) {
        best = i;
      }
    }
    parts[best] += "\n\n" + parts[best + 1];
    parts.erase(parts.begin() + static_cast<std::ptrdiff_t>(best) + 1);
  }
  while (parts.size() < segments) {
    std::size_t longest = 0;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      if (parts[i].size() > parts[longest].size()) longest = i;
    }
    auto halves = split_near_middle(parts[longest]);
    if (!halves) {
      throw Error("cannot split reference solution into " + std::to_string(segments) +
                  " segments");
    }
    parts[longest] = std::move(halves->first);
    parts.insert(parts.begin() + static_cast<std::ptrdiff_t>(longest) + 1,
                 std::move(halves->second));
  }
  return parts;
}

ExportResult export_training_instances(const std::vector<Problem>& problems,
                                       const std::vector<HintSequence>& hint_sequences,
                                       const StateDecomposer& decomposer) {
  std::map<std::string_view, const Problem*> by_id;
  for (const Problem& p : problems) by_id.emplace(p.id, &p);

  std::vector<const HintSequence*> ordered;
  for (const HintSequence& h : hint_sequences) ordered.push_back(&h);
  std::sort(ordered.begin(), ordered.end(),
            [](const HintSequence* a, const HintSequence* b) { return a->problem_id < b->problem_id; });

  ExportResult result;
  for (const HintSequence* seq : ordered) {
    auto it = by_id.find(seq->problem_id);
    if (it == by_id.end()) {
      result.errors.push_back({seq->problem_id, "no such problem"});
      continue;
    }
    const Problem& problem = *it->second;
    if (!problem.reference_solution) {
      result.errors.push_back({problem.id, "problem has no reference_solution"});
      continue;
    }
    const std::size_t T = seq->hints.size();
    if (T == 0) continue;

    std::vector<std::string> segments;
    try {
      segments = decomposer(*problem.reference_solution, T);
    } catch (const std::exception& e) {
      result.errors.push_back({problem.id, std::string("decomposition failed: ") + e.what()});
      continue;
    }
    if (segments.size() != T) {
      result.errors.push_back({problem.id, "misaligned decomposition: " +
                                               std::to_string(segments.size()) +
                                               " states for " + std::to_string(T) + " hints"});
      continue;
    }
    if (problem.ground_truth_answer) {
      auto leaking = std::find_if(seq->hints.begin(), seq->hints.end(), [&](const Hint& h) {
        return check_leakage(h.text, *problem.ground_truth_answer).leaked;
      });
      if (leaking != seq->hints.end()) {
        result.errors.push_back(
            {problem.id, "hint " + std::to_string(leaking->index) + " reveals the answer"});
        continue;
      }
    }
    std::string state;
    for (std::size_t t = 0; t < T; ++t) {
      result.instances.push_back({problem.id, static_cast<int>(t) + 1, problem.statement, state,
                                  seq->hints[t].text});
      if (!state.empty()) state += "\n\n";
      state += segments[t];
    }
  }
  return result;
}

TrainingPrompt render_training_prompt(const TrainingInstance& instance,
                                      const HintPromptTemplate& step_template) {
  ChatTranscript t =
      step_hint_transcript(step_template, instance.problem_statement, instance.reasoning_state);
  return {instance.problem_id, instance.step_index, t.messages()[0].content,
          t.messages()[1].content, instance.target_hint};
}

}  // namespace hintstep
