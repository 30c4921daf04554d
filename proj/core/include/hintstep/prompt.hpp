// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <initializer_list>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace hintstep {

using PlaceholderValues = std::map<std::string, std::string, std::less<>>;

// A named prompt split into sections ([system], [user], ...). Placeholders are
// written {name}; only names passed to render() are substituted, so other
// braces (LaTeX, JSON examples) pass through. Substitution is single-pass:
// text inserted for one placeholder is never rescanned.
//
// File format: UTF-8 text; a line "[section]" opens a section; lines starting
// with '#' before the first section are comments.
class PromptTemplate {
 public:
  PromptTemplate() = default;
  PromptTemplate(std::string name, std::map<std::string, std::string, std::less<>> sections);

  static PromptTemplate parse(std::string_view text, std::string name);
  static PromptTemplate load(const std::filesystem::path& path);

  const std::string& name() const { return name_; }
  bool has_section(std::string_view section) const;
  const std::string& section(std::string_view section) const;  // throws TemplateError
  std::vector<std::string> section_names() const;

  std::string render(std::string_view section, const PlaceholderValues& values) const;

  // Each name in `exactly_once` must occur exactly once in the section, each
  // name in `at_most_once` zero or one times. Throws TemplateError.
  void require(std::string_view section, std::initializer_list<std::string_view> exactly_once,
               std::initializer_list<std::string_view> at_most_once = {}) const;

  bool operator==(const PromptTemplate&) const = default;

 private:
  std::string name_;
  std::map<std::string, std::string, std::less<>> sections_;
};

// Occurrences of "{name}" in text.
std::size_t count_placeholder(std::string_view text, std::string_view name);

// What a hint template is used for; decides which placeholders are mandatory.
enum class HintTemplateMode {
  kOracle,  // {statement}, {solution_or_answer}; optional {prior_hints}
  kStep,    // {statement}, {reasoning_state}
};

// A [system] + [user] template for the hinter, validated for its mode.
// An optional [retry] section ({evidence}) is sent after a leaking hint.
class HintPromptTemplate {
 public:
  HintPromptTemplate(PromptTemplate base, HintTemplateMode mode);

  const PromptTemplate& base() const { return base_; }
  HintTemplateMode mode() const { return mode_; }
  const std::string& name() const { return base_.name(); }

  std::string system_text() const;
  std::string user_text(const PlaceholderValues& values) const;
  std::string retry_text(std::string_view evidence) const;

 private:
  PromptTemplate base_;
  HintTemplateMode mode_;
};

// Every template the pipeline uses, defaulting to the shipped versions.
struct PromptSet {
  PromptTemplate oracle_solution;
  PromptTemplate oracle_answer;
  PromptTemplate step_hint;
  PromptTemplate solver_refine;      // [system] [problem] [state] [hint]
  PromptTemplate solver_synthesize;  // [system] [user]
  PromptTemplate solver_direct;      // [system] [user]
  PromptTemplate repair;             // [user]
  PromptTemplate judge;              // [system] [user] [repair]

  static PromptSet defaults();

  // Replaces one template by key (oracle_solution, oracle_answer, step_hint,
  // solver_refine, solver_synthesize, solver_direct, repair, judge).
  void set(std::string_view key, PromptTemplate t);

  // Throws TemplateError if any template lacks a required placeholder.
  void validate() const;
};

// Text of a shipped default template by key.
std::string_view default_template_text(std::string_view key);

// Rendered when a reasoning state or hint list is empty.
inline constexpr std::string_view kEmptyReasoningState = "(no work yet)";
inline constexpr std::string_view kNoPriorHints = "(none)";
// A hinter reply equal to this (case-insensitive, brackets optional) ends the sequence.
inline constexpr std::string_view kStopMarker = "[DONE]";

bool is_stop_marker(std::string_view reply);

}  // namespace hintstep
