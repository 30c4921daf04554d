// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/prompt.hpp"

#include <array>
#include <fstream>
#include <sstream>
#include <utility>

#include "hintstep/error.hpp"
#include "text_util.hpp"

namespace hintstep {
namespace detail {
extern const std::array<std::pair<std::string_view, std::string_view>, 8> kDefaultTemplates;
}  // namespace detail

namespace {

bool is_section_header(std::string_view line, std::string& name) {
  if (line.size() < 3 || line.front() != '[' || line.back() != ']') return false;
  std::string_view inner = line.substr(1, line.size() - 2);
  for (char c : inner) {
    if (!(text::is_alnum(c) || c == '_')) return false;
  }
  name = std::string(inner);
  return true;
}

std::string join_trimmed(const std::vector<std::string>& lines) {
  std::size_t begin = 0;
  std::size_t end = lines.size();
  while (begin < end && text::trim(lines[begin]).empty()) ++begin;
  while (end > begin && text::trim(lines[end - 1]).empty()) --end;
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += '\n';
    out += lines[i];
  }
  return out;
}

}  // namespace

PromptTemplate::PromptTemplate(std::string name,
                               std::map<std::string, std::string, std::less<>> sections)
    : name_(std::move(name)), sections_(std::move(sections)) {}

PromptTemplate PromptTemplate::parse(std::string_view text, std::string name) {
  std::map<std::string, std::string, std::less<>> sections;
  std::string current;
  std::vector<std::string> buffer;
  auto flush = [&] {
    if (!current.empty()) sections[current] = join_trimmed(buffer);
    buffer.clear();
  };
  for (const std::string& line : text::split_lines(text)) {
    std::string header;
    if (is_section_header(line, header)) {
      flush();
      if (sections.count(header) != 0) {
        throw TemplateError("template '" + name + "' repeats section [" + header + "]");
      }
      current = header;
      continue;
    }
    if (current.empty()) {
      if (text::trim(line).empty() || line.front() == '#') continue;
      throw TemplateError("template '" + name + "' has text before the first [section]");
    }
    buffer.push_back(line);
  }
  flush();
  if (sections.empty()) throw TemplateError("template '" + name + "' has no sections");
  return PromptTemplate(std::move(name), std::move(sections));
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open template " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.stem().string());
}

bool PromptTemplate::has_section(std::string_view section) const {
  return sections_.find(section) != sections_.end();
}

const std::string& PromptTemplate::section(std::string_view section) const {
  auto it = sections_.find(section);
  if (it == sections_.end()) {
    throw TemplateError("template '" + name_ + "' has no [" + std::string(section) + "] section");
  }
  return it->second;
}

std::vector<std::string> PromptTemplate::section_names() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : sections_) out.push_back(k);
  return out;
}

std::string PromptTemplate::render(std::string_view section_name,
                                   const PlaceholderValues& values) const {
  const std::string& src = section(section_name);
  std::string out;
  out.reserve(src.size());
  std::size_t i = 0;
  while (i < src.size()) {
    if (src[i] == '{') {
      std::size_t close = src.find('}', i + 1);
      if (close != std::string::npos) {
        auto it = values.find(std::string_view(src).substr(i + 1, close - i - 1));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += src[i];
    ++i;
  }
  return out;
}

void PromptTemplate::require(std::string_view section_name,
                             std::initializer_list<std::string_view> exactly_once,
                             std::initializer_list<std::string_view> at_most_once) const {
  const std::string& text = section(section_name);
  for (std::string_view p : exactly_once) {
    std::size_t n = count_placeholder(text, p);
    if (n != 1) {
      throw TemplateError("template '" + name_ + "' section [" + std::string(section_name) +
                          "] must contain {" + std::string(p) + "} exactly once (found " +
                          std::to_string(n) + ")");
    }
  }
  for (std::string_view p : at_most_once) {
    std::size_t n = count_placeholder(text, p);
    if (n > 1) {
      throw TemplateError("template '" + name_ + "' section [" + std::string(section_name) +
                          "] may contain {" + std::string(p) + "} at most once (found " +
                          std::to_string(n) + ")");
    }
  }
}

std::size_t count_placeholder(std::string_view text, std::string_view name) {
  const std::string needle = "{" + std::string(name) + "}";
  std::size_t n = 0;
  for (std::size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

HintPromptTemplate::HintPromptTemplate(PromptTemplate base, HintTemplateMode mode)
    : base_(std::move(base)), mode_(mode) {
  base_.section("system");
  if (mode_ == HintTemplateMode::kOracle) {
    base_.require("user", {"statement", "solution_or_answer"}, {"prior_hints"});
  } else {
    base_.require("user", {"statement", "reasoning_state"});
  }
  if (base_.has_section("retry")) base_.require("retry", {}, {"evidence"});
}

std::string HintPromptTemplate::system_text() const { return base_.section("system"); }

std::string HintPromptTemplate::user_text(const PlaceholderValues& values) const {
  return base_.render("user", values);
}

std::string HintPromptTemplate::retry_text(std::string_view evidence) const {
  PlaceholderValues v{{"evidence", std::string(evidence)}};
  if (base_.has_section("retry")) return base_.render("retry", v);
  return "Your hint revealed the final answer (\"" + std::string(evidence) +
         "\"). Write a different hint for the same step that does not reveal the answer.";
}

std::string_view default_template_text(std::string_view key) {
  for (const auto& [k, text] : detail::kDefaultTemplates) {
    if (k == key) return text;
  }
  throw TemplateError("no default template named '" + std::string(key) + "'");
}

PromptSet PromptSet::defaults() {
  auto load = [](std::string_view key) {
    return PromptTemplate::parse(default_template_text(key), std::string(key));
  };
  PromptSet s{load("oracle_solution"), load("oracle_answer"),     load("step_hint"),
              load("solver_refine"),   load("solver_synthesize"), load("solver_direct"),
              load("repair"),          load("judge")};
  return s;
}

void PromptSet::set(std::string_view key, PromptTemplate t) {
  if (key == "oracle_solution") oracle_solution = std::move(t);
  else if (key == "oracle_answer") oracle_answer = std::move(t);
  else if (key == "step_hint") step_hint = std::move(t);
  else if (key == "solver_refine") solver_refine = std::move(t);
  else if (key == "solver_synthesize") solver_synthesize = std::move(t);
  else if (key == "solver_direct") solver_direct = std::move(t);
  else if (key == "repair") repair = std::move(t);
  else if (key == "judge") judge = std::move(t);
  else throw TemplateError("unknown template key '" + std::string(key) + "'");
}

void PromptSet::validate() const {
  HintPromptTemplate(oracle_solution, HintTemplateMode::kOracle);
  HintPromptTemplate(oracle_answer, HintTemplateMode::kOracle);
  HintPromptTemplate(step_hint, HintTemplateMode::kStep);
  solver_refine.section("system");
  solver_refine.require("problem", {"statement"});
  solver_refine.require("state", {"reasoning_state"});
  solver_refine.require("hint", {"hint"});
  solver_synthesize.section("system");
  solver_synthesize.require("user", {"reasoning_state"}, {"statement"});
  solver_direct.section("system");
  solver_direct.require("user", {"statement"});
  repair.require("user", {}, {"error"});
  judge.section("system");
  judge.require("user", {"statement", "reference", "answer"}, {"summary"});
  if (judge.has_section("repair")) judge.require("repair", {}, {"error"});
}

bool is_stop_marker(std::string_view reply) {
  std::string s = text::to_lower(text::trim(reply));
  return s == "[done]" || s == "done";
}

}  // namespace hintstep
