// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#include "hintstep/normalize.hpp"

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>

#include "text_util.hpp"

namespace hintstep {
namespace {

using text::is_alpha;
using text::is_alnum;
using text::is_digit;
using text::is_space;

constexpr std::array<std::string_view, 9> kUnwrapCommands{
    "boxed", "fbox", "text", "textbf", "textrm", "textit", "mathrm", "mathbf", "mbox"};
constexpr std::array<std::string_view, 3> kFracCommands{"frac", "dfrac", "tfrac"};

bool one_of(std::string_view name, auto const& list) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

// Index one past the '}' matching the '{' at `open`, or nullopt.
std::optional<std::size_t> match_brace(std::string_view s, std::size_t open) {
  int depth = 0;
  for (std::size_t i = open; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      ++i;  // escaped char never opens or closes a group
      continue;
    }
    if (s[i] == '{') ++depth;
    if (s[i] == '}' && --depth == 0) return i + 1;
  }
  return std::nullopt;
}

std::size_t skip_spaces(std::string_view s, std::size_t i) {
  while (i < s.size() && s[i] == ' ') ++i;
  return i;
}

// One \frac argument: a brace group or a single character. Returns the
// argument text and the position after it.
std::optional<std::pair<std::string_view, std::size_t>> frac_arg(std::string_view s,
                                                                  std::size_t i) {
  i = skip_spaces(s, i);
  if (i >= s.size()) return std::nullopt;
  if (s[i] == '{') {
    auto end = match_brace(s, i);
    if (!end) return std::nullopt;
    return std::pair{s.substr(i + 1, *end - i - 2), *end};
  }
  if (s[i] == '\\' || s[i] == '}') return std::nullopt;
  return std::pair{s.substr(i, 1), i + 1};
}

bool is_atom(std::string_view a) {
  if (a.empty()) return false;
  std::size_t start = a[0] == '-' ? 1 : 0;
  if (start == a.size()) return false;
  return std::all_of(a.begin() + static_cast<std::ptrdiff_t>(start), a.end(), [](char c) {
    return is_alnum(c) || c == '.' || c == '\\';
  });
}

std::string wrap(std::string_view a) {
  if (is_atom(a)) return std::string(a);
  return "(" + std::string(a) + ")";
}

// LaTeX-level rewriting: unwrap, fractions, delimiters, spacing commands.
std::string rewrite_latex(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == '$') {
      ++i;
      continue;
    }
    if (c != '\\' || i + 1 >= s.size()) {
      out += c;
      ++i;
      continue;
    }
    char next = s[i + 1];
    if (!is_alpha(next)) {
      switch (next) {
        case '!': case ',': case ';': case ':':
        case '(': case ')': case '[': case ']': case '$':
          break;
        case ' ':
          out += ' ';
          break;
        case '{': case '}': case '%':
          out += next;
          break;
        default:
          out += c;
          out += next;
      }
      i += 2;
      continue;
    }
    std::size_t name_end = i + 1;
    while (name_end < s.size() && is_alpha(s[name_end])) ++name_end;
    std::string_view name = s.substr(i + 1, name_end - i - 1);

    if (name == "left" || name == "right") {
      i = name_end;
      continue;
    }
    if (one_of(name, kUnwrapCommands)) {
      std::size_t open = skip_spaces(s, name_end);
      if (open < s.size() && s[open] == '{') {
        if (auto close = match_brace(s, open)) {
          out += s.substr(open + 1, *close - open - 2);
          i = *close;
          continue;
        }
      }
    }
    if (one_of(name, kFracCommands)) {
      if (auto num = frac_arg(s, name_end)) {
        if (auto den = frac_arg(s, num->second)) {
          out += wrap(num->first);
          out += '/';
          out += wrap(den->first);
          i = den->second;
          continue;
        }
      }
    }
    out += s.substr(i, name_end - i);
    i = name_end;
  }
  return out;
}

void lower_ascii(std::string& s) {
  for (char& c : s) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
}

// "1,000,000" -> "1000000". A comma qualifies when it sits between a digit
// and exactly three digits that are not followed by another digit.
std::string drop_thousands_separators(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == ',' && i > 0 && is_digit(s[i - 1]) && i + 3 < s.size() &&
        is_digit(s[i + 1]) && is_digit(s[i + 2]) && is_digit(s[i + 3]) &&
        (i + 4 == s.size() || !is_digit(s[i + 4]))) {
      continue;
    }
    out += s[i];
  }
  return out;
}

// "12.0" -> "12", "3.000" -> "3"; "1.05" and "0.50" are left alone.
std::string drop_integer_zero_fraction(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '.' && i > 0 && is_digit(s[i - 1]) && i + 1 < s.size() && s[i + 1] == '0') {
      // The integer part must not itself be the fraction of another number.
      std::size_t k = i;
      while (k > 0 && is_digit(s[k - 1])) --k;
      bool integer_part = k == 0 || s[k - 1] != '.';
      std::size_t j = i + 1;
      while (j < s.size() && s[j] == '0') ++j;
      if (integer_part && (j == s.size() || !is_digit(s[j]))) {
        i = j;
        continue;
      }
    }
    out += s[i];
    ++i;
  }
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += c;
  }
  return out;
}

bool is_trailing_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

bool is_quote(char c) { return c == '"' || c == '\'' || c == '`'; }

std::string strip_delimiters(std::string s) {
  bool changed = true;
  while (changed && !s.empty()) {
    changed = false;
    while (!s.empty() && (is_trailing_punct(s.back()) || is_space(s.back()))) {
      s.pop_back();
      changed = true;
    }
    while (!s.empty() && is_space(s.front())) {
      s.erase(0, 1);
      changed = true;
    }
    if (s.size() >= 2 && is_quote(s.front()) && s.back() == s.front()) {
      s = s.substr(1, s.size() - 2);
      changed = true;
      continue;
    }
    if (s.size() >= 2 && s.front() == '{' && match_brace(s, 0) == s.size()) {
      s = s.substr(1, s.size() - 2);
      changed = true;
    }
  }
  return s;
}

std::string normalize_pass(std::string_view raw) {
  std::string s = rewrite_latex(raw);
  lower_ascii(s);
  s = drop_thousands_separators(s);
  s = drop_integer_zero_fraction(s);
  s = collapse_whitespace(s);
  return strip_delimiters(std::move(s));
}

}  // namespace

std::string normalize_answer(std::string_view raw) {
  std::string current(raw);
  // Every rule is length non-increasing, so this converges; the bound is a
  // backstop only.
  for (std::size_t iter = 0; iter <= raw.size() + 2; ++iter) {
    std::string next = normalize_pass(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

}  // namespace hintstep
