// Copyright 2026 The hintstep Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace hintstep {

// Syntactic canonical form of a final answer. Total, deterministic and
// idempotent: normalize_answer(normalize_answer(x)) == normalize_answer(x).
//
// Rules, applied until nothing changes:
//   * \boxed{X}, \fbox{X}, \text{X}, \mathrm{X}, \mbox{X} ... unwrap to X
//   * \frac{a}{b}, \dfrac, \tfrac and \frac12 become "a/b"; a non-atomic
//     numerator or denominator is parenthesised: \frac{x+1}{2} -> "(x+1)/2"
//   * \left, \right, $, \( \) \[ \], and the LaTeX spacing commands vanish
//   * ASCII letters are lower-cased (other bytes pass through untouched)
//   * "," thousands separators between digit groups are removed
//   * trailing ".0", ".00", ... after an integer is removed
//   * whitespace runs collapse to one space; the ends are trimmed
//   * surrounding quotes, a wrapping {...} group, and trailing
//     sentence punctuation (. , ; : ! ?) are stripped
//
// No arithmetic is evaluated: "0.5" and "1/2" stay different.
std::string normalize_answer(std::string_view raw);

}  // namespace hintstep
