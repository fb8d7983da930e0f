/*
 * Copyright 2026 The cipx Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// The reference weather program, with the corrections this implementation
// makes to it, for comparison with the emitter.

#ifndef CIPX_TESTS_REFERENCE_HPP_
#define CIPX_TESTS_REFERENCE_HPP_

#include <algorithm>
#include <cctype>
#include <stdexcept>
#include <string>

#include "cipx/error.hpp"

namespace cipx::testing {

inline std::string strip_whitespace(std::string s) {
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
          s.end());
  return s;
}

inline void replace_once(std::string& s, const std::string& from, const std::string& to) {
  const auto at = s.find(from);
  if (at == std::string::npos || s.find(from, at + 1) != std::string::npos) {
    throw std::logic_error("reference edit does not apply exactly once: " + from);
  }
  s.replace(at, from.size(), to);
}

// 1. tmpCont takes the entity as well.
// 2. chosen_w/diffchoice_w refer to their own predicates, not the h ones.
// 3. p_h_c facts follow the dom_h order (high first); only a reordering.
inline std::string corrected_reference(std::string s) {
  replace_once(s, "not tmpCont(U)", "not tmpCont(E,U)");
  replace_once(s, "U != W,  not diffchoice_h(O,T,H,W,U)", "U != W,  not diffchoice_w(O,T,H,W,U)");
  replace_once(s, "diffchoice_w(O,T,H,W,U) :- chosen_h(", "diffchoice_w(O,T,H,W,U) :- chosen_w(");
  replace_once(s, "p_h_c(normal, yes, 67). p_h_c(high, yes, 33).",
               "p_h_c(high, yes, 33). p_h_c(normal, yes, 67).");
  replace_once(s, "p_h_c(normal, no, 20). p_h_c(high, no, 80).",
               "p_h_c(high, no, 80). p_h_c(normal, no, 20).");
  return s;
}

}  // namespace cipx::testing

#endif  // CIPX_TESTS_REFERENCE_HPP_
