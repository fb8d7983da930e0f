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

// Ground disjunctive programs with default negation, hard and weak
// constraints. Stable models are found by exhaustive subset enumeration,
// which keeps the implementation a direct transcription of the definitions.

#ifndef CIPX_ASP_HPP_
#define CIPX_ASP_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cipx/semantics.hpp"

namespace cipx::asp {

using AtomId = std::size_t;
// Bit i set iff atom i is in the set.
using AtomSet = std::uint64_t;

inline constexpr std::size_t kHardAtomLimit = 62;

struct Rule {
  std::vector<AtomId> head;  // empty: hard constraint
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;

  bool operator==(const Rule&) const = default;
};

struct WeakConstraint {
  std::vector<AtomId> pos;
  std::vector<AtomId> neg;

  bool operator==(const WeakConstraint&) const = default;
};

class GroundProgram {
 public:
  AtomId intern(std::string_view name);
  std::optional<AtomId> find(std::string_view name) const;
  std::span<const std::string> atoms() const noexcept { return atoms_; }
  const std::string& atom(AtomId id) const { return atoms_.at(id); }

  void add_rule(Rule rule);
  void add_weak(WeakConstraint weak);
  std::span<const Rule> rules() const noexcept { return rules_; }
  std::span<const WeakConstraint> weak() const noexcept { return weak_; }

  bool is_positive() const;

 private:
  std::vector<std::string> atoms_;
  std::unordered_map<std::string, AtomId> index_;
  std::vector<Rule> rules_;
  std::vector<WeakConstraint> weak_;
};

// `h1 v h2 :- b1, not b2.`, facts `e.`, `:- b.`, `:~ b.`, `%` comments.
// Atoms may carry ground arguments, e.g. `p(a,1)`.
GroundProgram parse_program(std::string_view text);
GroundProgram load_program(const std::string& path);

// Enumeration cap from CIPX_ASP_MAX_ATOMS, 20 when unset.
std::size_t default_atom_cap();

// Gelfond-Lifschitz transform: drops rules whose negative body meets `s`,
// then the negative literals of the rest.
GroundProgram reduct(const GroundProgram& program, AtomSet s);

bool satisfies(const GroundProgram& program, AtomSet m);
int weak_violations(const GroundProgram& program, AtomSet m);

// Subset-minimal models of a negation-free program.
std::vector<AtomSet> minimal_models(const GroundProgram& program,
                                    std::size_t cap = default_atom_cap());

// Stable models, weak-constraint optimal if weak constraints exist, in
// canonical order (lexicographic over sorted atom names).
std::vector<AtomSet> stable_models(const GroundProgram& program,
                                   std::size_t cap = default_atom_cap());

// Atoms not in the program's base are false in every model.
bool answer_query_ground(const GroundProgram& program, std::span<const std::string> atoms,
                         Semantics semantics, std::size_t cap = default_atom_cap());

std::vector<std::string> atom_names(const GroundProgram& program, AtomSet set);
// `{a, e}`
std::string format_atom_set(const GroundProgram& program, AtomSet set);
std::string format_program(const GroundProgram& program);

}  // namespace cipx::asp

#endif  // CIPX_ASP_HPP_
