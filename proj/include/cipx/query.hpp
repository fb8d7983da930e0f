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

// Conjunctive queries with brave and cautious semantics over the atom sets
// of counterfactual models.

#ifndef CIPX_QUERY_HPP_
#define CIPX_QUERY_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cipx/engine.hpp"
#include "cipx/semantics.hpp"

namespace cipx::query {

// An integer, a constant, or a set of constants (kept sorted and unique).
struct Value {
  std::variant<std::int64_t, std::string, std::vector<std::string>> data;

  static Value integer(std::int64_t i) { return Value{i}; }
  // Digit strings become integers.
  static Value constant(std::string_view s);
  static Value set(std::vector<std::string> items);

  bool operator==(const Value&) const = default;
};

// Integers, then constants, then sets; sets by size, then elementwise.
bool operator<(const Value& a, const Value& b);
std::string to_string(const Value& value);

struct Atom {
  std::string predicate;
  std::vector<Value> args;

  bool operator==(const Atom&) const = default;
};
bool operator<(const Atom& a, const Atom& b);
std::string to_string(const Atom& atom);

// Sorted, duplicate-free.
using ModelAtomSet = std::vector<Atom>;

struct CipContext {
  FeatureSchema schema;
  Classifier classifier;
  Entity original;
  // Source of pb_num atoms; without it they are left out.
  std::optional<PercentModel> percent_model;
  bool include_pb_num = true;
  std::int64_t maxint = kDefaultMaxInt;
};

// The atoms a stable model of the program holds for this version.
ModelAtomSet atoms_of(const CounterfactualVersion& version, const CipContext& context);

struct Term {
  enum class Kind { variable, anonymous, value };
  Kind kind;
  std::string name;  // variable name
  Value value;
};

struct Pattern {
  std::string predicate;
  std::vector<Term> args;
};

enum class Op { lt, le, eq, ne, gt, ge };

struct Comparison {
  Term left;
  Op op;
  Term right;
};

struct Query {
  std::string text;
  std::vector<Pattern> patterns;
  std::vector<Comparison> comparisons;
};

// DLV syntax: comma-separated literals terminated by `?`.
Query parse_query(std::string_view text);
// One query per line, `%` comments.
std::vector<Query> parse_query_file(std::string_view text);
std::vector<Query> load_query_file(const std::string& path);

using Signature = std::map<std::string, std::size_t>;
Signature cip_signature(const FeatureSchema& schema);

// Echoes each named variable at its first occurrence and every anonymous
// slot, left to right.
using Answer = std::vector<Value>;

// Brave: union over models; cautious: intersection (empty without models).
// Sorted, without duplicates. With a signature, unknown predicates and
// arity mismatches are errors.
std::vector<Answer> answer(const Query& query, std::span<const ModelAtomSet> models,
                           Semantics semantics, const Signature* signature = nullptr);

// `e, humidity, 2, {wind}`
std::string format_answer(const Answer& answer);

}  // namespace cipx::query

#endif  // CIPX_QUERY_HPP_
