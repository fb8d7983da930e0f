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

// Randomized checks shared by the unit tests and the acceptance runner.
// Each returns an empty string on success, else a description of the first
// counterexample.

#ifndef CIPX_TESTS_PROPERTIES_HPP_
#define CIPX_TESTS_PROPERTIES_HPP_

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "cipx/asp.hpp"
#include "cipx/constraints.hpp"
#include "cipx/engine.hpp"
#include "cipx/naive_bayes.hpp"
#include "cipx/query.hpp"

namespace cipx::testing {

// ---- stable models, checked set by set ----

struct TextRule {
  std::vector<std::string> head, pos, neg;
};

struct TextProgram {
  std::vector<TextRule> rules;
  std::vector<TextRule> weak;  // head unused

  std::string text() const {
    const auto join = [](const std::vector<std::string>& v, const char* sep, const char* prefix) {
      std::string out;
      for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + std::string(prefix) + v[i];
      return out;
    };
    const auto body = [&](const TextRule& r) {
      auto out = join(r.pos, ", ", "");
      if (!r.pos.empty() && !r.neg.empty()) out += ", ";
      return out + join(r.neg, ", ", "not ");
    };
    std::string out;
    for (const auto& r : rules) {
      out += join(r.head, " v ", "");
      if (!r.pos.empty() || !r.neg.empty()) out += (r.head.empty() ? ":- " : " :- ") + body(r);
      out += ".\n";
    }
    for (const auto& w : weak) out += ":~ " + body(w) + ".\n";
    return out;
  }
};

using NameSet = std::set<std::string>;

inline bool contains_all(const NameSet& s, const std::vector<std::string>& atoms) {
  return std::all_of(atoms.begin(), atoms.end(), [&](const auto& a) { return s.count(a) > 0; });
}

inline bool contains_any(const NameSet& s, const std::vector<std::string>& atoms) {
  return std::any_of(atoms.begin(), atoms.end(), [&](const auto& a) { return s.count(a) > 0; });
}

inline bool models(const std::vector<TextRule>& rules, const NameSet& m) {
  for (const auto& r : rules) {
    if (contains_all(m, r.pos) && !contains_any(m, r.neg) && !contains_any(m, r.head)) return false;
  }
  return true;
}

inline std::vector<NameSet> all_subsets(const std::vector<std::string>& base) {
  std::vector<NameSet> out{{}};
  for (const auto& a : base) {
    const auto size = out.size();
    for (std::size_t i = 0; i < size; ++i) {
      auto s = out[i];
      s.insert(a);
      out.push_back(std::move(s));
    }
  }
  return out;
}

// Direct reading of the definition: S is stable iff S models the reduct and
// no proper subset of S does.
inline std::vector<NameSet> oracle_stable_models(const TextProgram& p) {
  NameSet base_set;
  for (const auto* list : {&p.rules, &p.weak}) {
    for (const auto& r : *list) {
      base_set.insert(r.head.begin(), r.head.end());
      base_set.insert(r.pos.begin(), r.pos.end());
      base_set.insert(r.neg.begin(), r.neg.end());
    }
  }
  const std::vector<std::string> base(base_set.begin(), base_set.end());
  std::vector<NameSet> stable;
  for (const auto& s : all_subsets(base)) {
    std::vector<TextRule> reduct;
    for (const auto& r : p.rules) {
      if (!contains_any(s, r.neg)) reduct.push_back({r.head, r.pos, {}});
    }
    if (!models(reduct, s)) continue;
    const std::vector<std::string> members(s.begin(), s.end());
    bool minimal = true;
    for (const auto& sub : all_subsets(members)) {
      if (sub.size() < s.size() && models(reduct, sub)) {
        minimal = false;
        break;
      }
    }
    if (minimal) stable.push_back(s);
  }
  if (!p.weak.empty() && !stable.empty()) {
    const auto violations = [&](const NameSet& s) {
      return std::count_if(p.weak.begin(), p.weak.end(), [&](const TextRule& w) {
        return contains_all(s, w.pos) && !contains_any(s, w.neg);
      });
    };
    long best = violations(stable.front());
    for (const auto& s : stable) best = std::min(best, violations(s));
    std::erase_if(stable, [&](const NameSet& s) { return violations(s) != best; });
  }
  std::sort(stable.begin(), stable.end());
  return stable;
}

inline TextProgram random_program(std::mt19937& rng, bool allow_negation, bool allow_weak) {
  std::uniform_int_distribution<int> atom_count(1, 8);
  const int n = atom_count(rng);
  const auto atom = [&] { return "p" + std::to_string(std::uniform_int_distribution<int>(0, n - 1)(rng)); };
  const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const auto distinct = [&](int k) {
    std::vector<std::string> out;
    for (int i = 0; i < k; ++i) {
      auto a = atom();
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
    }
    return out;
  };
  TextProgram p;
  const int rules = pick(1, 6);
  for (int i = 0; i < rules; ++i) {
    TextRule r;
    r.head = distinct(pick(0, 4) == 0 ? 0 : pick(1, 2));
    r.pos = distinct(pick(0, 2));
    if (allow_negation) r.neg = distinct(pick(0, 2));
    if (r.head.empty() && r.pos.empty() && r.neg.empty()) r.pos.push_back(atom());
    p.rules.push_back(std::move(r));
  }
  if (allow_weak && pick(0, 2) == 0) {
    for (int i = pick(1, 2); i > 0; --i) {
      TextRule w;
      w.pos = distinct(pick(1, 2));
      if (allow_negation) w.neg = distinct(pick(0, 1));
      p.weak.push_back(std::move(w));
    }
  }
  return p;
}

inline std::string check_random_programs(unsigned seed, int count) {
  std::mt19937 rng(seed);
  for (int i = 0; i < count; ++i) {
    const bool positive = i % 5 == 0;
    const auto tp = random_program(rng, !positive, !positive);
    const auto program = asp::parse_program(tp.text());
    const auto stable = asp::stable_models(program);
    std::vector<NameSet> mine;
    for (const auto s : stable) {
      const auto names = asp::atom_names(program, s);
      mine.emplace_back(names.begin(), names.end());
    }
    std::sort(mine.begin(), mine.end());
    if (mine != oracle_stable_models(tp)) return "stable models differ from the oracle for:\n" + tp.text();
    for (std::size_t a = 0; a < stable.size(); ++a) {
      for (std::size_t b = 0; b < stable.size(); ++b) {
        if (a != b && (stable[a] & ~stable[b]) == 0) return "comparable stable models for:\n" + tp.text();
      }
      if (!asp::satisfies(program, stable[a])) return "stable model violates program:\n" + tp.text();
    }
    if (positive) {
      auto minimal = asp::minimal_models(program);
      if (minimal != stable) return "positive program: stable != minimal for:\n" + tp.text();
    }
  }
  return {};
}

// ---- counterfactual engine and queries over random models ----

struct RandomInstance {
  NaiveBayesModel model;
  PercentModel percent;
  Entity entity;
};

inline RandomInstance random_instance(std::mt19937& rng) {
  const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int n = pick(3, 5);
  std::vector<Feature> features;
  for (int f = 0; f < n; ++f) {
    Feature feature{"F" + std::to_string(f), "f" + std::to_string(f), {}};
    for (int v = pick(2, 3); v > 0; --v) feature.domain.push_back("v" + std::to_string(v));
    features.push_back(std::move(feature));
  }
  Dataset data;
  data.schema = FeatureSchema(features);
  data.class_name = "C";
  data.labels = {"yes", "no"};
  const int rows = pick(8, 30);
  for (int r = 0; r < rows; ++r) {
    DatasetRow row;
    for (const auto& f : features) {
      row.values.push_back(f.domain[pick(0, static_cast<int>(f.domain.size()) - 1)]);
    }
    row.label = r == 0 ? "yes" : r == 1 ? "no" : (pick(0, 1) ? "yes" : "no");
    data.rows.push_back(std::move(row));
  }
  auto model = train(data);
  auto percent = to_percent(model);
  Entity entity{"e", data.rows[pick(0, rows - 1)].values};
  return {std::move(model), std::move(percent), std::move(entity)};
}

inline std::string random_query(std::mt19937& rng, const FeatureSchema& schema) {
  const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const auto feature = schema[pick(0, static_cast<int>(schema.size()) - 1)];
  std::string vars;
  for (std::size_t f = 0; f < schema.size(); ++f) vars += ",X" + std::to_string(f);
  switch (pick(0, 6)) {
    case 0: return "cls(E" + vars + ",L)?";
    case 1: return "fullExpl(E,U,R,S), R < " + std::to_string(pick(1, 4)) + "?";
    case 2: return "invResp(e," + feature.atom + ",R)?";
    case 3: return "expl(e,U,X)?";
    case 4: return "cont(e,U,S)?";
    case 5: return "ent(E" + vars + ",s), X0 = " + schema[0].domain[0] + "?";
    default: return "cause(e,U), invResp(e,U,R), R <= 2?";
  }
}

inline std::string check_random_instances(unsigned seed, int count) {
  std::mt19937 rng(seed);
  for (int i = 0; i < count; ++i) {
    const auto inst = random_instance(rng);
    const auto& schema = inst.model.schema();
    const auto classifier = Classifier::staged(inst.percent);
    const auto original = schema.encode(inst.entity.values);
    const auto label = classifier.label(original);
    const auto versions = enumerate_counterfactuals(classifier, inst.entity);
    const auto where = " (instance " + std::to_string(i) + ")";

    // (c) labels flip and changed sets are exact
    for (const auto& v : versions) {
      if (v.label == label || classifier.label(v.values) == label) return "label not flipped" + where;
      std::vector<FeatureIndex> changed;
      for (FeatureIndex f = 0; f < schema.size(); ++f) {
        if (v.values[f] != original[f]) changed.push_back(f);
      }
      if (changed != v.changed || changed.empty()) return "changed set is not exact" + where;
      for (std::size_t k = 0; k + 1 < v.trail.size(); ++k) {
        if (classifier.label(v.trail[k]) != label) return "intermediate state flipped" + where;
      }
    }

    // (d) inverse responsibility is contingency size plus one
    const auto explanations = explanations_of(versions, schema, inst.entity);
    for (const auto& e : explanations) {
      if (e.inv_resp != static_cast<int>(e.contingency.size()) + 1) return "inv_resp mismatch" + where;
      if (std::count(e.contingency.begin(), e.contingency.end(), e.cause) != 0) {
        return "cause inside its contingency" + where;
      }
    }

    // (b) a random hard constraint never raises any score
    const auto before = xresp(explanations, schema);
    ForbiddenCombination combo;
    const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    for (int k = pick(1, 2); k > 0; --k) {
      const auto f = static_cast<FeatureIndex>(pick(0, static_cast<int>(schema.size()) - 1));
      const auto v = static_cast<ValueIndex>(pick(0, static_cast<int>(schema[f].domain.size()) - 1));
      if (std::none_of(combo.bindings.begin(), combo.bindings.end(),
                       [f](const auto& b) { return b.first == f; })) {
        combo.bindings.emplace_back(f, v);
      }
    }
    const ConstraintSet constrained(schema, {combo}, {}, {});
    const auto fewer = enumerate_counterfactuals(classifier, inst.entity, constrained);
    for (const auto& v : fewer) {
      if (std::none_of(versions.begin(), versions.end(),
                       [&](const auto& w) { return w.values == v.values; })) {
        return "constraint added a version" + where;
      }
    }
    const auto after = xresp(explanations_of(fewer, schema, inst.entity), schema);
    for (FeatureIndex f = 0; f < schema.size(); ++f) {
      if (after[f].x_resp > before[f].x_resp) return "constraint raised x_resp" + where;
    }

    // (a) cautious answers are brave answers
    query::CipContext context{schema, classifier, inst.entity, inst.percent, true, kDefaultMaxInt};
    std::vector<query::ModelAtomSet> models;
    for (const auto& v : versions) models.push_back(query::atoms_of(v, context));
    const auto signature = query::cip_signature(schema);
    for (int q = 0; q < 3; ++q) {
      const auto parsed = query::parse_query(random_query(rng, schema));
      const auto brave = query::answer(parsed, models, Semantics::brave, &signature);
      for (const auto& a : query::answer(parsed, models, Semantics::cautious, &signature)) {
        if (std::find(brave.begin(), brave.end(), a) == brave.end()) {
          return "cautious answer missing from brave answers for " + parsed.text + where;
        }
      }
    }
  }
  return {};
}

}  // namespace cipx::testing

#endif  // CIPX_TESTS_PROPERTIES_HPP_
