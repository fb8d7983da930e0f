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

#include "cipx/engine.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <utility>

#include "cipx/error.hpp"

namespace cipx {
namespace {

constexpr const char* kModule = "engine";

struct Node {
  Tuple values;
  std::uint64_t used;  // features intervened on along the path
  std::size_t parent;
  InterventionStep step;
};

CounterfactualVersion build_version(const std::vector<Node>& nodes, std::size_t leaf,
                                    const Tuple& original, const std::string& eid,
                                    LabelIndex label) {
  CounterfactualVersion version;
  version.eid = eid;
  version.values = nodes[leaf].values;
  version.label = label;
  for (auto i = leaf; i != 0; i = nodes[i].parent) {
    version.path.push_back(nodes[i].step);
    version.trail.push_back(nodes[i].values);
  }
  std::reverse(version.path.begin(), version.path.end());
  std::reverse(version.trail.begin(), version.trail.end());
  for (FeatureIndex f = 0; f < original.size(); ++f) {
    if (version.values[f] != original[f]) version.changed.push_back(f);
  }
  return version;
}

// Odometer over the cartesian product of the non-original values of `features`.
bool next_assignment(const FeatureSchema& schema, std::span<const FeatureIndex> features,
                     const Tuple& original, Tuple& current) {
  for (auto it = features.rbegin(); it != features.rend(); ++it) {
    const auto f = *it;
    const auto size = schema[f].domain.size();
    auto v = current[f];
    do {
      v = (v + 1) % size;
    } while (v == original[f]);
    current[f] = v;
    // Wrapped around to the smallest admissible value: carry.
    const ValueIndex first = original[f] == 0 ? 1 : 0;
    if (v != first) return true;
  }
  return false;
}

}  // namespace

Classifier Classifier::staged(PercentModel model, std::int64_t maxint) {
  auto shared = std::make_shared<const PercentModel>(std::move(model));
  auto schema = std::make_shared<const FeatureSchema>(shared->schema());
  return Classifier(std::move(schema), shared->labels(),
                    [shared, maxint](std::span<const ValueIndex> tuple) {
                      return classify_staged(*shared, tuple, maxint).label;
                    });
}

Classifier Classifier::exact(NaiveBayesModel model) {
  auto shared = std::make_shared<const NaiveBayesModel>(std::move(model));
  auto schema = std::make_shared<const FeatureSchema>(shared->schema());
  return Classifier(std::move(schema), shared->labels(),
                    [shared](std::span<const ValueIndex> tuple) {
                      return classify_exact(*shared, tuple).label;
                    });
}

Classifier Classifier::custom(FeatureSchema schema, Labels labels, Labeler labeler) {
  if (!labeler) throw Error(kModule, "custom classifier needs a labeler");
  return Classifier(std::make_shared<const FeatureSchema>(std::move(schema)), std::move(labels),
                    std::move(labeler));
}

std::vector<CounterfactualVersion> enumerate_counterfactuals(const Classifier& classifier,
                                                             const Entity& entity,
                                                             const ConstraintSet& constraints,
                                                             const EngineOptions& options) {
  const auto& schema = classifier.schema();
  validate_entity(schema, entity);
  if (!constraints.schema().empty() && !(constraints.schema() == schema)) {
    throw Error(kModule, "constraints were built for a different schema");
  }
  if (!options.allow_reintervention && schema.size() > 64) {
    throw Error(kModule, "at most 64 features are supported");
  }
  const Tuple original = schema.encode(entity.values);
  const LabelIndex original_label = classifier.label(original);
  if (options.strict_paper && (original_label != 0 || !admits(constraints, original))) return {};

  std::vector<Node> nodes{Node{original, 0, 0, {}}};
  std::set<std::pair<Tuple, std::uint64_t>> visited{{original, 0}};
  std::map<Tuple, std::size_t> reported;
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (const auto index : frontier) {
      for (FeatureIndex f = 0; f < schema.size(); ++f) {
        if (!constraints.intervenable(f)) continue;
        const std::uint64_t bit = std::uint64_t{1} << (f % 64);
        if (!options.allow_reintervention && (nodes[index].used & bit)) continue;
        for (ValueIndex v = 0; v < schema[f].domain.size(); ++v) {
          const ValueIndex from = nodes[index].values[f];
          if (v == from) continue;
          Tuple state = nodes[index].values;
          state[f] = v;
          state = propagate(constraints, std::move(state));
          if (state == original || !admits(constraints, state)) continue;
          const std::uint64_t used = options.allow_reintervention ? 0 : (nodes[index].used | bit);
          if (!visited.emplace(state, used).second) continue;
          const auto label = classifier.label(state);
          nodes.push_back(Node{state, used, index, InterventionStep{f, from, v}});
          if (label != original_label) {
            reported.emplace(std::move(state), nodes.size() - 1);
          } else {
            next.push_back(nodes.size() - 1);
          }
        }
      }
    }
    frontier = std::move(next);
  }

  std::vector<CounterfactualVersion> versions;
  versions.reserve(reported.size());
  for (const auto& [values, leaf] : reported) {
    versions.push_back(
        build_version(nodes, leaf, original, entity.eid, 1 - original_label));
  }
  std::stable_sort(versions.begin(), versions.end(), [](const auto& a, const auto& b) {
    if (a.changed.size() != b.changed.size()) return a.changed.size() < b.changed.size();
    return a.values < b.values;
  });
  return versions;
}

std::vector<CounterfactualVersion> enumerate_counterfactuals(const PercentModel& model,
                                                             const Entity& entity,
                                                             const ConstraintSet& constraints,
                                                             const EngineOptions& options) {
  return enumerate_counterfactuals(Classifier::staged(model), entity, constraints, options);
}

std::vector<Explanation> explanations_of(std::span<const CounterfactualVersion> versions,
                                         const FeatureSchema& schema, const Entity& original) {
  const Tuple base = schema.encode(original.values);
  std::vector<Explanation> out;
  std::set<std::pair<FeatureIndex, std::vector<FeatureIndex>>> seen;
  for (const auto& version : versions) {
    for (const auto u : version.changed) {
      std::vector<FeatureIndex> contingency;
      for (const auto f : version.changed) {
        if (f != u) contingency.push_back(f);
      }
      if (!seen.emplace(u, contingency).second) continue;
      const int inv_resp = static_cast<int>(contingency.size()) + 1;
      out.push_back(Explanation{version.eid, u, base[u], std::move(contingency), inv_resp,
                                version.values});
    }
  }
  return out;
}

ResponsibilityReport xresp(std::span<const Explanation> explanations,
                           const FeatureSchema& schema) {
  ResponsibilityReport report;
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    ResponsibilityEntry entry{f, Rational(0), std::nullopt, std::nullopt};
    for (const auto& e : explanations) {
      if (e.cause != f) continue;
      if (!entry.min_inv_resp || e.inv_resp < *entry.min_inv_resp) {
        entry.min_inv_resp = e.inv_resp;
        entry.witness = e.witness;
      }
    }
    if (entry.min_inv_resp) entry.x_resp = Rational(1, *entry.min_inv_resp);
    report.push_back(std::move(entry));
  }
  return report;
}

std::vector<CounterfactualVersion> min_change_versions(
    std::span<const CounterfactualVersion> versions) {
  if (versions.empty()) return {};
  const auto smallest =
      std::min_element(versions.begin(), versions.end(), [](const auto& a, const auto& b) {
        return a.changed.size() < b.changed.size();
      })->changed.size();
  std::vector<CounterfactualVersion> out;
  std::copy_if(versions.begin(), versions.end(), std::back_inserter(out),
               [smallest](const auto& v) { return v.changed.size() == smallest; });
  return out;
}

StrictCause strict_actual_cause(const Classifier& classifier, const Entity& entity,
                                FeatureIndex feature) {
  const auto& schema = classifier.schema();
  validate_entity(schema, entity);
  if (feature >= schema.size()) throw Error(kModule, "feature index out of range");
  const Tuple original = schema.encode(entity.values);
  const auto label = classifier.label(original);

  std::vector<FeatureIndex> others;
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    if (f != feature) others.push_back(f);
  }
  for (std::size_t size = 0; size <= others.size(); ++size) {
    // Subsets of `others` of the given size, via a selection mask.
    std::vector<bool> pick(others.size(), false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    do {
      std::vector<FeatureIndex> subset;
      for (std::size_t i = 0; i < others.size(); ++i) {
        if (pick[i]) subset.push_back(others[i]);
      }
      Tuple current = original;
      for (const auto f : subset) current[f] = original[f] == 0 ? 1 : 0;
      do {
        if (classifier.label(current) != label) continue;
        Tuple flipped = current;
        for (ValueIndex x = 0; x < schema[feature].domain.size(); ++x) {
          if (x == original[feature]) continue;
          flipped[feature] = x;
          if (classifier.label(flipped) != label) return StrictCause{true, size};
        }
      } while (next_assignment(schema, subset, original, current));
    } while (std::prev_permutation(pick.begin(), pick.end()));
  }
  return StrictCause{};
}

StrictCause strict_actual_cause(const PercentModel& model, const Entity& entity,
                                std::string_view feature) {
  return strict_actual_cause(Classifier::staged(model), entity,
                             model.schema().index_of(feature));
}

std::string format_version(const FeatureSchema& schema, const CounterfactualVersion& version) {
  std::string out = "ent(" + version.eid;
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    out += "," + schema[f].domain[version.values[f]];
  }
  return out + ",s)";
}

std::string format_feature_set(const FeatureSchema& schema,
                               std::span<const FeatureIndex> features) {
  std::vector<std::string> atoms;
  for (const auto f : features) atoms.push_back(schema[f].atom);
  std::sort(atoms.begin(), atoms.end());
  std::string out = "{";
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (i > 0) out += ",";
    out += atoms[i];
  }
  return out + "}";
}

std::string format_explanation(const FeatureSchema& schema, const Explanation& explanation) {
  return explanation.eid + ", " + schema[explanation.cause].atom + ", " +
         std::to_string(explanation.inv_resp) + ", " +
         format_feature_set(schema, explanation.contingency);
}

std::string format_report(const FeatureSchema& schema, const ResponsibilityReport& report) {
  std::string out;
  for (const auto& entry : report) {
    out += schema[entry.feature].name + " " + to_string(entry.x_resp) + "\n";
  }
  return out;
}

}  // namespace cipx
