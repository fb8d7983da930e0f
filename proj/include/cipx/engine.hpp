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

// Counterfactual versions, explanations and responsibility scores.

#ifndef CIPX_ENGINE_HPP_
#define CIPX_ENGINE_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cipx/constraints.hpp"
#include "cipx/naive_bayes.hpp"
#include "cipx/rational.hpp"
#include "cipx/schema.hpp"

namespace cipx {

// A binary labeler over encoded tuples of a fixed schema.
class Classifier {
 public:
  using Labeler = std::function<LabelIndex(std::span<const ValueIndex>)>;

  static Classifier staged(PercentModel model, std::int64_t maxint = kDefaultMaxInt);
  static Classifier exact(NaiveBayesModel model);
  static Classifier custom(FeatureSchema schema, Labels labels, Labeler labeler);

  const FeatureSchema& schema() const noexcept { return *schema_; }
  const Labels& labels() const noexcept { return labels_; }
  LabelIndex label(std::span<const ValueIndex> tuple) const { return labeler_(tuple); }

 private:
  Classifier(std::shared_ptr<const FeatureSchema> schema, Labels labels, Labeler labeler)
      : schema_(std::move(schema)), labels_(std::move(labels)), labeler_(std::move(labeler)) {}

  std::shared_ptr<const FeatureSchema> schema_;
  Labels labels_;
  Labeler labeler_;
};

struct EngineOptions {
  // Only positive-labelled originals are explained, and an original that
  // violates a forbidden combination yields no versions.
  bool strict_paper = false;
  // Lets a path assign a feature more than once.
  bool allow_reintervention = false;
};

struct InterventionStep {
  FeatureIndex feature;
  ValueIndex from;
  ValueIndex to;

  bool operator==(const InterventionStep&) const = default;
};

struct CounterfactualVersion {
  std::string eid;
  Tuple values;                        // final entity
  std::vector<FeatureIndex> changed;   // ascending
  std::vector<InterventionStep> path;  // one shortest path
  std::vector<Tuple> trail;            // state after each step; back() == values
  LabelIndex label;

  bool operator==(const CounterfactualVersion&) const = default;
};

// Breadth-first search from the original: states keeping the original label
// are expanded by every single-feature change, states with the other label
// are reported. Sorted by |changed|, then by the final tuple.
std::vector<CounterfactualVersion> enumerate_counterfactuals(
    const Classifier& classifier, const Entity& entity,
    const ConstraintSet& constraints = {}, const EngineOptions& options = {});
std::vector<CounterfactualVersion> enumerate_counterfactuals(
    const PercentModel& model, const Entity& entity, const ConstraintSet& constraints = {},
    const EngineOptions& options = {});

struct Explanation {
  std::string eid;
  FeatureIndex cause;
  ValueIndex cause_value;                  // value in the original
  std::vector<FeatureIndex> contingency;   // ascending
  int inv_resp;
  Tuple witness;                           // final values of the first supporting version

  bool operator==(const Explanation&) const = default;
};

// One explanation per (cause, contingency) pair, in order of first appearance.
std::vector<Explanation> explanations_of(std::span<const CounterfactualVersion> versions,
                                         const FeatureSchema& schema, const Entity& original);

struct ResponsibilityEntry {
  FeatureIndex feature;
  Rational x_resp;                  // 0 when the feature is never a cause
  std::optional<int> min_inv_resp;
  std::optional<Tuple> witness;
};

using ResponsibilityReport = std::vector<ResponsibilityEntry>;

ResponsibilityReport xresp(std::span<const Explanation> explanations, const FeatureSchema& schema);

// Versions with the fewest changed features.
std::vector<CounterfactualVersion> min_change_versions(
    std::span<const CounterfactualVersion> versions);

struct StrictCause {
  bool is_cause = false;
  std::optional<std::size_t> min_contingency;

  bool operator==(const StrictCause&) const = default;
};

// Exhaustive check of the actual-cause condition: some contingency Y (not
// containing `feature`) with new values Y' keeps the label, while also
// changing `feature` flips it. Path reachability plays no role here.
StrictCause strict_actual_cause(const Classifier& classifier, const Entity& entity,
                                FeatureIndex feature);
StrictCause strict_actual_cause(const PercentModel& model, const Entity& entity,
                                std::string_view feature);

// `ent(e,rain,high,high,weak,s)`
std::string format_version(const FeatureSchema& schema, const CounterfactualVersion& version);
// `{humidity,temp}` from feature atoms, sorted
std::string format_feature_set(const FeatureSchema& schema, std::span<const FeatureIndex> features);
// `e, humidity, 1, {}`
std::string format_explanation(const FeatureSchema& schema, const Explanation& explanation);
// `Humidity 1`, one line per feature
std::string format_report(const FeatureSchema& schema, const ResponsibilityReport& report);

}  // namespace cipx

#endif  // CIPX_ENGINE_HPP_
