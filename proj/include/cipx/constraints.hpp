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

// Domain knowledge that restricts the counterfactual search.

#ifndef CIPX_CONSTRAINTS_HPP_
#define CIPX_CONSTRAINTS_HPP_

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cipx/schema.hpp"

namespace cipx {

// A partial assignment that no intervened entity may match.
struct ForbiddenCombination {
  std::vector<std::pair<FeatureIndex, ValueIndex>> bindings;
};

// target := image[source] after every intervention.
struct FunctionalDependency {
  FeatureIndex source;
  FeatureIndex target;
  std::vector<ValueIndex> image;  // one entry per source domain value
};

class ConstraintSet {
 public:
  ConstraintSet() = default;
  // Validates references against `schema`, totality of each dependency, and
  // rejects cycles, double targets and immutable targets.
  ConstraintSet(FeatureSchema schema, std::vector<ForbiddenCombination> forbidden,
                std::vector<FunctionalDependency> dependencies,
                std::vector<FeatureIndex> immutable);

  bool empty() const noexcept {
    return forbidden_.empty() && dependencies_.empty() && immutable_.empty();
  }
  const FeatureSchema& schema() const noexcept { return schema_; }
  std::span<const ForbiddenCombination> forbidden() const noexcept { return forbidden_; }
  // In application order: topological, stable w.r.t. declaration order.
  std::span<const FunctionalDependency> dependencies() const noexcept { return dependencies_; }
  std::span<const FeatureIndex> immutable() const noexcept { return immutable_; }

  bool is_immutable(FeatureIndex f) const;
  bool is_dependency_target(FeatureIndex f) const;
  // Whether the search may assign `f` a new value directly.
  bool intervenable(FeatureIndex f) const {
    return !is_immutable(f) && !is_dependency_target(f);
  }

  // Returns a copy with one more forbidden combination.
  ConstraintSet with_forbidden(ForbiddenCombination combination) const;

 private:
  FeatureSchema schema_;
  std::vector<ForbiddenCombination> forbidden_;
  std::vector<FunctionalDependency> dependencies_;
  std::vector<FeatureIndex> immutable_;
};

// False iff some forbidden combination is fully matched.
bool admits(const ConstraintSet& constraints, std::span<const ValueIndex> tuple);
bool admits(const ConstraintSet& constraints, const Entity& entity);

// Overwrites every dependency target with the image of its source.
Tuple propagate(const ConstraintSet& constraints, Tuple tuple);
Entity propagate(const ConstraintSet& constraints, const Entity& entity);

// Line-oriented format:
//   forbid F1=v1, F2=v2
//   depend Fsrc -> Ftgt: v1->w1, v2->w2, ...
//   immutable F
// with `%` comments. Features may be named by name or atom.
ConstraintSet parse_constraints(std::string_view text, const FeatureSchema& schema);
ConstraintSet load_constraints(const std::string& path, const FeatureSchema& schema);
std::string format_constraints(const ConstraintSet& constraints);

}  // namespace cipx

#endif  // CIPX_CONSTRAINTS_HPP_
