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

// Writes counterfactual intervention programs in DLV-Complex syntax, and
// reads their fact section back.

#ifndef CIPX_EMITTER_HPP_
#define CIPX_EMITTER_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cipx/constraints.hpp"
#include "cipx/naive_bayes.hpp"
#include "cipx/schema.hpp"

namespace cipx::dlv {

struct EmitterOptions {
  bool include_weak_constraints = false;
  // Forbidden combinations and dependency rules from the ConstraintSet.
  bool include_domain_rules = true;
  std::int64_t maxint = kDefaultMaxInt;
};

// Shortest prefix of each lowercased feature name that no other name
// shares, e.g. "o" for Outlook. Throws when one name is a prefix of another.
std::vector<std::string> predicate_suffixes(const FeatureSchema& schema);

// The program explains a flip away from the entity's staged label.
std::string emit_cip(const PercentModel& model, const Entity& entity,
                     const ConstraintSet& constraints = {}, const EmitterOptions& options = {});

struct CipFacts {
  PercentModel model;
  Entity entity;
  std::int64_t maxint;
  bool has_weak_constraints;
};

// Recovers domains, percentages, the original entity and the feature atoms
// (from the expl rules). Constraints are not recovered.
CipFacts parse_facts(std::string_view program);

}  // namespace cipx::dlv

#endif  // CIPX_EMITTER_HPP_
