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

// Naive-Bayes classification over categorical features, both with exact
// rationals and with the staged integer-percentage arithmetic used by the
// generated ASP programs.

#ifndef CIPX_NAIVE_BAYES_HPP_
#define CIPX_NAIVE_BAYES_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cipx/rational.hpp"
#include "cipx/schema.hpp"

namespace cipx {

// 0 is the positive label (e.g. "yes"), 1 the negative one.
using LabelIndex = std::size_t;
using Labels = std::array<std::string, 2>;

inline constexpr std::int64_t kDefaultMaxInt = 100'000'000;

// Indexed [feature][value][label].
template <typename T>
using ConditionalTable = std::vector<std::vector<std::array<T, 2>>>;

class NaiveBayesModel {
 public:
  // Validates that priors and every per-label conditional distribution sum
  // to exactly one.
  NaiveBayesModel(FeatureSchema schema, Labels labels, std::array<Rational, 2> prior,
                  ConditionalTable<Rational> conditional);

  const FeatureSchema& schema() const noexcept { return schema_; }
  const Labels& labels() const noexcept { return labels_; }
  LabelIndex label_index(std::string_view label) const;

  const Rational& prior(LabelIndex l) const { return prior_.at(l); }
  const Rational& conditional(FeatureIndex f, ValueIndex v, LabelIndex l) const {
    return conditional_.at(f).at(v).at(l);
  }
  const Rational& conditional(std::string_view feature, std::string_view value,
                              std::string_view label) const;

 private:
  FeatureSchema schema_;
  Labels labels_;
  std::array<Rational, 2> prior_;
  ConditionalTable<Rational> conditional_;
};

// Same layout with integer percentages; each distribution sums to 100.
class PercentModel {
 public:
  PercentModel(FeatureSchema schema, Labels labels, std::array<int, 2> prior,
               ConditionalTable<int> conditional);

  const FeatureSchema& schema() const noexcept { return schema_; }
  const Labels& labels() const noexcept { return labels_; }
  LabelIndex label_index(std::string_view label) const;

  int prior(LabelIndex l) const { return prior_.at(l); }
  int conditional(FeatureIndex f, ValueIndex v, LabelIndex l) const {
    return conditional_.at(f).at(v).at(l);
  }
  int conditional(std::string_view feature, std::string_view value,
                  std::string_view label) const;

 private:
  FeatureSchema schema_;
  Labels labels_;
  std::array<int, 2> prior_;
  ConditionalTable<int> conditional_;
};

NaiveBayesModel train(const Dataset& dataset);

// Largest-remainder rounding of a distribution to integer percentages:
// floors of value*100, then the missing units go to the largest fractional
// parts, ties broken by position.
std::vector<int> largest_remainder_percent(std::span<const Rational> distribution);

PercentModel to_percent(const NaiveBayesModel& model);

struct ExactClassification {
  LabelIndex label;
  std::array<Rational, 2> numerator;  // prior times the product of conditionals
};

// The larger numerator wins; a tie goes to the positive label.
ExactClassification classify_exact(const NaiveBayesModel& model, std::span<const ValueIndex> tuple);
ExactClassification classify_exact(const NaiveBayesModel& model, const Entity& entity);

struct StagedClassification {
  LabelIndex label;
  std::array<std::int64_t, 2> numerator;
};

// Folds conditional percentages in schema order, dividing by 10 after each
// multiplication, then multiplies by the prior and divides by 10 again.
// Positive wins when its numerator is >= the negative one. Throws when an
// intermediate product exceeds `maxint`.
StagedClassification classify_staged(const PercentModel& model, std::span<const ValueIndex> tuple,
                                     std::int64_t maxint = kDefaultMaxInt);
StagedClassification classify_staged(const PercentModel& model, const Entity& entity,
                                     std::int64_t maxint = kDefaultMaxInt);

// Plain-text persistence: schema lines, labels, priors and one
// `feature,value,label,n/d` line per conditional.
std::string format_model(const NaiveBayesModel& model);
NaiveBayesModel parse_model(std::string_view text);
NaiveBayesModel load_model(const std::string& path);

}  // namespace cipx

#endif  // CIPX_NAIVE_BAYES_HPP_
