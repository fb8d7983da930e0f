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

#include "cipx/naive_bayes.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx {
namespace {

constexpr const char* kModule = "naive_bayes";

using boost::multiprecision::cpp_int;

LabelIndex find_label(const Labels& labels, std::string_view label) {
  if (labels[0] == label) return 0;
  if (labels[1] == label) return 1;
  throw Error(kModule, "unknown label '" + std::string(label) + "'");
}

void check_labels(const Labels& labels) {
  if (labels[0].empty() || labels[1].empty() || labels[0] == labels[1]) {
    throw Error(kModule, "a model needs two distinct non-empty labels");
  }
}

template <typename T>
void check_shape(const FeatureSchema& schema, const ConditionalTable<T>& table) {
  if (table.size() != schema.size()) {
    throw Error(kModule, "conditional table does not match the schema arity");
  }
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    if (table[f].size() != schema[f].domain.size()) {
      throw Error(kModule, "conditional table for " + schema[f].name +
                               " does not match its domain");
    }
  }
}

}  // namespace

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

std::string to_fraction(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" +
         boost::multiprecision::denominator(r).str();
}

Rational parse_rational(std::string_view text) {
  const auto s = text::trim(text);
  const auto slash = s.find('/');
  const auto num = text::parse_int(s.substr(0, slash));
  if (!num) throw Error(kModule, "malformed rational '" + std::string(s) + "'");
  if (slash == std::string_view::npos) return Rational(*num);
  const auto den = text::parse_int(s.substr(slash + 1));
  if (!den || *den == 0) throw Error(kModule, "malformed rational '" + std::string(s) + "'");
  return Rational(cpp_int(*num), cpp_int(*den));
}

NaiveBayesModel::NaiveBayesModel(FeatureSchema schema, Labels labels,
                                 std::array<Rational, 2> prior,
                                 ConditionalTable<Rational> conditional)
    : schema_(std::move(schema)),
      labels_(std::move(labels)),
      prior_(std::move(prior)),
      conditional_(std::move(conditional)) {
  check_labels(labels_);
  check_shape(schema_, conditional_);
  const auto in_unit = [](const Rational& p) { return p >= 0 && p <= 1; };
  if (!in_unit(prior_[0]) || !in_unit(prior_[1]) || prior_[0] + prior_[1] != 1) {
    throw Error(kModule, "priors must lie in [0,1] and sum to 1");
  }
  for (FeatureIndex f = 0; f < schema_.size(); ++f) {
    for (LabelIndex l = 0; l < 2; ++l) {
      Rational sum = 0;
      for (const auto& row : conditional_[f]) {
        if (!in_unit(row[l])) throw Error(kModule, "probability outside [0,1]");
        sum += row[l];
      }
      if (sum != 1) {
        throw Error(kModule, "conditionals of " + schema_[f].name + " given " +
                                 labels_[l] + " sum to " + to_string(sum));
      }
    }
  }
}

LabelIndex NaiveBayesModel::label_index(std::string_view label) const {
  return find_label(labels_, label);
}

const Rational& NaiveBayesModel::conditional(std::string_view feature,
                                             std::string_view value,
                                             std::string_view label) const {
  const auto f = schema_.index_of(feature);
  const auto v = schema_.find_value(f, value);
  if (!v) throw Error(kModule, "value '" + std::string(value) + "' not in domain");
  return conditional(f, *v, label_index(label));
}

PercentModel::PercentModel(FeatureSchema schema, Labels labels, std::array<int, 2> prior,
                           ConditionalTable<int> conditional)
    : schema_(std::move(schema)),
      labels_(std::move(labels)),
      prior_(prior),
      conditional_(std::move(conditional)) {
  check_labels(labels_);
  check_shape(schema_, conditional_);
  const auto in_range = [](int p) { return p >= 0 && p <= 100; };
  if (!in_range(prior_[0]) || !in_range(prior_[1]) || prior_[0] + prior_[1] != 100) {
    throw Error(kModule, "prior percentages must sum to 100");
  }
  for (FeatureIndex f = 0; f < schema_.size(); ++f) {
    for (LabelIndex l = 0; l < 2; ++l) {
      int sum = 0;
      for (const auto& row : conditional_[f]) {
        if (!in_range(row[l])) throw Error(kModule, "percentage outside [0,100]");
        sum += row[l];
      }
      if (sum != 100) {
        throw Error(kModule, "percentages of " + schema_[f].name + " given " +
                                 labels_[l] + " sum to " + std::to_string(sum));
      }
    }
  }
}

LabelIndex PercentModel::label_index(std::string_view label) const {
  return find_label(labels_, label);
}

int PercentModel::conditional(std::string_view feature, std::string_view value,
                              std::string_view label) const {
  const auto f = schema_.index_of(feature);
  const auto v = schema_.find_value(f, value);
  if (!v) throw Error(kModule, "value '" + std::string(value) + "' not in domain");
  return conditional(f, *v, label_index(label));
}

NaiveBayesModel train(const Dataset& dataset) {
  const auto& schema = dataset.schema;
  std::array<std::int64_t, 2> label_count{0, 0};
  std::vector<std::vector<std::array<std::int64_t, 2>>> counts(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    counts[f].assign(schema[f].domain.size(), {0, 0});
  }
  for (const auto& row : dataset.rows) {
    const auto l = find_label(dataset.labels, row.label);
    const auto tuple = schema.encode(row.values);
    ++label_count[l];
    for (FeatureIndex f = 0; f < tuple.size(); ++f) ++counts[f][tuple[f]][l];
  }
  for (LabelIndex l = 0; l < 2; ++l) {
    if (label_count[l] == 0) {
      throw Error(kModule, "no training rows carry label '" + dataset.labels[l] + "'");
    }
  }
  const auto total = label_count[0] + label_count[1];
  std::array<Rational, 2> prior{Rational(cpp_int(label_count[0]), cpp_int(total)),
                                Rational(cpp_int(label_count[1]), cpp_int(total))};
  ConditionalTable<Rational> conditional(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    for (const auto& c : counts[f]) {
      conditional[f].push_back({Rational(cpp_int(c[0]), cpp_int(label_count[0])),
                                Rational(cpp_int(c[1]), cpp_int(label_count[1]))});
    }
  }
  return NaiveBayesModel(schema, dataset.labels, std::move(prior), std::move(conditional));
}

std::vector<int> largest_remainder_percent(std::span<const Rational> distribution) {
  const auto n = distribution.size();
  std::vector<int> out(n);
  std::vector<Rational> remainder(n);
  int assigned = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Rational scaled = distribution[i] * 100;
    const cpp_int floor = boost::multiprecision::numerator(scaled) /
                          boost::multiprecision::denominator(scaled);
    out[i] = floor.convert_to<int>();
    remainder[i] = scaled - Rational(floor);
    assigned += out[i];
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainder[a] > remainder[b];
  });
  for (std::size_t k = 0; assigned < 100 && k < n; ++k, ++assigned) ++out[order[k]];
  return out;
}

PercentModel to_percent(const NaiveBayesModel& model) {
  const auto& schema = model.schema();
  const std::array<Rational, 2> prior{model.prior(0), model.prior(1)};
  const auto prior_pct = largest_remainder_percent(prior);
  ConditionalTable<int> conditional(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    const auto size = schema[f].domain.size();
    conditional[f].assign(size, {0, 0});
    for (LabelIndex l = 0; l < 2; ++l) {
      std::vector<Rational> dist(size);
      for (ValueIndex v = 0; v < size; ++v) dist[v] = model.conditional(f, v, l);
      const auto pct = largest_remainder_percent(dist);
      for (ValueIndex v = 0; v < size; ++v) conditional[f][v][l] = pct[v];
    }
  }
  return PercentModel(schema, model.labels(), {prior_pct[0], prior_pct[1]},
                      std::move(conditional));
}

ExactClassification classify_exact(const NaiveBayesModel& model,
                                   std::span<const ValueIndex> tuple) {
  ExactClassification out;
  for (LabelIndex l = 0; l < 2; ++l) {
    Rational num = model.prior(l);
    for (FeatureIndex f = 0; f < tuple.size(); ++f) num *= model.conditional(f, tuple[f], l);
    out.numerator[l] = num;
  }
  out.label = out.numerator[0] >= out.numerator[1] ? 0 : 1;
  return out;
}

ExactClassification classify_exact(const NaiveBayesModel& model, const Entity& entity) {
  return classify_exact(model, model.schema().encode(entity.values));
}

StagedClassification classify_staged(const PercentModel& model,
                                     std::span<const ValueIndex> tuple,
                                     std::int64_t maxint) {
  if (tuple.empty()) throw Error(kModule, "cannot classify an entity without features");
  const auto step = [maxint](std::int64_t acc, std::int64_t factor) {
    const auto product = acc * factor;
    if (product > maxint) {
      throw Error(kModule, "intermediate product " + std::to_string(product) +
                               " exceeds the integer ceiling " + std::to_string(maxint));
    }
    return product / 10;
  };
  StagedClassification out;
  for (LabelIndex l = 0; l < 2; ++l) {
    std::int64_t acc = model.conditional(0, tuple[0], l);
    for (FeatureIndex f = 1; f < tuple.size(); ++f) {
      acc = step(acc, model.conditional(f, tuple[f], l));
    }
    out.numerator[l] = step(acc, model.prior(l));
  }
  out.label = out.numerator[0] >= out.numerator[1] ? 0 : 1;
  return out;
}

StagedClassification classify_staged(const PercentModel& model, const Entity& entity,
                                     std::int64_t maxint) {
  return classify_staged(model, model.schema().encode(entity.values), maxint);
}

std::string format_model(const NaiveBayesModel& model) {
  const auto& schema = model.schema();
  std::string out = "% naive-Bayes model\n";
  SchemaFile sf{schema, std::nullopt, std::nullopt};
  const auto schema_text = format_schema(sf);
  for (const auto line : text::lines(schema_text)) {
    out += "feature " + std::string(line) + "\n";
  }
  const auto& labels = model.labels();
  out += "labels " + labels[0] + ", " + labels[1] + "\n";
  for (LabelIndex l = 0; l < 2; ++l) {
    out += "prior " + labels[l] + " " + to_fraction(model.prior(l)) + "\n";
  }
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    for (LabelIndex l = 0; l < 2; ++l) {
      for (ValueIndex v = 0; v < schema[f].domain.size(); ++v) {
        out += schema[f].name + "," + schema[f].domain[v] + "," + labels[l] + "," +
               to_fraction(model.conditional(f, v, l)) + "\n";
      }
    }
  }
  return out;
}

NaiveBayesModel parse_model(std::string_view text) {
  std::string schema_text;
  std::optional<Labels> labels;
  std::vector<std::pair<std::string, std::string>> priors;
  struct Cond {
    std::size_t line;
    std::vector<std::string> fields;
  };
  std::vector<Cond> conds;
  std::size_t line_no = 0;
  for (const auto raw : text::lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    if (line.starts_with("feature ")) {
      schema_text += std::string(line.substr(8)) + "\n";
    } else if (line.starts_with("labels ")) {
      auto parts = text::split(line.substr(7), ',');
      if (parts.size() != 2) throw ParseError(kModule, line_no, "expected two labels");
      labels = Labels{parts[0], parts[1]};
    } else if (line.starts_with("prior ")) {
      const auto rest = text::trim(line.substr(6));
      const auto space = rest.find(' ');
      if (space == std::string_view::npos) {
        throw ParseError(kModule, line_no, "expected 'prior <label> <n/d>'");
      }
      priors.emplace_back(std::string(rest.substr(0, space)),
                          std::string(text::trim(rest.substr(space + 1))));
    } else {
      auto fields = text::split(line, ',');
      if (fields.size() != 4) {
        throw ParseError(kModule, line_no, "expected 'feature,value,label,n/d'");
      }
      conds.push_back({line_no, std::move(fields)});
    }
  }
  if (!labels) throw Error(kModule, "model file lacks a 'labels' line");
  auto schema = parse_schema(schema_text).schema;

  std::array<std::optional<Rational>, 2> prior;
  for (const auto& [label, value] : priors) {
    prior[find_label(*labels, label)] = parse_rational(value);
  }
  if (!prior[0] || !prior[1]) throw Error(kModule, "model file lacks a prior");

  std::vector<std::vector<std::array<std::optional<Rational>, 2>>> table(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) table[f].resize(schema[f].domain.size());
  for (const auto& c : conds) {
    const auto f = schema.find(c.fields[0]);
    if (!f) throw ParseError(kModule, c.line, "unknown feature '" + c.fields[0] + "'");
    const auto v = schema.find_value(*f, c.fields[1]);
    if (!v) throw ParseError(kModule, c.line, "unknown value '" + c.fields[1] + "'");
    auto& slot = table[*f][*v][find_label(*labels, c.fields[2])];
    if (slot) throw ParseError(kModule, c.line, "duplicate conditional");
    slot = parse_rational(c.fields[3]);
  }
  ConditionalTable<Rational> conditional(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    for (ValueIndex v = 0; v < table[f].size(); ++v) {
      const auto& row = table[f][v];
      if (!row[0] || !row[1]) {
        throw Error(kModule, "missing conditional for " + schema[f].name + "=" +
                                 schema[f].domain[v]);
      }
      conditional[f].push_back({*row[0], *row[1]});
    }
  }
  return NaiveBayesModel(std::move(schema), *labels, {*prior[0], *prior[1]},
                         std::move(conditional));
}

NaiveBayesModel load_model(const std::string& path) {
  return parse_model(text::read_file(path, kModule));
}

}  // namespace cipx
