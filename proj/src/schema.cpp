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

#include "cipx/schema.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx {
namespace {

constexpr const char* kModule = "schema";

std::string join(std::span<const std::string> items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

// Parses `Name [as atom]: v1, v2, ...`.
Feature parse_feature_line(std::string_view line, std::size_t line_no) {
  const auto colon = line.find(':');
  if (colon == std::string_view::npos) {
    throw ParseError(kModule, line_no, "expected 'Name: value, ...'");
  }
  const auto lhs = text::trim(line.substr(0, colon));
  Feature feature;
  const auto as = lhs.find(" as ");
  if (as == std::string_view::npos) {
    feature.name = std::string(lhs);
  } else {
    feature.name = std::string(text::trim(lhs.substr(0, as)));
    feature.atom = std::string(text::trim(lhs.substr(as + 4)));
  }
  feature.domain = text::split(line.substr(colon + 1), ',');
  return feature;
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<Feature> features)
    : features_(std::move(features)) {
  std::set<std::string> names;
  std::set<std::string> atoms;
  for (auto& f : features_) {
    if (f.name.empty()) throw Error(kModule, "feature names must be non-empty");
    if (f.name.find_first_of(",:%") != std::string::npos) {
      throw Error(kModule, "feature name '" + f.name + "' contains a reserved character");
    }
    if (f.atom.empty()) f.atom = text::lower(f.name);
    if (!names.insert(f.name).second) {
      throw Error(kModule, "duplicate feature name '" + f.name + "'");
    }
    if (!atoms.insert(f.atom).second) {
      throw Error(kModule, "duplicate feature atom '" + f.atom + "'");
    }
    std::set<std::string> seen;
    for (const auto& v : f.domain) {
      if (v.empty()) throw Error(kModule, "empty value in domain of " + f.name);
      if (!seen.insert(v).second) {
        throw Error(kModule, "duplicate value '" + v + "' in domain of " + f.name);
      }
    }
    if (f.domain.size() < 2) {
      throw Error(kModule, "feature " + f.name + " needs at least 2 domain values");
    }
  }
}

std::optional<FeatureIndex> FeatureSchema::find(std::string_view name) const {
  for (FeatureIndex i = 0; i < features_.size(); ++i) {
    if (features_[i].name == name) return i;
  }
  for (FeatureIndex i = 0; i < features_.size(); ++i) {
    if (features_[i].atom == name) return i;
  }
  return std::nullopt;
}

FeatureIndex FeatureSchema::index_of(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw Error(kModule, "unknown feature '" + std::string(name) + "'");
}

std::optional<ValueIndex> FeatureSchema::find_value(FeatureIndex f,
                                                    std::string_view v) const {
  const auto& domain = features_.at(f).domain;
  const auto it = std::find(domain.begin(), domain.end(), v);
  if (it == domain.end()) return std::nullopt;
  return static_cast<ValueIndex>(it - domain.begin());
}

Tuple FeatureSchema::encode(std::span<const std::string> values) const {
  if (values.size() != features_.size()) {
    throw Error(kModule, "expected " + std::to_string(features_.size()) +
                             " values, got " + std::to_string(values.size()));
  }
  Tuple tuple(values.size());
  for (FeatureIndex f = 0; f < values.size(); ++f) {
    const auto v = find_value(f, values[f]);
    if (!v) {
      throw Error(kModule, "value '" + values[f] + "' is not in the domain of " +
                               features_[f].name);
    }
    tuple[f] = *v;
  }
  return tuple;
}

std::vector<std::string> FeatureSchema::decode(std::span<const ValueIndex> tuple) const {
  std::vector<std::string> values;
  values.reserve(tuple.size());
  for (FeatureIndex f = 0; f < tuple.size(); ++f) {
    values.push_back(features_.at(f).domain.at(tuple[f]));
  }
  return values;
}

Entity parse_entity(std::string_view text, const FeatureSchema& schema,
                    std::string eid) {
  Entity entity{std::move(eid), text::split(text, ',')};
  validate_entity(schema, entity);
  return entity;
}

void validate_entity(const FeatureSchema& schema, const Entity& entity) {
  (void)schema.encode(entity.values);
}

SchemaFile parse_schema(std::string_view text) {
  SchemaFile out;
  std::vector<Feature> features;
  std::size_t line_no = 0;
  for (const auto raw : text::lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    if (line.starts_with("class ")) {
      const auto f = parse_feature_line(line.substr(6), line_no);
      if (f.domain.size() != 2) {
        throw ParseError(kModule, line_no, "class line must list exactly two labels");
      }
      if (f.domain[0] == f.domain[1] || f.domain[0].empty()) {
        throw ParseError(kModule, line_no, "class labels must be distinct and non-empty");
      }
      out.class_name = f.name;
      out.labels = std::array<std::string, 2>{f.domain[0], f.domain[1]};
      continue;
    }
    features.push_back(parse_feature_line(line, line_no));
  }
  out.schema = FeatureSchema(std::move(features));
  return out;
}

SchemaFile load_schema(const std::filesystem::path& path) {
  return parse_schema(text::read_file(path.string(), kModule));
}

std::string format_schema(const SchemaFile& schema) {
  std::string out;
  for (const auto& f : schema.schema.features()) {
    out += f.name;
    if (f.atom != text::lower(f.name)) out += " as " + f.atom;
    out += ": " + join(f.domain, ", ") + "\n";
  }
  if (schema.labels) {
    out += "class " + schema.class_name.value_or("class") + ": " +
           (*schema.labels)[0] + ", " + (*schema.labels)[1] + "\n";
  }
  return out;
}

Dataset parse_dataset(std::string_view text, const std::optional<SchemaFile>& schema) {
  const auto all_lines = text::lines(text);
  std::size_t line_no = 0;
  std::vector<std::string> header;
  std::vector<std::pair<std::size_t, std::vector<std::string>>> records;
  for (const auto raw : all_lines) {
    ++line_no;
    if (text::trim(raw).empty()) continue;
    auto fields = text::split(raw, ',');
    if (header.empty()) {
      header = std::move(fields);
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(kModule, line_no,
                       "ragged row: expected " + std::to_string(header.size()) +
                           " fields, got " + std::to_string(fields.size()));
    }
    records.emplace_back(line_no, std::move(fields));
  }
  if (header.size() < 2) {
    throw Error(kModule, "dataset needs a header naming at least one feature and the class");
  }
  const std::size_t arity = header.size() - 1;

  Dataset data;
  data.class_name = header.back();
  std::vector<std::string> observed_labels;
  for (const auto& [_, fields] : records) {
    if (std::find(observed_labels.begin(), observed_labels.end(), fields.back()) ==
        observed_labels.end()) {
      observed_labels.push_back(fields.back());
    }
  }

  if (schema) {
    const auto& s = schema->schema;
    if (s.size() != arity) {
      throw Error(kModule, "header has " + std::to_string(arity) +
                               " features but the schema has " + std::to_string(s.size()));
    }
    for (FeatureIndex f = 0; f < arity; ++f) {
      if (header[f] != s[f].name) {
        throw Error(kModule, "header column " + std::to_string(f + 1) + " is '" +
                                 header[f] + "', schema expects '" + s[f].name + "'");
      }
    }
    if (schema->class_name && *schema->class_name != data.class_name) {
      throw Error(kModule, "class column is '" + data.class_name + "', schema expects '" +
                               *schema->class_name + "'");
    }
    data.schema = s;
    for (const auto& [row_line, fields] : records) {
      for (FeatureIndex f = 0; f < arity; ++f) {
        if (!s.find_value(f, fields[f])) {
          throw ParseError(kModule, row_line,
                           "value '" + fields[f] + "' is not in the domain of " + s[f].name);
        }
      }
    }
  } else {
    std::vector<Feature> features(arity);
    for (FeatureIndex f = 0; f < arity; ++f) features[f].name = header[f];
    for (const auto& [_, fields] : records) {
      for (FeatureIndex f = 0; f < arity; ++f) {
        auto& domain = features[f].domain;
        if (std::find(domain.begin(), domain.end(), fields[f]) == domain.end()) {
          domain.push_back(fields[f]);
        }
      }
    }
    if (observed_labels.size() >= 2) data.schema = FeatureSchema(std::move(features));
  }

  if (observed_labels.size() < 2) {
    throw Error(kModule, "fewer than 2 class labels observed in the data");
  }
  if (observed_labels.size() > 2) {
    throw Error(kModule, "more than 2 class labels observed: " + join(observed_labels, ", "));
  }
  if (schema && schema->labels) {
    data.labels = *schema->labels;
    for (const auto& l : observed_labels) {
      if (l != data.labels[0] && l != data.labels[1]) {
        throw Error(kModule, "label '" + l + "' is not declared in the schema");
      }
    }
  } else {
    auto positive = observed_labels[0];
    for (const char* preferred : {"yes", "true", "1"}) {
      if (std::find(observed_labels.begin(), observed_labels.end(), preferred) !=
          observed_labels.end()) {
        positive = preferred;
        break;
      }
    }
    const auto& negative =
        observed_labels[0] == positive ? observed_labels[1] : observed_labels[0];
    data.labels = {positive, negative};
  }

  data.rows.reserve(records.size());
  for (auto& [_, fields] : records) {
    DatasetRow row;
    row.label = fields.back();
    fields.pop_back();
    row.values = std::move(fields);
    data.rows.push_back(std::move(row));
  }
  return data;
}

Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<SchemaFile>& schema) {
  return parse_dataset(text::read_file(path.string(), kModule), schema);
}

std::string format_dataset(const Dataset& dataset) {
  std::string out;
  for (const auto& f : dataset.schema.features()) out += f.name + ",";
  out += dataset.class_name + "\n";
  for (const auto& row : dataset.rows) {
    out += join(row.values, ",") + "," + row.label + "\n";
  }
  return out;
}

}  // namespace cipx
