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

// Categorical feature schemas, entities, and training tables.

#ifndef CIPX_SCHEMA_HPP_
#define CIPX_SCHEMA_HPP_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cipx {

using FeatureIndex = std::size_t;
using ValueIndex = std::size_t;
// An entity encoded as one domain index per feature, in schema order.
using Tuple = std::vector<ValueIndex>;

struct Feature {
  std::string name;
  // Constant naming the feature in generated programs and explanation atoms,
  // e.g. "temp" for Temperature. Defaults to the lowercased name.
  std::string atom;
  std::vector<std::string> domain;

  bool operator==(const Feature&) const = default;
};

// Ordered features with finite domains. Names and atoms are unique, every
// domain holds at least two distinct values. Immutable once built.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  explicit FeatureSchema(std::vector<Feature> features);

  std::size_t size() const noexcept { return features_.size(); }
  bool empty() const noexcept { return features_.empty(); }
  const Feature& operator[](FeatureIndex i) const { return features_.at(i); }
  std::span<const Feature> features() const noexcept { return features_; }

  // Looks a feature up by name, falling back to its atom.
  std::optional<FeatureIndex> find(std::string_view name) const;
  FeatureIndex index_of(std::string_view name) const;  // throws
  std::optional<ValueIndex> find_value(FeatureIndex f, std::string_view v) const;

  Tuple encode(std::span<const std::string> values) const;  // throws
  std::vector<std::string> decode(std::span<const ValueIndex> tuple) const;

  bool operator==(const FeatureSchema&) const = default;

 private:
  std::vector<Feature> features_;
};

struct Entity {
  std::string eid;
  std::vector<std::string> values;

  bool operator==(const Entity&) const = default;
};

// Binds comma-separated values positionally to the schema's features.
Entity parse_entity(std::string_view text, const FeatureSchema& schema,
                    std::string eid = "e");

// Throws unless `entity` has the schema's arity and in-domain values.
void validate_entity(const FeatureSchema& schema, const Entity& entity);

struct DatasetRow {
  std::vector<std::string> values;
  std::string label;

  bool operator==(const DatasetRow&) const = default;
};

struct Dataset {
  FeatureSchema schema;
  std::string class_name;
  std::array<std::string, 2> labels;  // positive label first
  std::vector<DatasetRow> rows;
};

// A schema file: one `Name [as atom]: v1, v2, ...` line per feature and an
// optional `class Name: positive, negative` line fixing the label order.
struct SchemaFile {
  FeatureSchema schema;
  std::optional<std::string> class_name;
  std::optional<std::array<std::string, 2>> labels;
};

SchemaFile parse_schema(std::string_view text);
SchemaFile load_schema(const std::filesystem::path& path);
std::string format_schema(const SchemaFile& schema);

// Reads a comma-separated table whose header names the features and whose
// final column is the class. Without a schema, domains are inferred in
// first-occurrence order; with one, every value is validated against it.
Dataset parse_dataset(std::string_view text,
                      const std::optional<SchemaFile>& schema = std::nullopt);
Dataset load_dataset(const std::filesystem::path& path,
                     const std::optional<SchemaFile>& schema = std::nullopt);
std::string format_dataset(const Dataset& dataset);

}  // namespace cipx

#endif  // CIPX_SCHEMA_HPP_
