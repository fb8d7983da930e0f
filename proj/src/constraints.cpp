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

#include "cipx/constraints.hpp"

#include <algorithm>
#include <optional>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx {
namespace {

constexpr const char* kModule = "constraints";

bool contains(std::span<const FeatureIndex> items, FeatureIndex f) {
  return std::find(items.begin(), items.end(), f) != items.end();
}

// Kahn's algorithm; among ready dependencies the earliest declared goes first.
std::vector<FunctionalDependency> order_dependencies(std::vector<FunctionalDependency> deps,
                                                     const FeatureSchema& schema) {
  std::vector<FunctionalDependency> ordered;
  std::vector<bool> done(deps.size(), false);
  while (ordered.size() < deps.size()) {
    bool progressed = false;
    for (std::size_t i = 0; i < deps.size(); ++i) {
      if (done[i]) continue;
      // Ready when no pending dependency still writes our source.
      const bool ready = std::none_of(deps.begin(), deps.end(), [&](const auto& other) {
        const auto j = static_cast<std::size_t>(&other - deps.data());
        return !done[j] && j != i && other.target == deps[i].source;
      });
      if (!ready) continue;
      done[i] = true;
      ordered.push_back(deps[i]);
      progressed = true;
      break;
    }
    if (!progressed) {
      std::string names;
      for (std::size_t i = 0; i < deps.size(); ++i) {
        if (done[i]) continue;
        if (!names.empty()) names += ", ";
        names += schema[deps[i].source].name + " -> " + schema[deps[i].target].name;
      }
      throw Error(kModule, "cyclic functional dependencies: " + names);
    }
  }
  return ordered;
}

FeatureIndex resolve_feature(const FeatureSchema& schema, std::string_view name,
                             std::size_t line) {
  if (auto f = schema.find(text::trim(name))) return *f;
  throw ParseError(kModule, line, "unknown feature '" + std::string(text::trim(name)) + "'");
}

ValueIndex resolve_value(const FeatureSchema& schema, FeatureIndex f, std::string_view value,
                         std::size_t line) {
  if (auto v = schema.find_value(f, text::trim(value))) return *v;
  throw ParseError(kModule, line,
                   "value '" + std::string(text::trim(value)) + "' is not in the domain of " +
                       schema[f].name);
}

}  // namespace

ConstraintSet::ConstraintSet(FeatureSchema schema, std::vector<ForbiddenCombination> forbidden,
                             std::vector<FunctionalDependency> dependencies,
                             std::vector<FeatureIndex> immutable)
    : schema_(std::move(schema)), forbidden_(std::move(forbidden)), immutable_(std::move(immutable)) {
  const auto check_feature = [&](FeatureIndex f) {
    if (f >= schema_.size()) throw Error(kModule, "feature index out of range");
  };
  const auto check_value = [&](FeatureIndex f, ValueIndex v) {
    check_feature(f);
    if (v >= schema_[f].domain.size()) {
      throw Error(kModule, "value index out of range for " + schema_[f].name);
    }
  };
  for (const auto& combo : forbidden_) {
    if (combo.bindings.empty()) {
      throw Error(kModule, "a forbidden combination needs at least one binding");
    }
    for (const auto& [f, v] : combo.bindings) check_value(f, v);
  }
  std::sort(immutable_.begin(), immutable_.end());
  immutable_.erase(std::unique(immutable_.begin(), immutable_.end()), immutable_.end());
  for (const auto f : immutable_) check_feature(f);

  std::vector<FeatureIndex> targets;
  for (const auto& dep : dependencies) {
    check_feature(dep.source);
    check_feature(dep.target);
    if (dep.source == dep.target) {
      throw Error(kModule, "dependency of " + schema_[dep.source].name + " on itself");
    }
    if (dep.image.size() != schema_[dep.source].domain.size()) {
      throw Error(kModule, "dependency " + schema_[dep.source].name + " -> " +
                               schema_[dep.target].name +
                               " must map every source value");
    }
    for (const auto v : dep.image) check_value(dep.target, v);
    if (contains(targets, dep.target)) {
      throw Error(kModule, schema_[dep.target].name + " is the target of two dependencies");
    }
    if (contains(immutable_, dep.target)) {
      throw Error(kModule, schema_[dep.target].name +
                               " cannot be both immutable and a dependency target");
    }
    targets.push_back(dep.target);
  }
  dependencies_ = order_dependencies(std::move(dependencies), schema_);
}

bool ConstraintSet::is_immutable(FeatureIndex f) const { return contains(immutable_, f); }

bool ConstraintSet::is_dependency_target(FeatureIndex f) const {
  return std::any_of(dependencies_.begin(), dependencies_.end(),
                     [f](const auto& d) { return d.target == f; });
}

ConstraintSet ConstraintSet::with_forbidden(ForbiddenCombination combination) const {
  auto forbidden = forbidden_;
  forbidden.push_back(std::move(combination));
  return ConstraintSet(schema_, std::move(forbidden), dependencies_, immutable_);
}

bool admits(const ConstraintSet& constraints, std::span<const ValueIndex> tuple) {
  for (const auto& combo : constraints.forbidden()) {
    const bool matched = std::all_of(combo.bindings.begin(), combo.bindings.end(),
                                     [&](const auto& b) { return tuple[b.first] == b.second; });
    if (matched) return false;
  }
  return true;
}

bool admits(const ConstraintSet& constraints, const Entity& entity) {
  if (constraints.forbidden().empty()) return true;
  return admits(constraints, constraints.schema().encode(entity.values));
}

Tuple propagate(const ConstraintSet& constraints, Tuple tuple) {
  for (const auto& dep : constraints.dependencies()) {
    tuple[dep.target] = dep.image[tuple[dep.source]];
  }
  return tuple;
}

Entity propagate(const ConstraintSet& constraints, const Entity& entity) {
  if (constraints.dependencies().empty()) return entity;
  const auto& schema = constraints.schema();
  return Entity{entity.eid, schema.decode(propagate(constraints, schema.encode(entity.values)))};
}

ConstraintSet parse_constraints(std::string_view text, const FeatureSchema& schema) {
  std::vector<ForbiddenCombination> forbidden;
  std::vector<FunctionalDependency> dependencies;
  std::vector<FeatureIndex> immutable;
  std::size_t line_no = 0;
  for (const auto raw : text::lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    const auto space = line.find(' ');
    const auto keyword = line.substr(0, space);
    const auto rest = space == std::string_view::npos ? std::string_view{}
                                                      : text::trim(line.substr(space + 1));
    if (keyword == "forbid") {
      ForbiddenCombination combo;
      for (const auto& binding : text::split(rest, ',')) {
        const auto eq = binding.find('=');
        if (eq == std::string::npos) {
          throw ParseError(kModule, line_no, "expected 'Feature=value' in forbid");
        }
        const auto f = resolve_feature(schema, std::string_view(binding).substr(0, eq), line_no);
        combo.bindings.emplace_back(
            f, resolve_value(schema, f, std::string_view(binding).substr(eq + 1), line_no));
      }
      forbidden.push_back(std::move(combo));
    } else if (keyword == "depend") {
      const auto arrow = rest.find("->");
      const auto colon = rest.find(':');
      if (arrow == std::string_view::npos || colon == std::string_view::npos || colon < arrow) {
        throw ParseError(kModule, line_no, "expected 'depend Src -> Tgt: v->w, ...'");
      }
      FunctionalDependency dep;
      dep.source = resolve_feature(schema, rest.substr(0, arrow), line_no);
      dep.target = resolve_feature(schema, rest.substr(arrow + 2, colon - arrow - 2), line_no);
      std::vector<std::optional<ValueIndex>> image(schema[dep.source].domain.size());
      for (const auto& pair : text::split(rest.substr(colon + 1), ',')) {
        const auto map = pair.find("->");
        if (map == std::string::npos) {
          throw ParseError(kModule, line_no, "expected 'value->value' in depend");
        }
        const auto from =
            resolve_value(schema, dep.source, std::string_view(pair).substr(0, map), line_no);
        const auto to =
            resolve_value(schema, dep.target, std::string_view(pair).substr(map + 2), line_no);
        if (image[from]) throw ParseError(kModule, line_no, "source value mapped twice");
        image[from] = to;
      }
      for (ValueIndex v = 0; v < image.size(); ++v) {
        if (!image[v]) {
          throw ParseError(kModule, line_no,
                           "dependency does not map " + schema[dep.source].domain[v]);
        }
        dep.image.push_back(*image[v]);
      }
      dependencies.push_back(std::move(dep));
    } else if (keyword == "immutable") {
      for (const auto& name : text::split(rest, ',')) {
        immutable.push_back(resolve_feature(schema, name, line_no));
      }
    } else {
      throw ParseError(kModule, line_no, "unknown directive '" + std::string(keyword) + "'");
    }
  }
  return ConstraintSet(schema, std::move(forbidden), std::move(dependencies),
                       std::move(immutable));
}

ConstraintSet load_constraints(const std::string& path, const FeatureSchema& schema) {
  return parse_constraints(text::read_file(path, kModule), schema);
}

std::string format_constraints(const ConstraintSet& constraints) {
  const auto& schema = constraints.schema();
  std::string out;
  for (const auto& combo : constraints.forbidden()) {
    out += "forbid ";
    for (std::size_t i = 0; i < combo.bindings.size(); ++i) {
      const auto [f, v] = combo.bindings[i];
      if (i > 0) out += ", ";
      out += schema[f].name + "=" + schema[f].domain[v];
    }
    out += "\n";
  }
  for (const auto& dep : constraints.dependencies()) {
    out += "depend " + schema[dep.source].name + " -> " + schema[dep.target].name + ":";
    for (ValueIndex v = 0; v < dep.image.size(); ++v) {
      out += (v == 0 ? " " : ", ") + schema[dep.source].domain[v] + "->" +
             schema[dep.target].domain[dep.image[v]];
    }
    out += "\n";
  }
  for (const auto f : constraints.immutable()) out += "immutable " + schema[f].name + "\n";
  return out;
}

}  // namespace cipx
