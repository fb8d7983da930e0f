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

// cipx: train naive-Bayes models, enumerate counterfactual versions, score
// responsibility, answer queries and emit DLV programs.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "cipx/asp.hpp"
#include "cipx/constraints.hpp"
#include "cipx/emitter.hpp"
#include "cipx/engine.hpp"
#include "cipx/error.hpp"
#include "cipx/naive_bayes.hpp"
#include "cipx/query.hpp"
#include "cipx/schema.hpp"

namespace {

struct ModelSource {
  std::string data;
  std::string schema;
  std::string model;
};

struct EntityOptions {
  std::string entity;
  std::string eid = "e";
  std::string constraints;
  std::string mode = "staged";
  std::int64_t maxint = cipx::kDefaultMaxInt;
  bool strict_paper = false;
  bool allow_reintervention = false;
};

void add_source(CLI::App* cmd, ModelSource& src) {
  auto* data = cmd->add_option("--data", src.data, "training table (CSV)");
  auto* model = cmd->add_option("--model", src.model, "model file written by train");
  cmd->add_option("--schema", src.schema, "schema file fixing domains and label order")
      ->needs(data);
  data->excludes(model);
  cmd->callback([cmd, data, model] {
    if (data->count() == 0 && model->count() == 0) {
      throw CLI::RequiredError(cmd->get_name() + ": one of --data, --model");
    }
  });
}

void add_entity(CLI::App* cmd, EntityOptions& opt, bool engine) {
  cmd->add_option("--entity", opt.entity, "comma-separated feature values")->required();
  cmd->add_option("--eid", opt.eid, "entity identifier")->capture_default_str();
  cmd->add_option("--maxint", opt.maxint, "bound on staged intermediate products")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  if (!engine) return;
  cmd->add_option("--constraints", opt.constraints, "constraints file");
  cmd->add_option("--mode", opt.mode, "classifier arithmetic")
      ->check(CLI::IsMember({"staged", "exact"}))
      ->capture_default_str();
  cmd->add_flag("--strict-paper", opt.strict_paper,
                "explain positive entities only and apply constraints to the original");
  cmd->add_flag("--allow-reintervention", opt.allow_reintervention,
                "let a path change the same feature more than once");
}

cipx::NaiveBayesModel load(const ModelSource& src) {
  if (!src.model.empty()) return cipx::load_model(src.model);
  std::optional<cipx::SchemaFile> schema;
  if (!src.schema.empty()) schema = cipx::load_schema(src.schema);
  return cipx::train(cipx::load_dataset(src.data, schema));
}

cipx::Classifier classifier(const cipx::NaiveBayesModel& model, const EntityOptions& opt) {
  if (opt.mode == "exact") return cipx::Classifier::exact(model);
  return cipx::Classifier::staged(cipx::to_percent(model), opt.maxint);
}

cipx::ConstraintSet constraints(const cipx::FeatureSchema& schema, const EntityOptions& opt) {
  if (opt.constraints.empty()) return {};
  return cipx::load_constraints(opt.constraints, schema);
}

void write(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw cipx::Error("cli", "cannot write " + path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual explanations for naive-Bayes classifiers"};
  app.require_subcommand(1);

  ModelSource src;
  EntityOptions opt;
  std::string out_path;

  auto* train = app.add_subcommand("train", "train a model and write it");
  train->add_option("--data", src.data, "training table (CSV)")->required();
  train->add_option("--schema", src.schema, "schema file");
  train->add_option("--out", out_path, "model file (default: stdout)");

  auto* classify = app.add_subcommand("classify", "label an entity, with both numerators");
  add_source(classify, src);
  add_entity(classify, opt, false);

  bool min_change = false;
  auto* counterfactuals =
      app.add_subcommand("counterfactuals", "list counterfactual versions of an entity");
  add_source(counterfactuals, src);
  add_entity(counterfactuals, opt, true);
  counterfactuals->add_flag("--min-change", min_change, "keep only minimum-change versions");

  auto* explain = app.add_subcommand("explain", "responsibility scores and explanations");
  add_source(explain, src);
  add_entity(explain, opt, true);

  std::string query_file;
  bool brave = false;
  bool cautious = false;
  bool no_pb_num = false;
  auto* query = app.add_subcommand("query", "answer queries over the counterfactual models");
  add_source(query, src);
  add_entity(query, opt, true);
  query->add_option("queries", query_file, "query file, one query per line")->required();
  auto* brave_flag = query->add_flag("--brave", brave, "true in some model (default)");
  query->add_flag("--cautious", cautious, "true in every model")->excludes(brave_flag);
  query->add_flag("--no-pb-num", no_pb_num, "leave pb_num atoms out of the models");

  bool weak = false;
  bool no_domain_rules = false;
  auto* emit = app.add_subcommand("emit-dlv", "print the intervention program for DLV");
  add_source(emit, src);
  add_entity(emit, opt, false);
  emit->add_option("--constraints", opt.constraints, "constraints file");
  emit->add_flag("--weak", weak, "append the minimal-change weak constraints");
  emit->add_flag("--no-domain-rules", no_domain_rules, "omit constraint and dependency rules");
  emit->add_option("--out", out_path, "output file (default: stdout)");

  std::string program_file;
  std::optional<std::size_t> max_atoms;
  auto* solve = app.add_subcommand("solve-asp", "stable models of a ground program");
  solve->add_option("program", program_file, "program file")->required();
  solve->add_option("--max-atoms", max_atoms,
                    "enumeration cap (default: $CIPX_ASP_MAX_ATOMS or 20)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train) {
      std::optional<cipx::SchemaFile> schema;
      if (!src.schema.empty()) schema = cipx::load_schema(src.schema);
      write(out_path, cipx::format_model(cipx::train(cipx::load_dataset(src.data, schema))));
    } else if (*classify) {
      const auto model = load(src);
      const auto entity = cipx::parse_entity(opt.entity, model.schema(), opt.eid);
      const auto exact = cipx::classify_exact(model, entity);
      const auto staged = cipx::classify_staged(cipx::to_percent(model), entity, opt.maxint);
      const auto& labels = model.labels();
      std::cout << "label " << labels[staged.label] << "\n"
                << "exact " << labels[exact.label] << " " << labels[0] << "="
                << cipx::to_fraction(exact.numerator[0]) << " " << labels[1] << "="
                << cipx::to_fraction(exact.numerator[1]) << "\n"
                << "staged " << labels[staged.label] << " " << labels[0] << "="
                << staged.numerator[0] << " " << labels[1] << "=" << staged.numerator[1] << "\n";
    } else if (*counterfactuals || *explain || *query) {
      const auto model = load(src);
      const auto& schema = model.schema();
      const auto entity = cipx::parse_entity(opt.entity, schema, opt.eid);
      const auto cls = classifier(model, opt);
      const cipx::EngineOptions engine{opt.strict_paper, opt.allow_reintervention};
      auto versions = cipx::enumerate_counterfactuals(cls, entity, constraints(schema, opt), engine);
      if (*counterfactuals) {
        if (min_change) versions = cipx::min_change_versions(versions);
        for (const auto& v : versions) std::cout << cipx::format_version(schema, v) << "\n";
      } else if (*explain) {
        const auto explanations = cipx::explanations_of(versions, schema, entity);
        std::cout << cipx::format_report(schema, cipx::xresp(explanations, schema));
        for (const auto& e : explanations) {
          std::cout << cipx::format_explanation(schema, e) << "\n";
        }
      } else {
        cipx::query::CipContext context{schema, cls, entity, std::nullopt, !no_pb_num, opt.maxint};
        if (opt.mode == "staged") context.percent_model = cipx::to_percent(model);
        std::vector<cipx::query::ModelAtomSet> models;
        for (const auto& v : versions) models.push_back(cipx::query::atoms_of(v, context));
        const auto signature = cipx::query::cip_signature(schema);
        const auto semantics = cautious ? cipx::Semantics::cautious : cipx::Semantics::brave;
        for (const auto& q : cipx::query::load_query_file(query_file)) {
          std::cout << "% " << q.text << "\n";
          for (const auto& a : cipx::query::answer(q, models, semantics, &signature)) {
            std::cout << cipx::query::format_answer(a) << "\n";
          }
        }
      }
    } else if (*emit) {
      const auto model = load(src);
      const auto entity = cipx::parse_entity(opt.entity, model.schema(), opt.eid);
      cipx::dlv::EmitterOptions options{weak, !no_domain_rules, opt.maxint};
      write(out_path, cipx::dlv::emit_cip(cipx::to_percent(model), entity,
                                          constraints(model.schema(), opt), options));
    } else if (*solve) {
      const auto program = cipx::asp::load_program(program_file);
      const auto cap = max_atoms ? *max_atoms : cipx::asp::default_atom_cap();
      for (const auto m : cipx::asp::stable_models(program, cap)) {
        std::cout << cipx::asp::format_atom_set(program, m) << "\n";
      }
    }
  } catch (const cipx::Error& e) {
    std::cerr << "cipx: " << e.what() << "\n";
    return EXIT_FAILURE;
  } catch (const std::exception& e) {
    std::cerr << "cipx: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_SUCCESS;
}
