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

#include "cipx/emitter.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx::dlv {
namespace {

constexpr const char* kModule = "emitter";
constexpr std::size_t kWidth = 78;
constexpr std::size_t kMaxIndent = 40;

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += sep;
    out += items[i];
  }
  return out;
}

// Appends pieces separated by single spaces, each followed by `trail` (the
// last one by `last`), starting a new line when a piece would pass kWidth.
void fill(std::string& out, std::size_t& col, const std::vector<std::string>& pieces,
          std::string_view trail, std::string_view last, std::size_t indent, bool space_first) {
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const std::string piece = pieces[i] + std::string(i + 1 < pieces.size() ? trail : last);
    if (col + 1 + piece.size() > kWidth && col > indent) {
      out += "\n" + std::string(indent, ' ');
      col = indent;
    } else if (i > 0 || space_first) {
      out += ' ';
      ++col;
    }
    out += piece;
    col += piece.size();
  }
}

std::string rule(const std::string& head, const std::vector<std::string>& body) {
  if (body.empty()) return head + ".\n";
  std::string out = head + " :-";
  std::size_t col = out.size();
  fill(out, col, body, ",", ".", std::min(col + 1, kMaxIndent), true);
  return out + "\n";
}

std::string stage_var(std::size_t k) {
  static const char* const kFirst[] = {"A", "B", "C"};
  return k <= 3 ? kFirst[k - 1] : "S" + std::to_string(k);
}

struct Naming {
  std::vector<std::string> suffix;
  std::vector<std::string> var;     // O, T, H, W
  std::vector<std::string> primed;  // Op, Tp, Hp, Wp
  std::string pos_var;              // Fyes
  std::string neg_var;              // Fno
};

Naming make_naming(const FeatureSchema& schema, const Labels& labels) {
  Naming n;
  n.suffix = predicate_suffixes(schema);
  std::set<std::string> reserved{"E", "V", "D", "F", "Fp", "U", "Up",
                                 "X", "Z", "I", "Co", "S", "M", "R"};
  for (std::size_t i = 1; i <= schema.size(); ++i) reserved.insert("P" + std::to_string(i));
  for (std::size_t k = 1; k < schema.size(); ++k) {
    reserved.insert(stage_var(k));
    reserved.insert(stage_var(k) + "p");
  }
  const auto label_var = [&](const std::string& label, const char* fallback) {
    const std::string v = "F" + label;
    return text::is_identifier(label) && !reserved.count(v) ? v : std::string(fallback);
  };
  n.pos_var = label_var(labels[0], "Fpos");
  n.neg_var = label_var(labels[1], "Fneg");
  if (n.pos_var == n.neg_var) {
    n.pos_var = "Fpos";
    n.neg_var = "Fneg";
  }
  reserved.insert(n.pos_var);
  reserved.insert(n.neg_var);
  for (const auto& s : n.suffix) {
    std::string v = s;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::toupper(c); });
    if (reserved.count(v) || reserved.count(v + "p")) v = "X_" + s;
    n.var.push_back(v);
    n.primed.push_back(v + "p");
  }
  return n;
}

std::string ent(const std::string& eid, const std::vector<std::string>& args,
                const std::string& annotation) {
  return "ent(" + eid + "," + join(args, ",") + "," + annotation + ")";
}

void check_constant(const std::string& s, const std::string& what) {
  if (!text::is_constant(s)) {
    throw Error(kModule, what + " '" + s + "' is not a valid program constant");
  }
}

}  // namespace

std::vector<std::string> predicate_suffixes(const FeatureSchema& schema) {
  std::vector<std::string> names;
  for (const auto& f : schema.features()) names.push_back(text::lower(f.name));
  std::vector<std::string> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::optional<std::string> found;
    for (std::size_t k = 1; k <= names[i].size() && !found; ++k) {
      const auto prefix = names[i].substr(0, k);
      const bool shared = std::any_of(names.begin(), names.end(), [&](const std::string& other) {
        return &other != &names[i] && other.compare(0, k, prefix) == 0;
      });
      if (!shared) found = prefix;
    }
    if (!found) {
      std::vector<std::string> clash;
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (names[j].compare(0, names[i].size(), names[i]) == 0) clash.push_back(schema[j].name);
      }
      throw Error(kModule, "cannot derive distinct predicate names for features " +
                               join(clash, ", "));
    }
    if (!text::is_identifier(*found) || !std::islower(static_cast<unsigned char>((*found)[0]))) {
      throw Error(kModule, "feature '" + schema[i].name + "' gives predicate suffix '" + *found +
                               "', which is not a lowercase identifier");
    }
    out.push_back(*found);
  }
  return out;
}

std::string emit_cip(const PercentModel& model, const Entity& entity,
                     const ConstraintSet& constraints, const EmitterOptions& options) {
  const auto& schema = model.schema();
  const auto& labels = model.labels();
  const std::size_t n = schema.size();
  if (options.maxint < 1) throw Error(kModule, "maxint must be at least 1");
  if (!constraints.schema().empty() && !(constraints.schema() == schema)) {
    throw Error(kModule, "constraints were built for a different schema");
  }
  validate_entity(schema, entity);
  check_constant(entity.eid, "entity id");
  for (const auto& f : schema.features()) {
    check_constant(text::lower(f.name), "feature name");
    check_constant(f.atom, "feature atom");
    for (const auto& v : f.domain) check_constant(v, "value");
  }
  for (const auto& l : labels) check_constant(l, "label");

  const auto names = make_naming(schema, labels);
  const auto original = schema.encode(entity.values);
  const auto from = classify_staged(model, original, options.maxint).label;
  const auto& keep = labels[from];
  const auto& flip = labels[1 - from];
  const auto& v = names.var;
  const auto& vp = names.primed;
  const auto& sfx = names.suffix;
  const std::string vars = join(v, ",");
  const auto tr = ent("E", v, "tr");

  std::string out = "#include<ListAndSet>\n#maxint = " + std::to_string(options.maxint) + ".\n\n";

  for (FeatureIndex f = 0; f < n; ++f) {
    std::vector<std::string> facts;
    for (const auto& value : schema[f].domain) facts.push_back("dom_" + sfx[f] + "(" + value + ").");
    out += join(facts, " ") + "\n";
  }
  std::vector<std::string> lowered;
  for (const auto& f : schema.features()) lowered.push_back(text::lower(f.name));
  out += "\nentSchema(" + join(lowered, ",") + ").\n\n";
  out += ent(entity.eid, entity.values, "o") + ".\n\n";
  out += "p(" + labels[0] + ", " + std::to_string(model.prior(0)) + "). p(" + labels[1] + ", " +
         std::to_string(model.prior(1)) + ").\n";
  for (FeatureIndex f = 0; f < n; ++f) {
    out += "\n";
    for (LabelIndex l = 0; l < 2; ++l) {
      std::vector<std::string> facts;
      for (ValueIndex x = 0; x < schema[f].domain.size(); ++x) {
        facts.push_back("p_" + sfx[f] + "_c(" + schema[f].domain[x] + ", " + labels[l] + ", " +
                        std::to_string(model.conditional(f, x, l)) + ").");
      }
      out += join(facts, " ") + "\n";
    }
  }
  out += "\n";

  // Staged products, one rule per additional feature.
  const auto cond = [&](FeatureIndex f) {
    return "p_" + sfx[f] + "_c(" + v[f] + ", V, P" + std::to_string(f + 1) + ")";
  };
  if (n == 1) {
    out += rule("pb_num(E," + vars + ",V,Fp)",
                {tr, cond(0), "p(V, D)", "F = P1*D", "Fp = F/10", "#int(F)", "#int(Fp)"});
  } else {
    for (std::size_t k = 1; k < n; ++k) {
      const auto s = stage_var(k);
      const std::string factor = "P" + std::to_string(k + 1);
      std::vector<std::string> body{tr};
      std::string product;
      if (k == 1) {
        body.push_back(cond(0));
        product = "P1*" + factor;
      } else {
        body.push_back("prob_" + std::to_string(k - 1) + "(E," + vars + ",V," + stage_var(k - 1) +
                       "p)");
        product = stage_var(k - 1) + "p*" + factor;
      }
      body.push_back(cond(k));
      body.insert(body.end(), {s + " = " + product, s + "p = " + s + "/10", "#int(" + s + ")",
                               "#int(" + s + "p)", "p(V, D)"});
      out += rule("prob_" + std::to_string(k) + "(E," + vars + ",V," + s + "p)", body);
    }
    const auto last = stage_var(n - 1) + "p";
    out += rule("pb_num(E," + vars + ",V,Fp)",
                {tr, "prob_" + std::to_string(n - 1) + "(E," + vars + ",V," + last + ")", "p(V, D)",
                 "F = " + last + "*D", "Fp = F/10", "#int(F)", "#int(Fp)"});
  }
  out += "\n";

  out += rule(tr, {ent("E", v, "o")});
  out += rule(tr, {ent("E", v, "do")});
  out += "\n";

  const auto pb = [&](const std::string& label, const std::string& var) {
    return "pb_num(E," + vars + "," + label + "," + var + ")";
  };
  const std::string pos_pb = pb(labels[0], names.pos_var);
  const std::string neg_pb = pb(labels[1], names.neg_var);
  out += rule("cls(E," + vars + "," + labels[0] + ")",
              {tr, pos_pb, neg_pb, names.pos_var + " >= " + names.neg_var});
  out += rule("cls(E," + vars + "," + labels[1] + ")",
              {tr, pos_pb, neg_pb, names.pos_var + " < " + names.neg_var});
  out += "\n";

  std::vector<FeatureIndex> free;
  for (FeatureIndex f = 0; f < n; ++f) {
    if (constraints.intervenable(f)) free.push_back(f);
  }
  const std::string cls_keep = "cls(E," + vars + "," + keep + ")";
  if (!free.empty()) {
    std::vector<std::string> heads;
    std::vector<std::string> body;
    std::vector<std::string> chosen;
    std::vector<std::string> doms;
    for (const auto f : free) {
      auto args = v;
      args[f] = vp[f];
      heads.push_back(ent("E", args, "do"));
      body.push_back(v[f] + " != " + vp[f]);
      chosen.push_back("chosen_" + sfx[f] + "(" + vars + "," + vp[f] + ")");
      doms.push_back("dom_" + sfx[f] + "(" + vp[f] + ")");
    }
    body.push_back(tr);
    body.push_back(cls_keep);
    body.insert(body.end(), chosen.begin(), chosen.end());
    body.insert(body.end(), doms.begin(), doms.end());
    std::size_t col = 0;
    fill(out, col, heads, " v", " :-", 0, false);
    out += "\n    ";
    col = 4;
    fill(out, col, body, ",", ".", 4, false);
    out += "\n\n";
    for (const auto f : free) {
      const auto& s = sfx[f];
      out += rule("chosen_" + s + "(" + vars + ",U)",
                  {tr, cls_keep, "dom_" + s + "(U)", "U != " + v[f],
                   "not diffchoice_" + s + "(" + vars + ",U)"});
      out += rule("diffchoice_" + s + "(" + vars + ",U)",
                  {"chosen_" + s + "(" + vars + ",Up)", "U != Up", "dom_" + s + "(U)"});
    }
    out += "\n";
  }

  out += rule("", {ent("E", v, "do"), ent("E", v, "o")}).substr(1);
  out += "\n";
  out += rule(ent("E", v, "s"), {ent("E", v, "do"), "cls(E," + vars + "," + flip + ")"});
  out += "\n";
  out += rule("", {ent("E", v, "o"), "not entAux(E)"}).substr(1);
  out += rule("entAux(E)", {ent("E", v, "s")});
  out += "\n";

  std::size_t width = 0;
  std::vector<std::string> expl_heads;
  for (FeatureIndex f = 0; f < n; ++f) {
    expl_heads.push_back("expl(E," + schema[f].atom + "," + v[f] + ")");
    width = std::max(width, expl_heads.back().size());
  }
  for (FeatureIndex f = 0; f < n; ++f) {
    auto head = expl_heads[f];
    head.resize(width, ' ');
    out += rule(head, {ent("E", v, "o"), ent("E", vp, "s"), v[f] + " != " + vp[f]});
  }
  out += "\n";

  out += rule("cause(E,U)", {"expl(E,U,X)"});
  out += rule("cauCont(E,U,I)", {"expl(E,U,X)", "expl(E,I,Z)", "U != I"});
  out += rule("preCont(E,U,{I})", {"cauCont(E,U,I)"});
  out += rule("preCont(E,U,#union(Co,{I}))",
              {"cauCont(E,U,I)", "preCont(E,U,Co)", "not #member(I,Co)"});
  out += rule("cont(E,U,Co)", {"preCont(E,U,Co)", "not HoleIn(E,U,Co)"});
  out += rule("HoleIn(E,U,Co)", {"preCont(E,U,Co)", "cauCont(E,U,I)", "not #member(I,Co)"});
  out += rule("tmpCont(E,U)", {"cont(E,U,Co)", "not #card(Co,0)"});
  out += rule("cont(E,U,{})", {"cause(E,U)", "not tmpCont(E,U)"});
  out += "\n";
  out += rule("invResp(E,U,R)", {"cont(E,U,S)", "#card(S,M)", "R = M+1", "#int(R)"});
  out += "\n";
  out += rule("fullExpl(E,U,R,S)", {"expl(E,U,X)", "cont(E,U,S)", "invResp(E,U,R)"});

  if (options.include_domain_rules &&
      (!constraints.forbidden().empty() || !constraints.dependencies().empty())) {
    out += "\n";
    for (const auto& combo : constraints.forbidden()) {
      std::vector<std::string> args(n, "_");
      for (const auto& [f, x] : combo.bindings) args[f] = schema[f].domain[x];
      out += ":- " + ent("E", args, "tr") + ".\n";
    }
    for (const auto& dep : constraints.dependencies()) {
      for (ValueIndex x = 0; x < dep.image.size(); ++x) {
        auto body_args = v;
        body_args[dep.source] = schema[dep.source].domain[x];
        auto head_args = body_args;
        head_args[dep.target] = schema[dep.target].domain[dep.image[x]];
        out += rule(ent("E", head_args, "tr"), {ent("E", body_args, "tr")});
      }
    }
  }

  if (options.include_weak_constraints) {
    out += "\n";
    for (FeatureIndex f = 0; f < n; ++f) {
      out += rule("", {ent("E", v, "o"), ent("E", vp, "s"), v[f] + " != " + vp[f]})
                 .substr(1)
                 .replace(0, 2, ":~");
    }
  }
  return out;
}

namespace {

struct Statement {
  std::string text;
  std::size_t line;
};

std::vector<Statement> statements(std::string_view program) {
  std::vector<Statement> out;
  std::string current;
  std::size_t line = 1;
  std::size_t start = 1;
  int depth = 0;
  for (std::size_t i = 0; i < program.size(); ++i) {
    const char c = program[i];
    if (text::trim(current).empty() && c == '#' && program.substr(i, 8) == "#include") {
      while (i < program.size() && program[i] != '\n') ++i;
      ++line;
      current.clear();
      continue;
    }
    if (c == '%') {
      while (i + 1 < program.size() && program[i + 1] != '\n') ++i;
      continue;
    }
    if (text::trim(current).empty() && !std::isspace(static_cast<unsigned char>(c))) {
      start = line;
    }
    if (c == '\n') ++line;
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == '.' && depth == 0) {
      out.push_back({std::string(text::trim(current)), start});
      current.clear();
      continue;
    }
    current += c;
  }
  if (!text::trim(current).empty()) {
    throw ParseError(kModule, start, "statement is missing its final '.'");
  }
  return out;
}

}  // namespace

CipFacts parse_facts(std::string_view program) {
  std::optional<std::int64_t> maxint;
  bool weak = false;
  std::vector<std::string> suffixes;
  std::map<std::string, std::vector<std::string>> domains;
  std::vector<std::string> names;
  std::vector<std::string> atoms;
  std::optional<Entity> entity;
  std::vector<std::pair<std::string, int>> priors;
  struct Cond {
    std::string suffix, value, label;
    int pct;
    std::size_t line;
  };
  std::vector<Cond> conds;

  const auto parse_pct = [](const std::string& s, std::size_t line) {
    const auto value = text::parse_int(s);
    if (!value || *value < 0 || *value > 100) {
      throw ParseError(kModule, line, "'" + s + "' is not a percentage");
    }
    return static_cast<int>(*value);
  };

  for (const auto& [stmt, line] : statements(program)) {
    if (stmt.empty()) throw ParseError(kModule, line, "empty statement");
    if (stmt.starts_with("#maxint")) {
      const auto eq = stmt.find('=');
      const auto value =
          eq == std::string::npos ? std::nullopt : text::parse_int(text::trim(stmt.substr(eq + 1)));
      if (!value || *value < 1) throw ParseError(kModule, line, "malformed #maxint");
      maxint = *value;
      continue;
    }
    if (stmt.starts_with(":~")) {
      weak = true;
      continue;
    }
    if (stmt.find(":-") != std::string::npos) {
      if (stmt.starts_with("expl(")) {
        const auto args = text::split(stmt.substr(5, stmt.find(')') - 5), ',');
        if (args.size() == 3) atoms.push_back(args[1]);
      }
      continue;
    }
    const auto open = stmt.find('(');
    if (open == std::string::npos || stmt.back() != ')') {
      throw ParseError(kModule, line, "malformed fact '" + stmt + "'");
    }
    const auto pred = std::string(text::trim(stmt.substr(0, open)));
    const auto args = text::split(stmt.substr(open + 1, stmt.size() - open - 2), ',');
    if (!text::is_identifier(pred)) throw ParseError(kModule, line, "malformed fact '" + stmt + "'");
    for (const auto& a : args) {
      if (!text::is_constant(a)) {
        throw ParseError(kModule, line, "'" + a + "' is not a constant in '" + stmt + "'");
      }
    }
    if (pred.starts_with("dom_") && args.size() == 1) {
      const auto s = pred.substr(4);
      if (!domains.count(s)) suffixes.push_back(s);
      domains[s].push_back(args[0]);
    } else if (pred == "entSchema") {
      names = args;
    } else if (pred == "ent") {
      if (args.size() < 3 || args.back() != "o") {
        throw ParseError(kModule, line, "only the original entity may appear as a fact");
      }
      if (entity) throw ParseError(kModule, line, "more than one original entity");
      entity = Entity{args.front(), std::vector<std::string>(args.begin() + 1, args.end() - 1)};
    } else if (pred == "p" && args.size() == 2) {
      priors.emplace_back(args[0], parse_pct(args[1], line));
    } else if (pred.starts_with("p_") && pred.ends_with("_c") && pred.size() > 4 &&
               args.size() == 3) {
      conds.push_back({pred.substr(2, pred.size() - 4), args[0], args[1], parse_pct(args[2], line),
                       line});
    } else {
      throw ParseError(kModule, line, "unexpected fact '" + stmt + "'");
    }
  }

  if (!maxint) throw Error(kModule, "missing #maxint");
  if (names.size() != suffixes.size() || names.empty()) {
    throw Error(kModule, "entSchema does not match the domain facts");
  }
  if (atoms.size() != names.size()) atoms = names;
  std::vector<Feature> features;
  for (std::size_t i = 0; i < names.size(); ++i) {
    features.push_back(Feature{names[i], atoms[i], domains[suffixes[i]]});
  }
  FeatureSchema schema(std::move(features));
  if (predicate_suffixes(schema) != suffixes) {
    throw Error(kModule, "domain predicates do not follow the feature names");
  }
  if (priors.size() != 2) throw Error(kModule, "expected exactly two prior facts");
  const Labels labels{priors[0].first, priors[1].first};
  if (labels[0] == labels[1]) throw Error(kModule, "prior facts repeat a label");

  ConditionalTable<std::optional<int>> table(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) table[f].resize(schema[f].domain.size());
  for (const auto& c : conds) {
    const auto it = std::find(suffixes.begin(), suffixes.end(), c.suffix);
    if (it == suffixes.end()) throw ParseError(kModule, c.line, "unknown predicate p_" + c.suffix + "_c");
    const auto f = static_cast<FeatureIndex>(it - suffixes.begin());
    const auto x = schema.find_value(f, c.value);
    if (!x) throw ParseError(kModule, c.line, "value '" + c.value + "' has no dom fact");
    const auto l = c.label == labels[0] ? 0 : c.label == labels[1] ? 1 : 2;
    if (l == 2) throw ParseError(kModule, c.line, "unknown label '" + c.label + "'");
    if (table[f][*x][l]) throw ParseError(kModule, c.line, "duplicate conditional fact");
    table[f][*x][l] = c.pct;
  }
  ConditionalTable<int> conditional(schema.size());
  for (FeatureIndex f = 0; f < schema.size(); ++f) {
    for (ValueIndex x = 0; x < schema[f].domain.size(); ++x) {
      std::array<int, 2> row{};
      for (LabelIndex l = 0; l < 2; ++l) {
        if (!table[f][x][l]) {
          throw Error(kModule, "missing p_" + suffixes[f] + "_c fact for " +
                                   schema[f].domain[x] + ", " + labels[l]);
        }
        row[l] = *table[f][x][l];
      }
      conditional[f].push_back(row);
    }
  }
  if (!entity) throw Error(kModule, "missing the original entity fact");
  validate_entity(schema, *entity);
  PercentModel model(schema, labels, {priors[0].second, priors[1].second}, std::move(conditional));
  return CipFacts{std::move(model), std::move(*entity), *maxint, weak};
}

}  // namespace cipx::dlv
