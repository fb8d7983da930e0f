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

#include "cipx/query.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx::query {
namespace {

constexpr const char* kModule = "query";

int compare_values(const Value& a, const Value& b) {
  if (a.data.index() != b.data.index()) return a.data.index() < b.data.index() ? -1 : 1;
  if (const auto* x = std::get_if<std::int64_t>(&a.data)) {
    const auto y = std::get<std::int64_t>(b.data);
    return *x < y ? -1 : *x > y ? 1 : 0;
  }
  if (const auto* x = std::get_if<std::string>(&a.data)) {
    const auto c = x->compare(std::get<std::string>(b.data));
    return c < 0 ? -1 : c > 0 ? 1 : 0;
  }
  const auto& x = std::get<std::vector<std::string>>(a.data);
  const auto& y = std::get<std::vector<std::string>>(b.data);
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return x < y ? -1 : y < x ? 1 : 0;
}

struct Token {
  enum class Kind { ident, variable, anonymous, integer, lparen, rparen, lbrace, rbrace,
                    comma, op, end };
  Kind kind;
  std::string text;
};

std::vector<Token> tokenize(std::string_view s) {
  using K = Token::Kind;
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const auto start = i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_')) ++i;
      std::string word(s.substr(start, i - start));
      const auto kind = word == "_" ? K::anonymous
                        : std::islower(static_cast<unsigned char>(word[0])) ? K::ident
                                                                            : K::variable;
      out.push_back({kind, std::move(word)});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      const auto start = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      out.push_back({K::integer, std::string(s.substr(start, i - start))});
    } else if (c == '<' || c == '>' || c == '!' || c == '=') {
      std::string op(1, c);
      if (i + 1 < s.size() && s[i + 1] == '=') op += '=';
      i += op.size();
      if (op == "!") throw Error(kModule, "'!' must be followed by '='");
      if (op == "==") op = "=";
      out.push_back({K::op, op});
    } else {
      const std::string one(1, c);
      ++i;
      switch (c) {
        case '(': out.push_back({K::lparen, one}); break;
        case ')': out.push_back({K::rparen, one}); break;
        case '{': out.push_back({K::lbrace, one}); break;
        case '}': out.push_back({K::rbrace, one}); break;
        case ',': out.push_back({K::comma, one}); break;
        default: throw Error(kModule, "unexpected character '" + one + "' in query");
      }
    }
  }
  out.push_back({K::end, ""});
  return out;
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  void literals(Query& q) {
    while (true) {
      literal(q);
      if (peek().kind != Token::Kind::comma) break;
      take();
    }
    if (peek().kind != Token::Kind::end) fail("unexpected '" + peek().text + "'");
  }

 private:
  using K = Token::Kind;

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  [[noreturn]] void fail(const std::string& message) const { throw Error(kModule, message); }

  void literal(Query& q) {
    if (peek().kind == K::ident && peek(1).kind != K::op) {
      Pattern p{take().text, {}};
      if (peek().kind == K::lparen) {
        take();
        while (true) {
          p.args.push_back(term());
          if (peek().kind == K::rparen) break;
          if (take().kind != K::comma) fail("expected ',' or ')' in " + p.predicate);
        }
        take();
      }
      q.patterns.push_back(std::move(p));
      return;
    }
    Comparison c{term(), Op::eq, {}};
    const auto& op = take();
    if (op.kind != K::op) fail("expected an atom or a comparison");
    static const std::pair<const char*, Op> kOps[] = {{"<", Op::lt}, {"<=", Op::le}, {"=", Op::eq},
                                                      {"!=", Op::ne}, {">", Op::gt}, {">=", Op::ge}};
    for (const auto& [text, value] : kOps) {
      if (op.text == text) c.op = value;
    }
    c.right = term();
    q.comparisons.push_back(std::move(c));
  }

  Term term() {
    const auto& t = take();
    switch (t.kind) {
      case K::variable: return Term{Term::Kind::variable, t.text, {}};
      case K::anonymous: return Term{Term::Kind::anonymous, "", {}};
      case K::ident:
      case K::integer: return Term{Term::Kind::value, "", Value::constant(t.text)};
      case K::lbrace: {
        std::vector<std::string> items;
        if (peek().kind == K::rbrace) {
          take();
        } else {
          while (true) {
            const auto& item = take();
            if (item.kind != K::ident && item.kind != K::integer) fail("expected a set element");
            items.push_back(item.text);
            const auto& sep = take();
            if (sep.kind == K::rbrace) break;
            if (sep.kind != K::comma) fail("expected ',' or '}' in set literal");
          }
        }
        return Term{Term::Kind::value, "", Value::set(std::move(items))};
      }
      default: fail(t.kind == K::end ? "query ends early" : "unexpected '" + t.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

bool holds(const Value& a, Op op, const Value& b) {
  const int c = compare_values(a, b);
  switch (op) {
    case Op::lt: return c < 0;
    case Op::le: return c <= 0;
    case Op::eq: return c == 0;
    case Op::ne: return c != 0;
    case Op::gt: return c > 0;
    case Op::ge: return c >= 0;
  }
  return false;
}

using Bindings = std::unordered_map<std::string, Value>;

void match(const Query& q, std::size_t i, const std::unordered_map<std::string, std::vector<const Atom*>>& index,
           Bindings& bindings, std::vector<const Atom*>& matched, std::set<Answer>& out) {
  if (i == q.patterns.size()) {
    const auto resolve = [&](const Term& t) {
      return t.kind == Term::Kind::variable ? bindings.at(t.name) : t.value;
    };
    for (const auto& c : q.comparisons) {
      if (!holds(resolve(c.left), c.op, resolve(c.right))) return;
    }
    Answer answer;
    std::set<std::string> echoed;
    for (std::size_t p = 0; p < q.patterns.size(); ++p) {
      const auto& args = q.patterns[p].args;
      for (std::size_t j = 0; j < args.size(); ++j) {
        if (args[j].kind == Term::Kind::anonymous) {
          answer.push_back(matched[p]->args[j]);
        } else if (args[j].kind == Term::Kind::variable && echoed.insert(args[j].name).second) {
          answer.push_back(bindings.at(args[j].name));
        }
      }
    }
    out.insert(std::move(answer));
    return;
  }
  const auto& pattern = q.patterns[i];
  const auto it = index.find(pattern.predicate);
  if (it == index.end()) return;
  for (const auto* atom : it->second) {
    if (atom->args.size() != pattern.args.size()) continue;
    std::vector<std::string> bound_here;
    bool ok = true;
    for (std::size_t j = 0; j < pattern.args.size() && ok; ++j) {
      const auto& t = pattern.args[j];
      if (t.kind == Term::Kind::value) {
        ok = t.value == atom->args[j];
      } else if (t.kind == Term::Kind::variable) {
        if (auto b = bindings.find(t.name); b != bindings.end()) {
          ok = b->second == atom->args[j];
        } else {
          bindings.emplace(t.name, atom->args[j]);
          bound_here.push_back(t.name);
        }
      }
    }
    if (ok) {
      matched.push_back(atom);
      match(q, i + 1, index, bindings, matched, out);
      matched.pop_back();
    }
    for (const auto& name : bound_here) bindings.erase(name);
  }
}

std::string tuple_text(std::span<const Value> values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ",";
    out += to_string(values[i]);
  }
  return out;
}

}  // namespace

Value Value::constant(std::string_view s) {
  if (auto i = text::parse_int(s)) return Value{*i};
  return Value{std::string(s)};
}

Value Value::set(std::vector<std::string> items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  return Value{std::move(items)};
}

bool operator<(const Value& a, const Value& b) { return compare_values(a, b) < 0; }

std::string to_string(const Value& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value.data)) return std::to_string(*i);
  if (const auto* s = std::get_if<std::string>(&value.data)) return *s;
  const auto& items = std::get<std::vector<std::string>>(value.data);
  std::string out = "{";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ",";
    out += items[i];
  }
  return out + "}";
}

bool operator<(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return std::lexicographical_compare(a.args.begin(), a.args.end(), b.args.begin(), b.args.end());
}

std::string to_string(const Atom& atom) {
  return atom.predicate + "(" + tuple_text(atom.args) + ")";
}

ModelAtomSet atoms_of(const CounterfactualVersion& version, const CipContext& context) {
  const auto& schema = context.schema;
  const auto& eid = version.eid;
  const Tuple original = schema.encode(context.original.values);
  const auto& labels = context.classifier.labels();
  std::set<Atom> atoms;

  const auto values = [&](const Tuple& t) {
    std::vector<Value> out{Value::constant(eid)};
    for (FeatureIndex f = 0; f < schema.size(); ++f) {
      out.push_back(Value::constant(schema[f].domain[t[f]]));
    }
    return out;
  };
  const auto with = [](std::vector<Value> args, std::initializer_list<Value> extra) {
    args.insert(args.end(), extra);
    return args;
  };
  const auto label_value = [&](LabelIndex l) { return Value::constant(labels[l]); };

  std::vector<Tuple> states{original};
  states.insert(states.end(), version.trail.begin(), version.trail.end());
  atoms.insert(Atom{"ent", with(values(original), {Value::constant("o")})});
  for (std::size_t i = 0; i < states.size(); ++i) {
    const auto base = values(states[i]);
    atoms.insert(Atom{"ent", with(base, {Value::constant("tr")})});
    if (i > 0) atoms.insert(Atom{"ent", with(base, {Value::constant("do")})});
    atoms.insert(Atom{"cls", with(base, {label_value(context.classifier.label(states[i]))})});
    if (context.include_pb_num && context.percent_model) {
      const auto staged = classify_staged(*context.percent_model, states[i], context.maxint);
      for (LabelIndex l = 0; l < 2; ++l) {
        atoms.insert(Atom{"pb_num", with(base, {label_value(l), Value::integer(staged.numerator[l])})});
      }
    }
  }
  atoms.insert(Atom{"ent", with(values(version.values), {Value::constant("s")})});
  atoms.insert(Atom{"entAux", {Value::constant(eid)}});

  const CounterfactualVersion* one = &version;
  for (const auto& e : explanations_of(std::span(one, 1), schema, context.original)) {
    const auto e_id = Value::constant(eid);
    const auto cause = Value::constant(schema[e.cause].atom);
    std::vector<std::string> members;
    for (const auto f : e.contingency) members.push_back(schema[f].atom);
    const auto cont = Value::set(members);
    const auto r = Value::integer(e.inv_resp);
    atoms.insert(Atom{"expl", {e_id, cause, Value::constant(schema[e.cause].domain[e.cause_value])}});
    atoms.insert(Atom{"cause", {e_id, cause}});
    atoms.insert(Atom{"cont", {e_id, cause, cont}});
    atoms.insert(Atom{"invResp", {e_id, cause, r}});
    atoms.insert(Atom{"fullExpl", {e_id, cause, r, cont}});
  }
  return ModelAtomSet(atoms.begin(), atoms.end());
}

Query parse_query(std::string_view text) {
  auto body = text::trim(text);
  if (body.empty() || body.back() != '?') throw Error(kModule, "a query must end with '?'");
  body.remove_suffix(1);
  Query q;
  q.text = std::string(text::trim(text));
  Parser(tokenize(body)).literals(q);
  if (q.patterns.empty()) throw Error(kModule, "a query needs at least one atom");
  std::set<std::string> vars;
  for (const auto& p : q.patterns) {
    for (const auto& t : p.args) {
      if (t.kind == Term::Kind::variable) vars.insert(t.name);
    }
  }
  for (const auto& c : q.comparisons) {
    for (const auto* t : {&c.left, &c.right}) {
      if (t->kind == Term::Kind::anonymous) throw Error(kModule, "'_' cannot be compared");
      if (t->kind == Term::Kind::variable && !vars.count(t->name)) {
        throw Error(kModule, "variable " + t->name + " occurs only in a comparison");
      }
    }
  }
  return q;
}

std::vector<Query> parse_query_file(std::string_view text) {
  std::vector<Query> out;
  std::size_t line_no = 0;
  for (const auto raw : text::lines(text)) {
    ++line_no;
    const auto line = text::trim(text::strip_comment(raw));
    if (line.empty()) continue;
    try {
      out.push_back(parse_query(line));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      const std::string what = e.what();
      throw ParseError(kModule, line_no, what.substr(what.find(": ") + 2));
    }
  }
  return out;
}

std::vector<Query> load_query_file(const std::string& path) {
  return parse_query_file(text::read_file(path, kModule));
}

Signature cip_signature(const FeatureSchema& schema) {
  const auto n = schema.size();
  return {{"ent", n + 2},   {"cls", n + 2},     {"pb_num", n + 3},
          {"expl", 3},      {"cause", 2},       {"cont", 3},
          {"invResp", 3},   {"fullExpl", 4},    {"entAux", 1}};
}

std::vector<Answer> answer(const Query& query, std::span<const ModelAtomSet> models,
                           Semantics semantics, const Signature* signature) {
  if (signature != nullptr) {
    for (const auto& p : query.patterns) {
      const auto it = signature->find(p.predicate);
      if (it == signature->end()) throw Error(kModule, "unknown predicate '" + p.predicate + "'");
      if (it->second != p.args.size()) {
        throw Error(kModule, "predicate '" + p.predicate + "' takes " + std::to_string(it->second) +
                                 " arguments, not " + std::to_string(p.args.size()));
      }
    }
  }
  std::optional<std::set<Answer>> result;
  for (const auto& model : models) {
    std::unordered_map<std::string, std::vector<const Atom*>> index;
    for (const auto& atom : model) index[atom.predicate].push_back(&atom);
    Bindings bindings;
    std::vector<const Atom*> matched;
    std::set<Answer> found;
    match(query, 0, index, bindings, matched, found);
    if (!result) {
      result = std::move(found);
    } else if (semantics == Semantics::brave) {
      result->insert(found.begin(), found.end());
    } else {
      std::set<Answer> both;
      std::set_intersection(result->begin(), result->end(), found.begin(), found.end(),
                            std::inserter(both, both.end()));
      result = std::move(both);
    }
  }
  if (!result) return {};
  return std::vector<Answer>(result->begin(), result->end());
}

std::string format_answer(const Answer& answer) {
  std::string out;
  for (std::size_t i = 0; i < answer.size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(answer[i]);
  }
  return out;
}

}  // namespace cipx::query
