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

#include "cipx/asp.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cstdlib>

#include "cipx/error.hpp"
#include "text.hpp"

namespace cipx::asp {
namespace {

constexpr const char* kModule = "asp";

enum class Tok { atom, kw_not, kw_or, comma, rule_if, weak_if, dot, bracket, end };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) break;
      const char c = text_[pos_];
      const auto line = line_;
      if (c == ',') {
        ++pos_;
        out.push_back({Tok::comma, ",", line});
      } else if (c == '.') {
        ++pos_;
        out.push_back({Tok::dot, ".", line});
      } else if (c == '|') {
        ++pos_;
        out.push_back({Tok::kw_or, "|", line});
      } else if (c == '[') {
        ++pos_;
        out.push_back({Tok::bracket, "[", line});
      } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        pos_ += 2;
        out.push_back({Tok::rule_if, ":-", line});
      } else if (c == ':' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '~') {
        pos_ += 2;
        out.push_back({Tok::weak_if, ":~", line});
      } else if (ident_start(c)) {
        out.push_back(read_atom());
      } else {
        throw ParseError(kModule, line, std::string("unexpected character '") + c + "'");
      }
    }
    out.push_back({Tok::end, "", line_});
    return out;
  }

 private:
  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  Token read_atom() {
    const auto line = line_;
    const auto start = pos_;
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    if (name == "not") return {Tok::kw_not, name, line};
    if (name == "v") return {Tok::kw_or, name, line};
    if (!std::islower(static_cast<unsigned char>(name[0]))) {
      throw ParseError(kModule, line, "'" + name + "' is not a ground atom");
    }
    const auto save = pos_;
    skip_blank();
    if (pos_ >= text_.size() || text_[pos_] != '(') {
      pos_ = save;
      return {Tok::atom, name, line};
    }
    ++pos_;
    std::vector<std::string> args{""};
    while (true) {
      skip_blank();
      if (pos_ >= text_.size()) throw ParseError(kModule, line, "unterminated argument list");
      const char c = text_[pos_++];
      if (c == ')') break;
      if (c == ',') {
        args.emplace_back();
      } else if (ident_char(c)) {
        args.back() += c;
      } else {
        throw ParseError(kModule, line_, std::string("unexpected character '") + c + "'");
      }
    }
    name += "(";
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (!text::is_constant(args[i])) {
        throw ParseError(kModule, line,
                         args[i].empty() ? "empty argument"
                                         : "'" + args[i] + "' makes the atom non-ground");
      }
      name += (i > 0 ? "," : "") + args[i];
    }
    return {Tok::atom, name + ")", line};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  GroundProgram run() {
    while (peek().kind != Tok::end) statement();
    return std::move(program_);
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& at, const std::string& message) const {
    throw ParseError(kModule, at.line, message);
  }

  void expect_dot() {
    const auto& t = take();
    if (t.kind != Tok::dot) {
      fail(t, t.kind == Tok::end ? "missing '.' at end of statement"
                                 : "expected '.' before '" + t.text + "'");
    }
  }

  void body(std::vector<AtomId>& pos, std::vector<AtomId>& neg) {
    if (peek().kind == Tok::dot || peek().kind == Tok::end) fail(peek(), "empty rule body");
    while (true) {
      bool negated = false;
      if (peek().kind == Tok::kw_not) {
        take();
        negated = true;
      }
      const auto& t = take();
      if (t.kind != Tok::atom) fail(t, "expected an atom in rule body");
      (negated ? neg : pos).push_back(program_.intern(t.text));
      if (peek().kind != Tok::comma) break;
      take();
    }
  }

  void statement() {
    const auto& first = take();
    if (first.kind == Tok::rule_if) {
      Rule rule;
      body(rule.pos, rule.neg);
      expect_dot();
      program_.add_rule(std::move(rule));
    } else if (first.kind == Tok::weak_if) {
      WeakConstraint weak;
      body(weak.pos, weak.neg);
      expect_dot();
      if (peek().kind == Tok::bracket) fail(peek(), "weak constraint weights are not supported");
      program_.add_weak(std::move(weak));
    } else if (first.kind == Tok::atom) {
      Rule rule;
      rule.head.push_back(program_.intern(first.text));
      while (peek().kind == Tok::kw_or) {
        take();
        const auto& t = take();
        if (t.kind != Tok::atom) fail(t, "expected an atom after disjunction");
        rule.head.push_back(program_.intern(t.text));
      }
      if (peek().kind == Tok::rule_if) {
        take();
        body(rule.pos, rule.neg);
      }
      expect_dot();
      program_.add_rule(std::move(rule));
    } else {
      fail(first, first.kind == Tok::end ? "unexpected end of input"
                                         : "unexpected '" + first.text + "'");
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  GroundProgram program_;
};

AtomSet mask_of(std::span<const AtomId> atoms) {
  AtomSet m = 0;
  for (const auto a : atoms) m |= AtomSet{1} << a;
  return m;
}

void check_cap(const GroundProgram& program, std::size_t cap) {
  const auto limit = std::min(cap, kHardAtomLimit);
  if (program.atoms().size() > limit) {
    throw Error(kModule, "Herbrand base has " + std::to_string(program.atoms().size()) +
                             " atoms, enumeration is capped at " + std::to_string(limit));
  }
}

// Rules as masks, for the enumeration loops.
struct MaskRule {
  AtomSet head, pos, neg;
};

std::vector<MaskRule> masks(const GroundProgram& program) {
  std::vector<MaskRule> out;
  for (const auto& r : program.rules()) out.push_back({mask_of(r.head), mask_of(r.pos), mask_of(r.neg)});
  return out;
}

bool satisfies(std::span<const MaskRule> rules, AtomSet m) {
  for (const auto& r : rules) {
    if ((r.pos & ~m) == 0 && (r.neg & m) == 0 && (r.head & m) == 0) return false;
  }
  return true;
}

// Whether some proper subset of `m` satisfies the positive rules.
bool has_smaller_model(std::span<const MaskRule> positive, AtomSet m) {
  if (m == 0) return false;
  for (AtomSet sub = (m - 1) & m;; sub = (sub - 1) & m) {
    if (satisfies(positive, sub)) return true;
    if (sub == 0) break;
  }
  return false;
}

void sort_canonically(const GroundProgram& program, std::vector<AtomSet>& sets) {
  std::sort(sets.begin(), sets.end(), [&](AtomSet a, AtomSet b) {
    return atom_names(program, a) < atom_names(program, b);
  });
}

}  // namespace

AtomId GroundProgram::intern(std::string_view name) {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  atoms_.emplace_back(name);
  index_.emplace(atoms_.back(), atoms_.size() - 1);
  return atoms_.size() - 1;
}

std::optional<AtomId> GroundProgram::find(std::string_view name) const {
  if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
  return std::nullopt;
}

void GroundProgram::add_rule(Rule rule) {
  for (const auto* part : {&rule.head, &rule.pos, &rule.neg}) {
    for (const auto a : *part) {
      if (a >= atoms_.size()) throw Error(kModule, "rule mentions an unknown atom id");
    }
  }
  rules_.push_back(std::move(rule));
}

void GroundProgram::add_weak(WeakConstraint weak) {
  for (const auto* part : {&weak.pos, &weak.neg}) {
    for (const auto a : *part) {
      if (a >= atoms_.size()) throw Error(kModule, "weak constraint mentions an unknown atom id");
    }
  }
  weak_.push_back(std::move(weak));
}

bool GroundProgram::is_positive() const {
  return std::all_of(rules_.begin(), rules_.end(), [](const Rule& r) { return r.neg.empty(); });
}

GroundProgram parse_program(std::string_view text) {
  return Parser(Lexer(text).run()).run();
}

GroundProgram load_program(const std::string& path) {
  return parse_program(text::read_file(path, kModule));
}

std::size_t default_atom_cap() {
  const char* env = std::getenv("CIPX_ASP_MAX_ATOMS");
  if (env == nullptr || *env == '\0') return 20;
  const auto value = text::parse_int(env);
  if (!value || *value < 0 || static_cast<std::size_t>(*value) > kHardAtomLimit) {
    throw Error(kModule, "CIPX_ASP_MAX_ATOMS must be an integer between 0 and " +
                             std::to_string(kHardAtomLimit));
  }
  return static_cast<std::size_t>(*value);
}

GroundProgram reduct(const GroundProgram& program, AtomSet s) {
  GroundProgram out;
  for (const auto& name : program.atoms()) out.intern(name);
  for (const auto& r : program.rules()) {
    if ((mask_of(r.neg) & s) != 0) continue;
    out.add_rule(Rule{r.head, r.pos, {}});
  }
  for (const auto& w : program.weak()) out.add_weak(w);
  return out;
}

bool satisfies(const GroundProgram& program, AtomSet m) {
  return satisfies(masks(program), m);
}

int weak_violations(const GroundProgram& program, AtomSet m) {
  int count = 0;
  for (const auto& w : program.weak()) {
    if ((mask_of(w.pos) & ~m) == 0 && (mask_of(w.neg) & m) == 0) ++count;
  }
  return count;
}

std::vector<AtomSet> minimal_models(const GroundProgram& program, std::size_t cap) {
  if (!program.is_positive()) throw Error(kModule, "minimal models need a negation-free program");
  check_cap(program, cap);
  const auto rules = masks(program);
  const auto n = program.atoms().size();
  std::vector<AtomSet> models;
  for (AtomSet m = 0; m < (AtomSet{1} << n); ++m) {
    if (satisfies(rules, m)) models.push_back(m);
  }
  // A model is minimal iff it contains no smaller minimal model.
  std::stable_sort(models.begin(), models.end(),
                   [](AtomSet a, AtomSet b) { return std::popcount(a) < std::popcount(b); });
  std::vector<AtomSet> minimal;
  for (const auto m : models) {
    const bool dominated = std::any_of(minimal.begin(), minimal.end(),
                                       [m](AtomSet k) { return (k & ~m) == 0; });
    if (!dominated) minimal.push_back(m);
  }
  sort_canonically(program, minimal);
  return minimal;
}

std::vector<AtomSet> stable_models(const GroundProgram& program, std::size_t cap) {
  check_cap(program, cap);
  const auto rules = masks(program);
  const auto n = program.atoms().size();
  std::vector<AtomSet> stable;
  for (AtomSet s = 0; s < (AtomSet{1} << n); ++s) {
    // s models the program iff it models its reduct, so candidates come first.
    if (!satisfies(rules, s)) continue;
    std::vector<MaskRule> reduced;
    for (const auto& r : rules) {
      if ((r.neg & s) == 0) reduced.push_back({r.head, r.pos, 0});
    }
    if (!has_smaller_model(reduced, s)) stable.push_back(s);
  }
  if (!program.weak().empty() && !stable.empty()) {
    int best = weak_violations(program, stable.front());
    for (const auto s : stable) best = std::min(best, weak_violations(program, s));
    std::erase_if(stable, [&](AtomSet s) { return weak_violations(program, s) != best; });
  }
  sort_canonically(program, stable);
  return stable;
}

bool answer_query_ground(const GroundProgram& program, std::span<const std::string> atoms,
                         Semantics semantics, std::size_t cap) {
  AtomSet query = 0;
  bool unknown = false;
  for (const auto& a : atoms) {
    if (auto id = program.find(a)) {
      query |= AtomSet{1} << *id;
    } else {
      unknown = true;
    }
  }
  const auto models = stable_models(program, cap);
  const auto holds = [&](AtomSet m) { return !unknown && (query & ~m) == 0; };
  if (semantics == Semantics::brave) return std::any_of(models.begin(), models.end(), holds);
  return std::all_of(models.begin(), models.end(), holds);
}

std::vector<std::string> atom_names(const GroundProgram& program, AtomSet set) {
  std::vector<std::string> names;
  for (AtomId a = 0; a < program.atoms().size(); ++a) {
    if (set & (AtomSet{1} << a)) names.push_back(program.atom(a));
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::string format_atom_set(const GroundProgram& program, AtomSet set) {
  std::string out = "{";
  const auto names = atom_names(program, set);
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i > 0) out += ", ";
    out += names[i];
  }
  return out + "}";
}

std::string format_program(const GroundProgram& program) {
  const auto join = [&](std::span<const AtomId> ids, const char* sep, const char* prefix) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (i > 0) out += sep;
      out += prefix + program.atom(ids[i]);
    }
    return out;
  };
  const auto body = [&](std::span<const AtomId> pos, std::span<const AtomId> neg) {
    auto out = join(pos, ", ", "");
    if (!pos.empty() && !neg.empty()) out += ", ";
    return out + join(neg, ", ", "not ");
  };
  std::string out;
  for (const auto& r : program.rules()) {
    out += join(r.head, " v ", "");
    if (!r.pos.empty() || !r.neg.empty()) {
      out += (r.head.empty() ? ":- " : " :- ") + body(r.pos, r.neg);
    }
    out += ".\n";
  }
  for (const auto& w : program.weak()) out += ":~ " + body(w.pos, w.neg) + ".\n";
  return out;
}

}  // namespace cipx::asp
