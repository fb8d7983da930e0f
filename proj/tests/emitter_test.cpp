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

#include <gtest/gtest.h>

#include <algorithm>
#include <cctype>
#include <sstream>

#include "cipx/emitter.hpp"
#include "cipx/error.hpp"
#include "fixtures.hpp"
#include "reference.hpp"

namespace cipx::dlv {
namespace {

using testing::weather_entity;
using testing::weather_percent;
using testing::weather_schema;

std::string read(const std::string& name) {
  return testing::read_text(testing::data_path(name));
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// Sorted ground `predicate` facts.
std::vector<std::string> statements_of(const std::string& s, const std::string& predicate) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) {
    std::istringstream facts(line);
    for (std::string fact; std::getline(facts, fact, '.');) {
      fact = testing::strip_whitespace(fact);
      const bool ground = std::none_of(fact.begin(), fact.end(), [](unsigned char c) {
        return std::isupper(c);
      });
      if (fact.starts_with(predicate) && ground) out.push_back(fact);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

TEST(EmitterTest, MatchesGolden) {
  EXPECT_EQ(emit_cip(weather_percent(), weather_entity()), read("weather_cip.dlv"));
}

TEST(EmitterTest, MatchesReferenceAfterCorrections) {
  const auto reference = read("weather_cip.reference.dlv");
  const auto corrected = testing::corrected_reference(reference);
  EXPECT_EQ(testing::strip_whitespace(emit_cip(weather_percent(), weather_entity())),
            testing::strip_whitespace(corrected));
  // The fact reordering moves whole facts only.
  EXPECT_EQ(statements_of(reference, "p_h_c("), statements_of(corrected, "p_h_c("));
  EXPECT_EQ(statements_of(corrected, "p_h_c(").size(), 4u);
}

TEST(EmitterTest, FactsBlock) {
  const auto program = emit_cip(weather_percent(), weather_entity());
  EXPECT_NE(program.find("p_o_c(sunny, yes, 22). p_o_c(overcast, yes, 45). p_o_c(rain, yes, 33).\n"),
            std::string::npos);
  EXPECT_NE(program.find("ent(e,rain,high,normal,weak,o).\n"), std::string::npos);
  EXPECT_TRUE(program.starts_with("#include<ListAndSet>\n#maxint = 100000000.\n"));
}

TEST(EmitterTest, HardConstraintsWithoutDomainKnowledge) {
  int hard = 0;
  for (const auto& line : lines_of(emit_cip(weather_percent(), weather_entity()))) {
    hard += line.starts_with(":-");
  }
  EXPECT_EQ(hard, 2);
}

TEST(EmitterTest, WeakConstraints) {
  EmitterOptions options;
  options.include_weak_constraints = true;
  const auto lines = lines_of(emit_cip(weather_percent(), weather_entity(), {}, options));
  ASSERT_GE(lines.size(), 4u);
  EXPECT_EQ(lines[lines.size() - 4], ":~ ent(E,O,T,H,W,o), ent(E,Op,Tp,Hp,Wp,s), O != Op.");
  EXPECT_EQ(lines.back(), ":~ ent(E,O,T,H,W,o), ent(E,Op,Tp,Hp,Wp,s), W != Wp.");
}

TEST(EmitterTest, DomainRules) {
  const auto c = parse_constraints(
      "forbid Temperature=high, Wind=strong\n"
      "depend Temperature -> Humidity: high->normal, medium->high, low->high\n",
      weather_schema());
  const auto program = emit_cip(weather_percent(), weather_entity(), c);
  EXPECT_NE(program.find("\n:- ent(E,_,high,_,strong,tr).\n"), std::string::npos);
  EXPECT_NE(program.find("\nent(E,O,high,normal,W,tr) :- ent(E,O,high,H,W,tr).\n"),
            std::string::npos);
  EXPECT_NE(program.find("\nent(E,O,low,high,W,tr) :- ent(E,O,low,H,W,tr).\n"), std::string::npos);
  // Humidity is no longer intervened on freely.
  EXPECT_EQ(program.find("ent(E,O,T,Hp,W,do)"), std::string::npos);
  EXPECT_EQ(program.find("chosen_h"), std::string::npos);

  EmitterOptions bare;
  bare.include_domain_rules = false;
  EXPECT_EQ(emit_cip(weather_percent(), weather_entity(), c, bare).find(":- ent(E,_,high"),
            std::string::npos);
}

TEST(EmitterTest, ImmutableDropsDisjunct) {
  const auto c = parse_constraints("immutable Outlook", weather_schema());
  const auto program = emit_cip(weather_percent(), weather_entity(), c);
  EXPECT_EQ(program.find("ent(E,Op,T,H,W,do)"), std::string::npos);
  EXPECT_NE(program.find("ent(E,O,Tp,H,W,do)"), std::string::npos);
  // expl rules still cover every feature.
  EXPECT_NE(program.find("expl(E,outlook,O)"), std::string::npos);
}

TEST(EmitterTest, NegativeOriginalFlipsDirection) {
  const auto e = parse_entity("rain,high,high,weak", weather_schema());
  const auto program = emit_cip(weather_percent(), e);
  EXPECT_NE(program.find("ent(E,O,T,H,W,tr), cls(E,O,T,H,W,no),"), std::string::npos);
  EXPECT_NE(program.find("ent(E,O,T,H,W,s) :- ent(E,O,T,H,W,do), cls(E,O,T,H,W,yes)."),
            std::string::npos);
}

TEST(EmitterTest, ParseFactsRecoversInputs) {
  const auto facts = parse_facts(emit_cip(weather_percent(), weather_entity()));
  EXPECT_EQ(facts.model.prior(0), 64);
  EXPECT_EQ(facts.model.labels()[0], "yes");
  EXPECT_EQ(facts.entity.values, weather_entity().values);
  EXPECT_EQ(facts.entity.eid, "e");
  EXPECT_EQ(facts.maxint, 100000000);
  EXPECT_EQ(facts.model.schema()[1].atom, "temp");
  EXPECT_EQ(facts.model.conditional(0, 1, 0), 45);
  EXPECT_FALSE(facts.has_weak_constraints);
}

TEST(EmitterTest, RoundTripFixedPoint) {
  for (const bool weak : {false, true}) {
    EmitterOptions options;
    options.include_weak_constraints = weak;
    options.maxint = 5000000;
    const auto first = emit_cip(weather_percent(), weather_entity(), {}, options);
    const auto facts = parse_facts(first);
    EmitterOptions again;
    again.include_weak_constraints = facts.has_weak_constraints;
    again.maxint = facts.maxint;
    EXPECT_EQ(emit_cip(facts.model, facts.entity, {}, again), first);
  }
}

TEST(EmitterTest, ParseErrors) {
  auto program = emit_cip(weather_percent(), weather_entity());
  const auto at = program.find("entSchema");
  program.insert(at, "stray.\n");
  try {
    parse_facts(program);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 9u);
  }
  EXPECT_THROW(parse_facts("#maxint = 10.\ndom_o(a). dom_o(b).\nentSchema(o).\n"), Error);
  EXPECT_THROW(parse_facts("#maxint = 10.\ndom_o(a)\n"), ParseError);
}

TEST(EmitterTest, PredicateSuffixes) {
  const FeatureSchema schema({Feature{"Outlook", "outlook", {"a", "b"}},
                              Feature{"Overcast", "overcast", {"a", "b"}},
                              Feature{"Wind", "wind", {"a", "b"}}});
  EXPECT_EQ(predicate_suffixes(schema), (std::vector<std::string>{"ou", "ov", "w"}));
  const FeatureSchema clash({Feature{"Wind", "wind", {"a", "b"}},
                             Feature{"Windy", "windy", {"a", "b"}}});
  try {
    predicate_suffixes(clash);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("Wind, Windy"), std::string::npos);
  }
}

TEST(EmitterTest, SmallAndRenamedSchemas) {
  const FeatureSchema one({Feature{"Education", "education", {"school", "college"}}});
  const PercentModel m1(one, {"yes", "no"}, {50, 50}, {{{70, 20}, {30, 80}}});
  const auto p1 = emit_cip(m1, Entity{"x", {"school"}});
  EXPECT_NE(p1.find("pb_num(E,X_e,V,Fp) :- ent(E,X_e,tr), p_e_c(X_e, V, P1), p(V, D),"),
            std::string::npos);
  EXPECT_EQ(p1.find("prob_1"), std::string::npos);
  const auto facts = parse_facts(p1);
  EXPECT_EQ(emit_cip(facts.model, facts.entity), p1);

  const FeatureSchema two({Feature{"Outlook", "outlook", {"sunny", "rain"}},
                           Feature{"Wind", "wind", {"weak", "strong"}}});
  const PercentModel m2(two, {"yes", "no"}, {50, 50}, {{{50, 50}, {50, 50}}, {{50, 50}, {50, 50}}});
  const auto p2 = emit_cip(m2, Entity{"e", {"sunny", "weak"}});
  EXPECT_NE(p2.find("pb_num(E,O,W,V,Fp) :- ent(E,O,W,tr), prob_1(E,O,W,V,Ap), p(V, D),"),
            std::string::npos);
}

TEST(EmitterTest, RejectsValuesThatAreNotConstants) {
  const FeatureSchema schema({Feature{"A", "a", {"Big", "small"}}});
  const PercentModel m(schema, {"yes", "no"}, {50, 50}, {{{50, 50}, {50, 50}}});
  EXPECT_THROW(emit_cip(m, Entity{"e", {"small"}}), Error);
}

}  // namespace
}  // namespace cipx::dlv
