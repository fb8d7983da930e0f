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

#include "cipx/constraints.hpp"
#include "cipx/error.hpp"
#include "fixtures.hpp"

namespace cipx {
namespace {

using testing::weather_schema;

Entity entity(const std::string& text) { return parse_entity(text, weather_schema()); }

TEST(ConstraintsTest, ForbiddenCombination) {
  const auto c = parse_constraints("forbid Temperature=high, Wind=strong\n", weather_schema());
  EXPECT_FALSE(admits(c, entity("rain,high,high,strong")));
  EXPECT_TRUE(admits(c, entity("rain,high,high,weak")));
  EXPECT_TRUE(admits(c, entity("rain,low,high,strong")));
}

TEST(ConstraintsTest, EmptySetAdmitsEverything) {
  const ConstraintSet none;
  EXPECT_TRUE(none.empty());
  EXPECT_TRUE(admits(none, entity("sunny,high,high,strong")));
  EXPECT_EQ(propagate(none, entity("sunny,high,high,strong")), entity("sunny,high,high,strong"));
}

TEST(ConstraintsTest, UnmatchedBinding) {
  const auto c = parse_constraints("forbid Outlook=sunny", weather_schema());
  EXPECT_TRUE(admits(c, entity("rain,low,high,weak")));
  EXPECT_FALSE(admits(c, entity("sunny,low,high,weak")));
}

TEST(ConstraintsTest, DependencyPropagation) {
  const auto c = parse_constraints(
      "depend Temperature -> Humidity: high->normal, medium->high, low->high\n", weather_schema());
  EXPECT_EQ(propagate(c, entity("rain,medium,normal,weak")), entity("rain,medium,high,weak"));
  EXPECT_EQ(propagate(c, entity("rain,high,normal,weak")), entity("rain,high,normal,weak"));
  EXPECT_FALSE(c.intervenable(2));
  EXPECT_TRUE(c.intervenable(1));
  EXPECT_TRUE(c.is_dependency_target(2));
}

TEST(ConstraintsTest, ChainIsAppliedInDependencyOrder) {
  // Declared out of order: Humidity -> Wind depends on Temperature -> Humidity.
  const auto c = parse_constraints(
      "depend Humidity -> Wind: high->strong, normal->weak\n"
      "depend Temperature -> Humidity: high->normal, medium->high, low->high\n",
      weather_schema());
  ASSERT_EQ(c.dependencies().size(), 2u);
  EXPECT_EQ(c.dependencies()[0].source, 1u);
  const auto once = propagate(c, entity("rain,medium,normal,weak"));
  EXPECT_EQ(once, entity("rain,medium,high,strong"));
  EXPECT_EQ(propagate(c, once), once);
}

TEST(ConstraintsTest, Immutable) {
  const auto c = parse_constraints("% keep the sky\nimmutable Outlook\n", weather_schema());
  EXPECT_TRUE(c.is_immutable(0));
  EXPECT_FALSE(c.intervenable(0));
  EXPECT_TRUE(c.intervenable(3));
}

TEST(ConstraintsTest, FeaturesByAtom) {
  const auto c = parse_constraints("forbid temp=high", weather_schema());
  EXPECT_FALSE(admits(c, entity("rain,high,high,weak")));
}

TEST(ConstraintsTest, Errors) {
  const auto& s = weather_schema();
  EXPECT_THROW(parse_constraints("forbid Pressure=high", s), ParseError);
  EXPECT_THROW(parse_constraints("forbid Outlook=fog", s), ParseError);
  EXPECT_THROW(parse_constraints("forbid Outlook", s), ParseError);
  EXPECT_THROW(parse_constraints("allow Outlook=sunny", s), ParseError);
  EXPECT_THROW(parse_constraints("depend Temperature -> Humidity: high->normal", s), ParseError);
  EXPECT_THROW(parse_constraints("depend Wind -> Wind: strong->weak, weak->strong", s), Error);
  EXPECT_THROW(parse_constraints("depend Wind -> Humidity: strong->high, weak->high\n"
                                 "depend Humidity -> Wind: high->weak, normal->weak\n",
                                 s),
               Error);
  EXPECT_THROW(parse_constraints("depend Wind -> Humidity: strong->high, weak->high\n"
                                 "immutable Humidity\n",
                                 s),
               Error);
  EXPECT_THROW(parse_constraints("depend Wind -> Humidity: strong->high, weak->high\n"
                                 "depend Outlook -> Humidity: sunny->high, overcast->high, "
                                 "rain->high\n",
                                 s),
               Error);
  try {
    parse_constraints("\n\nforbid Outlook=fog\n", s);
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ConstraintsTest, FormatRoundTrip) {
  const auto c = parse_constraints(
      "forbid Temperature=high, Wind=strong\n"
      "depend Temperature -> Humidity: high->normal, medium->high, low->high\n"
      "immutable Outlook\n",
      weather_schema());
  const auto text = format_constraints(c);
  EXPECT_EQ(format_constraints(parse_constraints(text, weather_schema())), text);
}

TEST(ConstraintsTest, WithForbiddenAddsOne) {
  const auto c = ConstraintSet(weather_schema(), {}, {}, {}).with_forbidden({{{3, 0}}});
  EXPECT_FALSE(admits(c, Tuple{0, 0, 0, 0}));
}

}  // namespace
}  // namespace cipx
