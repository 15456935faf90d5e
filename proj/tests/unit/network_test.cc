// Copyright 2026 The rxmarket Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rxmarket/network.h"

#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.h"

namespace rxmarket {
namespace {

using testing::Star;
using testing::Triangle;

bool HasCode(const std::vector<NetworkViolation>& v, const std::string& code) {
  return std::any_of(v.begin(), v.end(), [&](const auto& x) { return x.code == code; });
}

TEST(Coalition, SetOperations) {
  const Coalition s = Coalition::Singleton(0).With(2);
  EXPECT_EQ(s.mask(), 0b101u);
  EXPECT_EQ(s.size(), 2u);
  EXPECT_TRUE(s.Contains(2));
  EXPECT_FALSE(s.Contains(1));
  EXPECT_EQ(s.ComplementIn(3).mask(), 0b010u);
  EXPECT_EQ(s.Without(0).mask(), 0b100u);
  EXPECT_TRUE(Coalition(0b100).IsSubsetOf(s));
  EXPECT_FALSE(Coalition(0b010).IsSubsetOf(s));
  EXPECT_EQ(s.Members(), (std::vector<std::size_t>{0, 2}));
  EXPECT_TRUE(Coalition().empty());
}

TEST(NetworkGraph, TriangleOperators) {
  const NetworkGraph g = Triangle();
  ASSERT_TRUE(g.IsValid());
  EXPECT_EQ(g.IncidentLinks(0), (std::vector<std::size_t>{0, 2}));
  EXPECT_EQ(g.IncidentLinks(2), (std::vector<std::size_t>{1, 2}));

  const Coalition s12(0b011);
  EXPECT_EQ(g.BoundaryLinks(s12), (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(g.InternalLinks(s12), (std::vector<std::size_t>{0}));
  EXPECT_EQ(g.InternalLinks(g.AllAreas()), (std::vector<std::size_t>{0, 1, 2}));
  EXPECT_TRUE(g.BoundaryLinks(g.AllAreas()).empty());
  EXPECT_TRUE(g.InternalLinks(Coalition::Singleton(1)).empty());
}

TEST(NetworkGraph, IdForms) {
  const NetworkGraph g = Triangle();
  const std::vector<AreaId> s = {AreaId{"a3"}, AreaId{"a2"}};
  const auto boundary = g.BoundaryLinks(s);
  ASSERT_EQ(boundary.size(), 2u);
  EXPECT_EQ(boundary[0].name, "e1");
  EXPECT_EQ(boundary[1].name, "e3");
  const auto internal = g.InternalLinks(s);
  ASSERT_EQ(internal.size(), 1u);
  EXPECT_EQ(internal[0].name, "e2");
  EXPECT_EQ(g.ToCoalition(s).mask(), 0b110u);
  EXPECT_EQ(g.Describe(Coalition(0b101)), "{a1,a3}");
}

TEST(NetworkGraph, LookupErrors) {
  const NetworkGraph g = Triangle();
  EXPECT_EQ(g.AreaIndex(AreaId{"a2"}), 1u);
  EXPECT_EQ(g.LinkIndex(LinkId{"e3"}), 2u);
  EXPECT_FALSE(g.FindArea(AreaId{"zz"}));
  try {
    g.AreaIndex(AreaId{"zz"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unknown-area");
  }
  try {
    g.LinkIndex(LinkId{"zz"});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "unknown-link");
  }
}

TEST(NetworkGraph, ValidationCodes) {
  using L = NetworkGraph::Link;
  const AreaId a{"a"}, b{"b"}, c{"c"};
  EXPECT_TRUE(HasCode(NetworkGraph({}, {}).Validate(), "no-areas"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, a}, {{LinkId{"x"}, a, a}}).Validate(), "duplicate-area"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, b}, {{LinkId{"x"}, a, a}, {LinkId{"y"}, a, b}}).Validate(),
                      "self-loop"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, b}, {L{LinkId{"x"}, a, b}, L{LinkId{"y"}, b, a}}).Validate(),
                      "parallel-link"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, b}, {L{LinkId{"x"}, a, b}, L{LinkId{"x"}, a, b}}).Validate(),
                      "duplicate-link"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, b}, {L{LinkId{"x"}, a, c}}).Validate(),
                      "undeclared-endpoint"));
  EXPECT_TRUE(HasCode(NetworkGraph({a, b, c}, {L{LinkId{"x"}, a, b}}).Validate(), "disconnected"));
  EXPECT_TRUE(HasCode(NetworkGraph({AreaId{""}}, {}).Validate(), "empty-id"));
  // A single area is a valid (trivially connected) network.
  EXPECT_TRUE(NetworkGraph({a}, {}).IsValid());
}

TEST(NetworkGraph, StarCenter) {
  EXPECT_EQ(Star(4).StarCenter(), std::optional<std::size_t>(0));
  EXPECT_FALSE(Triangle().StarCenter());
  const NetworkGraph path({AreaId{"p"}, AreaId{"q"}, AreaId{"r"}},
                          {{LinkId{"x"}, AreaId{"p"}, AreaId{"q"}},
                           {LinkId{"y"}, AreaId{"q"}, AreaId{"r"}}});
  EXPECT_EQ(path.StarCenter(), std::optional<std::size_t>(1));
  const NetworkGraph one({AreaId{"p"}, AreaId{"q"}}, {{LinkId{"x"}, AreaId{"p"}, AreaId{"q"}}});
  EXPECT_EQ(one.StarCenter(), std::optional<std::size_t>(0));
}

}  // namespace
}  // namespace rxmarket
