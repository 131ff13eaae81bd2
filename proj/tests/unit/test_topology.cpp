// Copyright 2026 The catsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "catsim/topology.hpp"

namespace catsim::topology {
namespace {

std::set<std::vector<int>> support(const std::vector<ErrorTerm>& terms) {
  std::set<std::vector<int>> s;
  for (const auto& t : terms) s.insert(t.pattern.pairs_per_source);
  return s;
}

TEST(Topology, FourSourceWiring) {
  EXPECT_EQ(FusionTopology::star().edges,
            (std::vector<FusionEdge>{{"1", "4"}, {"5", "8"}, {"4", "8"}}));
  EXPECT_EQ(FusionTopology::chain().edges,
            (std::vector<FusionEdge>{{"2", "4"}, {"3", "5"}, {"6", "8"}}));
  EXPECT_EQ(FusionTopology::star().output_arms(),
            (std::vector<std::string>{"1", "2", "3", "4", "5", "6", "7", "8"}));
  EXPECT_FALSE(FusionTopology::star().has_eo_fusion());
  EXPECT_TRUE(FusionTopology::chain().has_eo_fusion());
}

TEST(Topology, CustomValidation) {
  EXPECT_THROW(FusionTopology::custom(2, {{"1", "9"}}), std::invalid_argument);
  EXPECT_THROW(FusionTopology::custom(2, {{"1", "2"}}), std::invalid_argument);
  EXPECT_THROW(FusionTopology::custom(3, {{"1", "4"}, {"2", "3"}}), std::invalid_argument);
  EXPECT_NO_THROW(FusionTopology::custom(2, {{"2", "3"}}));
  EXPECT_THROW(parse_shape("ring"), std::invalid_argument);
}

TEST(Enumeration, OrderFiveTotals) {
  const auto star = enumerate_error_terms(FusionTopology::star(), 5);
  const auto chain = enumerate_error_terms(FusionTopology::chain(), 5);
  EXPECT_EQ(erroneous_multiplicity(star), 4);
  EXPECT_EQ(erroneous_multiplicity(chain), 6);
  EXPECT_LE(erroneous_multiplicity(star), erroneous_multiplicity(chain));
  EXPECT_EQ(support(star), (std::set<std::vector<int>>{
                               {2, 1, 1, 1}, {1, 2, 1, 1}, {1, 1, 2, 1}, {1, 1, 1, 2}}));
  EXPECT_EQ(support(chain), (std::set<std::vector<int>>{{2, 1, 1, 1},
                                                        {1, 2, 1, 1},
                                                        {1, 1, 2, 1},
                                                        {1, 1, 1, 2},
                                                        {2, 0, 2, 1},
                                                        {1, 2, 0, 2}}));
}

TEST(Enumeration, DesiredOrder) {
  for (const auto& topo : {FusionTopology::star(), FusionTopology::chain()}) {
    const auto terms = enumerate_error_terms(topo, 4);
    ASSERT_EQ(terms.size(), 1u);
    EXPECT_EQ(terms[0].pattern.pairs_per_source, (std::vector<int>{1, 1, 1, 1}));
    EXPECT_EQ(terms[0].multiplicity, 1);
    EXPECT_FALSE(terms[0].erroneous);
    EXPECT_EQ(erroneous_multiplicity(terms), 0);
  }
  EXPECT_TRUE(enumerate_error_terms(FusionTopology::star(), 3).empty());
}

TEST(Enumeration, StarInvariantUnderSourcePermutations) {
  const auto base = support(enumerate_error_terms(FusionTopology::star(), 5));
  std::vector<int> perm{0, 1, 2, 3};
  do {
    std::set<std::vector<int>> mapped;
    for (const auto& p : base) {
      std::vector<int> q(4);
      for (int i = 0; i < 4; ++i) q[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = p[static_cast<std::size_t>(i)];
      mapped.insert(q);
    }
    EXPECT_EQ(mapped, base);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(Enumeration, ChainInvariantUnderReversal) {
  for (int order = 5; order <= 6; ++order) {
    const auto base = support(enumerate_error_terms(FusionTopology::chain(), order));
    std::set<std::vector<int>> reversed;
    for (auto p : base) {
      std::reverse(p.begin(), p.end());
      reversed.insert(p);
    }
    EXPECT_EQ(reversed, base);
  }
}

TEST(Enumeration, CsvSummaryLine) {
  std::ostringstream out;
  write_error_terms_csv(out, enumerate_error_terms(FusionTopology::star(), 5), 5);
  EXPECT_NE(out.str().find("# total erroneous coefficient at order 5: 4"), std::string::npos);
  EXPECT_EQ(out.str().rfind("pattern,multiplicity,erroneous\n", 0), 0u);
}

TEST(Rate, Examples) {
  EXPECT_DOUBLE_EQ(n_fold_rate(1.0, 1.0, 76e6, 4, 1.0).n_fold_rate_hz, 76e6);
  EXPECT_EQ(n_fold_rate(0.058, 0.0, 76e6, 4, 1.0).n_fold_rate_hz, 0.0);
  EXPECT_TRUE(std::isinf(n_fold_rate(0.058, 0.0, 76e6, 4, 1.0).hours_per_event()));
  const double full = n_fold_rate(0.058, 0.265, 76e6, 4, 1.0).n_fold_rate_hz;
  const double half = n_fold_rate(0.058, 0.1325, 76e6, 4, 1.0).n_fold_rate_hz;
  EXPECT_NEAR(full / half, 16.0, 1e-9);

  const double factor = solve_success_factor(2.5e-3, 0.058, 0.265, 76e6, 4);
  const auto r = n_fold_rate(0.058, 0.265, 76e6, 4, factor);
  EXPECT_NEAR(r.n_fold_rate_hz * 3600.0, 9.0, 1e-9);
  EXPECT_NEAR(r.hours_per_event(), 1.0 / 9.0, 1e-9);

  const double pxi = implied_p_xi(2.8e-5, 76e6, 6, 0.5);
  EXPECT_NEAR(n_fold_rate(pxi, 1.0, 76e6, 6, 0.5).n_fold_rate_hz, 2.8e-5, 1e-15);
  EXPECT_THROW(n_fold_rate(0.1, 0.1, 76e6, 4, 0.0), std::invalid_argument);
}

TEST(Rate, MonotoneInEveryInput) {
  double last = -1.0;
  for (double p : {0.01, 0.02, 0.05, 0.1}) {
    const double r = n_fold_rate(p, 0.3, 76e6, 4, 0.5).n_fold_rate_hz;
    EXPECT_GT(r, last);
    last = r;
  }
  last = -1.0;
  for (double xi : {0.1, 0.2, 0.5, 1.0}) {
    const double r = n_fold_rate(0.05, xi, 76e6, 4, 0.5).n_fold_rate_hz;
    EXPECT_GT(r, last);
    last = r;
  }
  last = -1.0;
  for (double rep : {1e6, 1e7, 76e6}) {
    const double r = n_fold_rate(0.05, 0.3, rep, 4, 0.5).n_fold_rate_hz;
    EXPECT_GT(r, last);
    last = r;
  }
  last = -1.0;
  for (double f : {0.1, 0.5, 1.0}) {
    const double r = n_fold_rate(0.05, 0.3, 76e6, 4, f).n_fold_rate_hz;
    EXPECT_GT(r, last);
    last = r;
  }
}

TEST(Graph, StarAndChain) {
  for (const auto& topo : {FusionTopology::star(), FusionTopology::chain()}) {
    const auto g = graph_state_edges(topo);
    EXPECT_EQ(g.vertices.size(), 8u);
    EXPECT_EQ(g.edges.size(), 7u);
    std::map<std::string, int> degree;
    for (const auto& [a, b] : g.edges) {
      ++degree[a];
      ++degree[b];
    }
    int hubs = 0;
    for (const auto& [v, d] : degree) hubs += d == 7;
    EXPECT_EQ(hubs, 1);
  }
  const auto bell = graph_state_edges(FusionTopology::star(1));
  EXPECT_EQ(bell.vertices.size(), 2u);
  EXPECT_EQ(bell.edges.size(), 1u);
  EXPECT_THROW(graph_state_edges(FusionTopology::custom(2, {})), std::invalid_argument);
  EXPECT_EQ(fusion_wiring(FusionTopology::star()).edges.size(), 7u);
}

}  // namespace
}  // namespace catsim::topology
