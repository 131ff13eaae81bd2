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

#include "catsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace catsim::topology {

std::string to_string(Shape shape) {
  switch (shape) {
    case Shape::chain: return "chain";
    case Shape::star: return "star";
    case Shape::custom: return "custom";
  }
  return "custom";
}

Shape parse_shape(const std::string& name) {
  if (name == "chain") return Shape::chain;
  if (name == "star") return Shape::star;
  if (name == "custom") return Shape::custom;
  throw std::invalid_argument("unknown topology shape '" + name + "'");
}

SourceArms source_arms(int index) {
  if (index < 0) throw std::invalid_argument("negative source index");
  const int first = 2 * index + 1, second = 2 * index + 2;
  if (index % 2 == 0) return {std::to_string(first), std::to_string(second)};
  return {std::to_string(second), std::to_string(first)};
}

namespace {

// Source owning each arm.
std::map<std::string, int> arm_owners(int n_sources) {
  std::map<std::string, int> owner;
  for (int s = 0; s < n_sources; ++s) {
    const auto arms = source_arms(s);
    owner[arms.e_arm] = s;
    owner[arms.o_arm] = s;
  }
  return owner;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) const {
    while (parent.at(static_cast<std::size_t>(x)) != x) x = parent.at(static_cast<std::size_t>(x));
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent.at(static_cast<std::size_t>(b)) = a;
    return true;
  }
};

}  // namespace

FusionTopology FusionTopology::star(int n_sources) {
  if (n_sources < 1) throw std::invalid_argument("star topology needs at least one source");
  FusionTopology t;
  t.n_sources = n_sources;
  t.shape = Shape::star;
  std::vector<std::string> reps;
  for (int s = 0; s < n_sources; ++s) reps.push_back(source_arms(s).e_arm);
  while (reps.size() > 1) {
    std::vector<std::string> next;
    for (std::size_t i = 0; i + 1 < reps.size(); i += 2) {
      t.edges.push_back({reps[i], reps[i + 1]});
      next.push_back(reps[i + 1]);
    }
    if (reps.size() % 2 == 1) next.push_back(reps.back());
    reps = std::move(next);
  }
  return t;
}

FusionTopology FusionTopology::chain(int n_sources) {
  if (n_sources < 1) throw std::invalid_argument("chain topology needs at least one source");
  FusionTopology t;
  t.n_sources = n_sources;
  t.shape = Shape::chain;
  for (int s = 0; s + 1 < n_sources; ++s) {
    t.edges.push_back({source_arms(s).o_arm, source_arms(s + 1).e_arm});
  }
  return t;
}

FusionTopology FusionTopology::custom(int n_sources, std::vector<FusionEdge> edges) {
  FusionTopology t;
  t.n_sources = n_sources;
  t.shape = Shape::custom;
  t.edges = std::move(edges);
  t.validate();
  return t;
}

std::vector<std::string> FusionTopology::output_arms() const {
  std::vector<std::string> arms;
  for (int i = 1; i <= 2 * n_sources; ++i) arms.push_back(std::to_string(i));
  return arms;
}

void FusionTopology::validate() const {
  if (n_sources < 1) throw std::invalid_argument("topology needs at least one source");
  const auto owner = arm_owners(n_sources);
  UnionFind groups(n_sources);
  for (const auto& e : edges) {
    auto a = owner.find(e.arm1), b = owner.find(e.arm2);
    if (a == owner.end() || b == owner.end()) {
      throw std::invalid_argument("fusion edge (" + e.arm1 + "," + e.arm2 + ") names an unknown arm");
    }
    if (e.arm1 == e.arm2 || !groups.unite(a->second, b->second)) {
      throw std::invalid_argument("fusion edge (" + e.arm1 + "," + e.arm2 +
                                  ") joins arms that are already connected");
    }
  }
}

bool FusionTopology::has_eo_fusion() const {
  for (const auto& e : edges) {
    for (const auto& arm : {e.arm1, e.arm2}) {
      for (int s = 0; s < n_sources; ++s) {
        if (source_arms(s).o_arm == arm) return true;
      }
    }
  }
  return false;
}

bool FusionTopology::connected() const {
  const auto owner = arm_owners(n_sources);
  UnionFind groups(n_sources);
  int components = n_sources;
  for (const auto& e : edges) {
    if (groups.unite(owner.at(e.arm1), owner.at(e.arm2))) --components;
  }
  return components == 1;
}

int EmissionPattern::total() const {
  return std::accumulate(pairs_per_source.begin(), pairs_per_source.end(), 0);
}

std::string EmissionPattern::to_string() const {
  std::string s = "(";
  for (std::size_t i = 0; i < pairs_per_source.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(pairs_per_source[i]);
  }
  return s + ")";
}

bool can_fill_all_arms(const FusionTopology& topology, const EmissionPattern& pattern) {
  topology.validate();
  const int n = topology.n_sources;
  if (static_cast<int>(pattern.pairs_per_source.size()) != n) {
    throw std::invalid_argument("emission pattern length does not match source count");
  }
  for (int k : pattern.pairs_per_source) {
    if (k < 0) throw std::invalid_argument("negative pair count");
  }

  // Each pair leaves the synthesizer as HH or VV on (e-arm, o-arm); choose
  // how many of each source's pairs are HH.
  std::vector<int> h_pairs(static_cast<std::size_t>(n), 0);
  const auto arms = topology.output_arms();
  for (;;) {
    std::map<std::string, std::pair<int, int>> photons;  // arm -> (H, V)
    for (int s = 0; s < n; ++s) {
      const auto sa = source_arms(s);
      const int h = h_pairs[static_cast<std::size_t>(s)];
      const int v = pattern.pairs_per_source[static_cast<std::size_t>(s)] - h;
      photons[sa.e_arm] = {h, v};
      photons[sa.o_arm] = {h, v};
    }
    for (const auto& e : topology.edges) {
      auto& a = photons[e.arm1];
      auto& b = photons[e.arm2];
      std::swap(a.second, b.second);  // H transmits, V reflects
    }
    const bool full = std::all_of(arms.begin(), arms.end(), [&](const std::string& arm) {
      const auto& p = photons[arm];
      return p.first + p.second > 0;
    });
    if (full) return true;

    // Next assignment (odometer over 0..n_s).
    int s = 0;
    for (; s < n; ++s) {
      auto& h = h_pairs[static_cast<std::size_t>(s)];
      if (h < pattern.pairs_per_source[static_cast<std::size_t>(s)]) {
        ++h;
        break;
      }
      h = 0;
    }
    if (s == n) return false;
  }
}

std::vector<ErrorTerm> enumerate_error_terms(const FusionTopology& topology, int order) {
  topology.validate();
  const int n = topology.n_sources;
  std::vector<ErrorTerm> terms;
  if (order < n) return terms;

  // Compositions of `order` into n non-negative parts, lexicographically
  // descending from (order, 0, ..., 0).
  std::vector<int> parts(static_cast<std::size_t>(n), 0);
  auto visit = [&](auto&& self, int index, int remaining) -> void {
    if (index == n - 1) {
      parts[static_cast<std::size_t>(index)] = remaining;
      EmissionPattern pattern{parts};
      if (can_fill_all_arms(topology, pattern)) {
        const bool desired = std::all_of(parts.begin(), parts.end(), [](int k) { return k == 1; });
        terms.push_back({pattern, 1, !desired});
      }
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      parts[static_cast<std::size_t>(index)] = k;
      self(self, index + 1, remaining - k);
    }
  };
  visit(visit, 0, order);
  return terms;
}

int erroneous_multiplicity(const std::vector<ErrorTerm>& terms) {
  int total = 0;
  for (const auto& t : terms) {
    if (t.erroneous) total += t.multiplicity;
  }
  return total;
}

void write_error_terms_csv(std::ostream& out, const std::vector<ErrorTerm>& terms, int order) {
  out << "pattern,multiplicity,erroneous\n";
  for (const auto& t : terms) {
    out << t.pattern.to_string() << ',' << t.multiplicity << ',' << (t.erroneous ? "true" : "false")
        << '\n';
  }
  out << "# total erroneous coefficient at order " << order << ": " << erroneous_multiplicity(terms)
      << '\n';
}

double RateEstimate::hours_per_event() const {
  if (n_fold_rate_hz <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / (n_fold_rate_hz * 3600.0);
}

RateEstimate n_fold_rate(double p, double xi, double repetition_rate_hz, int n_pairs,
                         double success_factor) {
  if (p < 0.0 || xi < 0.0 || repetition_rate_hz < 0.0 || n_pairs < 0) {
    throw std::invalid_argument("rate inputs must be non-negative");
  }
  if (!(success_factor > 0.0 && success_factor <= 1.0)) {
    throw std::invalid_argument("success_factor must lie in (0, 1]");
  }
  return {repetition_rate_hz * std::pow(p * xi, n_pairs) * success_factor,
          p, xi, repetition_rate_hz, n_pairs, success_factor};
}

double solve_success_factor(double rate_hz, double p, double xi, double repetition_rate_hz,
                            int n_pairs) {
  const double base = repetition_rate_hz * std::pow(p * xi, n_pairs);
  if (base <= 0.0) throw std::invalid_argument("zero base rate");
  return rate_hz / base;
}

double implied_p_xi(double rate_hz, double repetition_rate_hz, int n_pairs, double success_factor) {
  if (repetition_rate_hz <= 0.0 || success_factor <= 0.0 || n_pairs <= 0) {
    throw std::invalid_argument("implied_p_xi needs positive inputs");
  }
  return std::pow(rate_hz / (repetition_rate_hz * success_factor), 1.0 / n_pairs);
}

Graph graph_state_edges(const FusionTopology& topology) {
  topology.validate();
  if (!topology.connected()) throw std::invalid_argument("topology is disconnected");
  Graph g;
  g.vertices = topology.output_arms();
  if (topology.edges.empty()) {
    const auto sa = source_arms(0);
    g.edges.emplace_back(sa.e_arm, sa.o_arm);
    return g;
  }
  const std::string hub = topology.edges.front().arm1;
  for (const auto& v : g.vertices) {
    if (v != hub) g.edges.emplace_back(hub, v);
  }
  return g;
}

Graph fusion_wiring(const FusionTopology& topology) {
  topology.validate();
  Graph g;
  g.vertices = topology.output_arms();
  for (int s = 0; s < topology.n_sources; ++s) {
    const auto sa = source_arms(s);
    g.edges.emplace_back(sa.e_arm, sa.o_arm);
  }
  for (const auto& e : topology.edges) g.edges.emplace_back(e.arm1, e.arm2);
  return g;
}

}  // namespace catsim::topology
