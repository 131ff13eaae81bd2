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

#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "catsim/fock.hpp"
#include "catsim/qubits.hpp"

namespace catsim::fock {
namespace {

constexpr double kTol = 1e-12;

RegistryPtr modes(const std::string& arm, int n) {
  std::vector<ModeLabel> labels;
  for (int i = 0; i < n; ++i) labels.push_back({arm, Polarization::H, "t" + std::to_string(i)});
  return make_registry(labels);
}

ModeLabel mode(const std::string& arm, int i) { return {arm, Polarization::H, "t" + std::to_string(i)}; }

// Dense oracle over up to 4 modes and 4 photons: index = sum n_m 5^m.
struct DenseOracle {
  static constexpr int kModes = 4;
  static constexpr int kMax = 4;
  std::array<Complex, 625> amp{};
  int truncation;

  explicit DenseOracle(int trunc) : truncation(trunc) { amp[0] = 1.0; }

  static std::array<int, kModes> occ(int index) {
    std::array<int, kModes> n{};
    for (int m = 0; m < kModes; ++m, index /= 5) n[m] = index % 5;
    return n;
  }
  static int index(const std::array<int, kModes>& n) {
    int i = 0;
    for (int m = kModes - 1; m >= 0; --m) i = i * 5 + n[m];
    return i;
  }
  void create(int m, Complex c) {
    std::array<Complex, 625> next{};
    for (int i = 0; i < 625; ++i) {
      if (amp[i] == Complex{}) continue;
      auto n = occ(i);
      int total = n[0] + n[1] + n[2] + n[3];
      if (total + 1 > truncation || n[m] == kMax) continue;
      const double f = std::sqrt(n[m] + 1.0);
      ++n[m];
      next[index(n)] += amp[i] * c * f;
    }
    amp = next;
  }
};

TEST(Vacuum, SingleTermUnitNorm) {
  const auto s = vacuum(modes("a", 4), 8);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
  EXPECT_NEAR(std::abs(inner_product(s, s) - Complex(1.0)), 0.0, kTol);
}

TEST(Vacuum, EmptyRegistry) {
  const auto s = vacuum(make_registry({}), 0);
  EXPECT_EQ(s.size(), 1u);
  EXPECT_EQ(s.terms().begin()->first.total(), 0);
}

TEST(Creation, BosonicFactor) {
  const auto reg = modes("a", 1);
  const auto one = apply_creation(vacuum(reg, 4), mode("a", 0));
  EXPECT_NEAR(std::abs(one.amplitude(OccupationVector::from_photons({0})) - 1.0), 0.0, kTol);
  const auto two = apply_creation(one, mode("a", 0));
  EXPECT_NEAR(std::abs(two.amplitude(OccupationVector::from_photons({0, 0})) - std::sqrt(2.0)),
              0.0, kTol);
}

TEST(Creation, UnregisteredModeThrows) {
  EXPECT_THROW(apply_creation(vacuum(modes("a", 1), 2), mode("b", 0)), std::invalid_argument);
}

TEST(Creation, TruncationDropsTerms) {
  // (1 + a0)|0> then a1 with truncation 1: only a1|0> survives, norm 1 of 2.
  const auto reg = modes("a", 2);
  auto s = add(vacuum(reg, 1), apply_creation(vacuum(reg, 1), mode("a", 0)));
  EXPECT_NEAR(s.norm_squared(), 2.0, kTol);
  s = apply_creation(s, mode("a", 1));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.norm_squared(), 1.0, kTol);
}

TEST(Creation, DistinctModesCommute) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 50; ++trial) {
    auto s = vacuum(modes("a", 4), 6);
    for (int j = 0; j < 3; ++j) s = apply_creation(s, mode("a", pick(rng)), Complex(g(rng), g(rng)));
    int m1 = pick(rng), m2 = pick(rng);
    if (m1 == m2) m2 = (m1 + 1) % 4;
    const auto ab = apply_creation(apply_creation(s, mode("a", m1)), mode("a", m2));
    const auto ba = apply_creation(apply_creation(s, mode("a", m2)), mode("a", m1));
    ASSERT_EQ(ab.size(), ba.size());
    // Same factors, different multiplication order: equal to rounding.
    for (const auto& [occ, amp] : ab.terms()) {
      ASSERT_NEAR(std::abs(amp - ba.amplitude(occ)), 0.0, 1e-15 * std::abs(amp));
    }
  }
}

TEST(Creation, MatchesDenseOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick(0, 3), len(1, 6), trunc(1, 4);
  std::normal_distribution<double> g;
  const auto reg = modes("a", 4);
  for (int trial = 0; trial < 200; ++trial) {
    const int t = trunc(rng);
    DenseOracle oracle(t);
    auto s = vacuum(reg, t);
    const int steps = len(rng);
    for (int j = 0; j < steps; ++j) {
      const int m = pick(rng);
      const Complex c(g(rng), g(rng));
      oracle.create(m, c);
      s = apply_creation(s, mode("a", m), c);
    }
    double oracle_norm = 0.0;
    for (int i = 0; i < 625; ++i) {
      oracle_norm += std::norm(oracle.amp[i]);
      const auto n = DenseOracle::occ(i);
      const std::vector<int> counts(n.begin(), n.end());
      if (n[0] + n[1] + n[2] + n[3] > t) continue;
      ASSERT_NEAR(std::abs(s.amplitude(OccupationVector::from_counts(counts)) - oracle.amp[i]),
                  0.0, kTol * (1.0 + std::abs(oracle.amp[i])));
    }
    ASSERT_NEAR(s.norm_squared(), oracle_norm, kTol * (1.0 + oracle_norm));
  }
}

TEST(InnerProduct, GhzOverlaps) {
  std::vector<std::string> arms;
  for (int i = 0; i < 8; ++i) arms.push_back("a" + std::to_string(i));
  const auto reg = ModeRegistry::product(arms, {"x"});
  const auto ptr = std::make_shared<const ModeRegistry>(reg);
  std::vector<Complex> h(256), v(256);
  h.front() = 1.0;
  v.back() = 1.0;
  const auto sh = qubit_state(ptr, arms, h, "x");
  const auto sv = qubit_state(ptr, arms, v, "x");
  const auto cat = qubit_state(ptr, arms, ghz_amplitudes(8), "x");
  EXPECT_NEAR(std::abs(inner_product(sh, sv)), 0.0, kTol);
  EXPECT_NEAR(std::abs(inner_product(cat, sh) - 1.0 / std::sqrt(2.0)), 0.0, kTol);
  EXPECT_NEAR(std::abs(inner_product(cat, cat) - 1.0), 0.0, kTol);
}

TEST(InnerProduct, RegistryMismatchThrows) {
  EXPECT_THROW(inner_product(vacuum(modes("a", 1), 1), vacuum(modes("b", 1), 1)),
               std::invalid_argument);
}

TEST(InnerProduct, ConjugateSymmetric) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> pick(0, 3);
  std::normal_distribution<double> g;
  const auto reg = modes("a", 4);
  auto random_state = [&] {
    auto s = vacuum(reg, 3).scaled(Complex(g(rng), g(rng)));
    for (int j = 0; j < 4; ++j) {
      s = add(s, apply_creation(s, mode("a", pick(rng)), Complex(g(rng), g(rng))));
    }
    return s;
  };
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = random_state(), b = random_state();
    EXPECT_NEAR(std::abs(inner_product(a, b) - std::conj(inner_product(b, a))), 0.0, 1e-10);
  }
}

TEST(Tensor, Examples) {
  const auto ra = modes("a", 1), rb = modes("b", 1);
  const auto vv = tensor_product(vacuum(ra, 2), vacuum(rb, 2));
  EXPECT_EQ(vv.size(), 1u);
  EXPECT_EQ(vv.terms().begin()->first.total(), 0);

  const auto one = tensor_product(apply_creation(vacuum(ra, 1), mode("a", 0)),
                                  apply_creation(vacuum(rb, 1), mode("b", 0)));
  EXPECT_EQ(one.size(), 1u);
  EXPECT_NEAR(std::abs(one.terms().begin()->second - 1.0), 0.0, kTol);

  const Complex al(0.6), be(0.0, 0.8), ga(0.28), de(0.96);
  const auto x = add(vacuum(ra, 1).scaled(al), apply_creation(vacuum(ra, 1), mode("a", 0), be));
  const auto y = add(vacuum(rb, 1).scaled(ga), apply_creation(vacuum(rb, 1), mode("b", 0), de));
  const auto xy = tensor_product(x, y);
  ASSERT_EQ(xy.size(), 4u);
  const auto& reg = xy.registry();
  const auto ia = static_cast<std::uint16_t>(reg.index_of(mode("a", 0)));
  const auto ib = static_cast<std::uint16_t>(reg.index_of(mode("b", 0)));
  EXPECT_NEAR(std::abs(xy.amplitude(OccupationVector::from_photons({})) - al * ga), 0.0, kTol);
  EXPECT_NEAR(std::abs(xy.amplitude(OccupationVector::from_photons({ia})) - be * ga), 0.0, kTol);
  EXPECT_NEAR(std::abs(xy.amplitude(OccupationVector::from_photons({ib})) - al * de), 0.0, kTol);
  EXPECT_NEAR(std::abs(xy.amplitude(OccupationVector::from_photons({ia, ib})) - be * de), 0.0,
              kTol);
}

TEST(Tensor, OverlappingModesThrow) {
  EXPECT_THROW(tensor_product(vacuum(modes("a", 1), 1), vacuum(modes("a", 1), 1)),
               std::invalid_argument);
}

TEST(Tensor, NormIsProductOfNorms) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    auto a = vacuum(modes("a", 2), 3).scaled(g(rng));
    auto b = vacuum(modes("b", 2), 3).scaled(g(rng));
    for (int j = 0; j < 3; ++j) {
      a = add(a, apply_creation(a, mode("a", j % 2), Complex(g(rng), g(rng))));
      b = add(b, apply_creation(b, mode("b", (j + 1) % 2), Complex(g(rng), g(rng))));
    }
    const auto ab = tensor_product(a, b);
    EXPECT_NEAR(ab.norm_squared(), a.norm_squared() * b.norm_squared(),
                1e-10 * ab.norm_squared());
  }
}

TEST(State, NormalizeAndPrune) {
  const auto reg = modes("a", 2);
  auto s = add(vacuum(reg, 2).scaled(3.0), apply_creation(vacuum(reg, 2), mode("a", 1), 1e-17));
  EXPECT_EQ(s.size(), 1u);
  EXPECT_NEAR(s.normalized().norm_squared(), 1.0, kTol);
  for (const auto& [occ, amp] : s.terms()) EXPECT_LE(occ.total(), s.truncation());
}

TEST(State, SerializationRoundTrip) {
  const auto reg = modes("a", 3);
  auto s = vacuum(reg, 3).scaled(Complex(0.1, -0.3));
  s = add(s, apply_creation(apply_creation(s, mode("a", 2), Complex(0.7, 0.2)), mode("a", 0),
                            1.0 / 3.0));
  std::ostringstream out;
  write_state(out, s);
  std::istringstream in(out.str());
  const auto back = read_state(in);
  EXPECT_EQ(back.registry(), s.registry());
  ASSERT_EQ(back.size(), s.size());
  for (const auto& [occ, amp] : s.terms()) EXPECT_EQ(back.amplitude(occ), amp);
}

TEST(Registry, LookupIsBijective) {
  const auto reg = ModeRegistry::product({"1", "2"}, {"e", "o"});
  ASSERT_EQ(reg.size(), 8u);
  for (std::size_t i = 0; i < reg.size(); ++i) EXPECT_EQ(reg.index_of(reg.label(i)), i);
  EXPECT_THROW(ModeRegistry({{"1", Polarization::H, "e"}, {"1", Polarization::H, "e"}}),
               std::invalid_argument);
}

}  // namespace
}  // namespace catsim::fock
