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


#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "catsim/config.hpp"
#include "catsim/experiment.hpp"
#include "catsim/qubits.hpp"

namespace catsim::experiment {
namespace {

using fock::Complex;
using fock::Polarization;
using sources::PdcSource;
using topology::FusionTopology;

constexpr double kTol = 1e-12;
constexpr double kSumTol = 1e-10;

PdcSource source(double p, double path = 1.0, double fusion = 1.0) {
  PdcSource s;
  s.pair_probability = p;
  s.path_overlap = path;
  s.fusion_visibility = fusion;
  return s;
}

Apparatus ideal(int n_sources, double xi = 0.265) {
  return make_apparatus(std::vector<PdcSource>(static_cast<std::size_t>(n_sources), source(0.058)),
                        FusionTopology::star(n_sources), xi, n_sources);
}

Apparatus noisy_two_source(double xi = 0.4, int truncation = 3) {
  return make_apparatus({source(0.1, 0.9, 0.8), source(0.1, 0.9, 0.8)}, FusionTopology::star(2), xi,
                        truncation);
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

TEST(Setting, ParseAndLabel) {
  EXPECT_EQ(MeasurementSetting::parse("HV", 8).kind(), MeasurementSetting::Kind::hv);
  const auto k3 = MeasurementSetting::parse("k3", 8);
  EXPECT_EQ(k3.k(), 3);
  EXPECT_EQ(k3.label(), "k3");
  EXPECT_NEAR(k3.thetas()[5], 3 * std::numbers::pi / 8, kTol);
  EXPECT_THROW(MeasurementSetting::parse("k16", 8), std::invalid_argument);
  EXPECT_THROW(MeasurementSetting::parse("x", 8), std::invalid_argument);
  EXPECT_THROW(MeasurementSetting::custom({7.0}), std::invalid_argument);
}

TEST(Pattern, StringRoundTrip) {
  EXPECT_EQ(pattern_string(0, 8, true), "HHHHHHHH");
  EXPECT_EQ(pattern_string(255, 8, false), "--------");
  EXPECT_EQ(pattern_string(0x80, 8, true), "VHHHHHHH");
  for (std::size_t i = 0; i < 256; ++i) {
    EXPECT_EQ(parse_pattern(pattern_string(i, 8, i % 2)), i);
  }
  EXPECT_EQ(minus_count(0b1011), 3);
}

TEST(Apparatus, DefaultConfigWiring) {
  const auto a = build_apparatus(cli::default_config());
  EXPECT_EQ(a.registry->size(), 32u);
  EXPECT_EQ(a.n_arms(), 8);
  int pbs_count = 0;
  for (const auto& e : a.fusion_elements) pbs_count += e.name() == "pbs";
  EXPECT_EQ(pbs_count, 3);
  EXPECT_EQ(a.topology.edges, (std::vector<topology::FusionEdge>{{"1", "4"}, {"5", "8"}, {"4", "8"}}));
}

TEST(Apparatus, TwoSourceTestbed) {
  auto config = cli::default_config();
  config.sources.count = 2;
  config.sources.truncation_pairs = 3;
  config.run.settings = {"HV", "k0", "k1", "k2", "k3"};
  const auto a = build_apparatus(config);
  EXPECT_EQ(a.registry->size(), 16u);
  int pbs_count = 0;
  for (const auto& e : a.fusion_elements) pbs_count += e.name() == "pbs";
  EXPECT_EQ(pbs_count, 1);
}

TEST(Apparatus, ChainTopologyEdges) {
  auto config = cli::default_config();
  config.topology.shape = "chain";
  const auto a = build_apparatus(config);
  EXPECT_EQ(a.topology.edges, (std::vector<topology::FusionEdge>{{"2", "4"}, {"3", "5"}, {"6", "8"}}));
}

// Four one-pair sources embedded in the apparatus registry.
fock::AmplitudeState four_pairs(const Apparatus& a) {
  fock::AmplitudeState s = sources::pdc_sector(a.sources[0], 1).normalized();
  for (std::size_t i = 1; i < a.sources.size(); ++i) {
    s = fock::tensor_product(s, sources::pdc_sector(a.sources[i], 1).normalized());
  }
  return fock::embed(s, a.registry);
}

TEST(Projector, IdealPairsGiveCatState) {
  const auto a = ideal(4);
  const auto out = propagate(a, four_pairs(a));
  const auto sector = ghz_projector_sector(out, a.output_arms);
  EXPECT_NEAR(sector.norm_squared(), 1.0 / 8.0, kTol);
  const auto q = fock::qubit_overlap(sector, a.output_arms, fock::ghz_amplitudes(8));
  EXPECT_NEAR(q.fidelity(), 1.0, kTol);
}

TEST(Projector, MixedPolarizationsAtFusionInputsVanish) {
  const auto a = ideal(4);
  // Source 0 and 1 in HH, sources 2 and 3 in VV: arms 1,4 carry H; 5,8 carry V.
  std::vector<Complex> amps(256, 0.0);
  amps[0b00001111] = 1.0;
  std::vector<std::string> arms;
  for (int s = 0; s < 4; ++s) {
    const auto sa = topology::source_arms(s);
    arms.push_back(sa.e_arm);
    arms.push_back(sa.o_arm);
  }
  const auto in = fock::qubit_state(a.registry, arms, amps, "e");
  const auto out = ghz_projector_sector(propagate(a, in), a.output_arms);
  EXPECT_NEAR(out.norm_squared(), 0.0, kTol);
}

TEST(Filter, Examples) {
  std::set<int> one_each;
  for (int arm = 0; arm < 8; ++arm) one_each.insert(2 * arm + (arm % 3 == 0));
  const auto idx = coincidence_unit_filter(one_each, 8);
  ASSERT_TRUE(idx.has_value());
  EXPECT_EQ(pattern_string(*idx, 8, true), "VHHVHHVH");
  auto nine = one_each;
  nine.insert(2 * 3 + 1);
  nine.insert(2 * 3);
  EXPECT_FALSE(coincidence_unit_filter(nine, 8).has_value());
  auto seven = one_each;
  seven.erase(seven.begin());
  EXPECT_FALSE(coincidence_unit_filter(seven, 8).has_value());
  EXPECT_THROW(coincidence_unit_filter({16}, 8), std::invalid_argument);
}

// Enumerates which photons survive, maps the surviving photons to fired
// bucket detectors and runs the coincidence filter.
std::vector<double> detection_oracle(const fock::AmplitudeState& state,
                                     const std::vector<std::string>& arms,
                                     const MeasurementSetting& setting, double xi) {
  fock::AmplitudeState s = state;
  for (const auto& e : analyzer_elements(setting, arms, AnalyzerMode::abstract)) {
    s = optics::apply_element(s, e);
  }
  const int n = static_cast<int>(arms.size());
  std::vector<double> probs(std::size_t{1} << n, 0.0);
  for (const auto& [occ, amp] : s.terms()) {
    const auto photons = occ.photons();
    const std::size_t m = photons.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
      double w = std::norm(amp);
      std::set<int> fired;
      for (std::size_t j = 0; j < m; ++j) {
        const bool kept = mask >> j & 1U;
        w *= kept ? xi : 1.0 - xi;
        if (!kept) continue;
        const auto& label = s.registry().label(photons[j]);
        const auto it = std::find(arms.begin(), arms.end(), label.arm);
        if (it == arms.end()) continue;
        fired.insert(2 * static_cast<int>(it - arms.begin()) + (label.pol == Polarization::V));
      }
      if (const auto idx = coincidence_unit_filter(fired, n)) probs[*idx] += w;
    }
  }
  return probs;
}

TEST(Detection, MatchesEnumerationOracle) {
  std::mt19937_64 rng(41);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const std::vector<std::string> arms{"x", "y"};
  const auto reg = std::make_shared<const fock::ModeRegistry>(
      fock::ModeRegistry::product({"x", "y", "z"}, {"e", "o"}));
  for (int trial = 0; trial < 20; ++trial) {
    auto s = fock::vacuum(reg, 5).scaled(0.0);
    for (int t = 0; t < 6; ++t) {
      auto term = fock::vacuum(reg, 5);
      const int photons = 2 + t % 4;
      for (int j = 0; j < photons; ++j) {
        term = fock::apply_creation(term, reg->label(static_cast<std::size_t>(rng() % reg->size())));
      }
      s = fock::add(s, term.scaled(Complex(g(rng), g(rng))));
    }
    s = s.normalized();
    const double xi = u(rng);
    for (const auto& setting : {MeasurementSetting::hv(2), MeasurementSetting::kth(1, 2),
                                MeasurementSetting::custom({0.3, 2.0})}) {
      const auto got = detection_probabilities(s, arms, setting, AnalyzerMode::abstract, xi);
      const auto want = detection_oracle(s, arms, setting, xi);
      for (std::size_t i = 0; i < want.size(); ++i) ASSERT_NEAR(got[i], want[i], 1e-12);
    }
  }
}

TEST(Distribution, IdealHvAndK0) {
  const ExactSimulator sim(ideal(4));
  const auto hv = sim.distribution(MeasurementSetting::hv(8));
  EXPECT_NEAR(hv.conditional[0], 0.5, kTol);
  EXPECT_NEAR(hv.conditional[255], 0.5, kTol);
  for (std::size_t i = 1; i < 255; ++i) EXPECT_NEAR(hv.conditional[i], 0.0, kTol);
  const auto k0 = sim.distribution(MeasurementSetting::kth(0, 8));
  for (std::size_t i = 0; i < 256; ++i) {
    EXPECT_NEAR(k0.conditional[i], minus_count(i) % 2 ? 0.0 : 1.0 / 128.0, kTol);
  }
  EXPECT_NEAR(sim.ghz_fidelity(), 1.0, kTol);
}

TEST(Distribution, SumsToOneForEverySetting) {
  const ExactSimulator sim(noisy_two_source());
  for (int k = 0; k < 8; ++k) {
    EXPECT_NEAR(sum(sim.distribution(MeasurementSetting::kth(k, 4)).conditional), 1.0, kSumTol);
  }
  const auto hv = sim.distribution(MeasurementSetting::hv(4));
  EXPECT_NEAR(sum(hv.conditional), 1.0, kSumTol);
  EXPECT_NEAR(sum(hv.absolute), hv.accepted_probability, kTol);
}

TEST(Distribution, HalfTurnSwapsDetectors) {
  const ExactSimulator sim(noisy_two_source());
  for (int k = 0; k < 4; ++k) {
    const auto a = sim.distribution(MeasurementSetting::kth(k, 4));
    const auto b = sim.distribution(MeasurementSetting::kth(k + 4, 4));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(a.absolute[i], b.absolute[i ^ 0xF], 1e-15);
  }
}

TEST(Distribution, ConditionalIndependentOfEfficiency) {
  std::vector<std::vector<double>> results;
  for (double xi : {0.1, 0.265, 1.0}) {
    const ExactSimulator sim(ideal(4, xi));
    results.push_back(sim.distribution(MeasurementSetting::kth(3, 8)).conditional);
    const auto hv = sim.distribution(MeasurementSetting::hv(8)).conditional;
    EXPECT_NEAR(hv[0], 0.5, kTol);
  }
  for (std::size_t i = 0; i < 256; ++i) {
    EXPECT_NEAR(results[0][i], results[2][i], kTol);
    EXPECT_NEAR(results[1][i], results[2][i], kTol);
  }
}

TEST(Distribution, SourceOrderDoesNotMatter) {
  // Emitting the sources in reverse order and embedding gives the same state.
  const auto a = make_apparatus({source(0.05, 0.9, 0.8), source(0.1, 0.7, 0.6)},
                                FusionTopology::star(2), 0.3, 3);
  sources::EnsembleMember member{1.0, {{}, {}}};
  const auto forward = emit(a, member);
  const auto reg = member_registry(a, member);
  auto reversed = sources::pdc_emit(a.sources[1], 6);
  reversed = fock::tensor_product(reversed, sources::pdc_emit(a.sources[0], 6), 6);
  reversed = fock::embed(reversed, reg);
  ASSERT_EQ(forward.size(), reversed.size());
  for (const auto& [occ, amp] : forward.terms()) {
    EXPECT_NEAR(std::abs(reversed.amplitude(occ) - amp), 0.0, kTol);
  }
}

TEST(Distribution, RelabelingIdenticalSourcesKeepsHv) {
  // Star automorphism for two sources: swap the sources and the arm pairs
  // (1 <-> 4, 2 <-> 3). The PBS is symmetric in its inputs, so the H/V
  // distribution maps onto itself under the arm permutation.
  const auto a = make_apparatus({source(0.05, 0.9, 0.8), source(0.1, 0.7, 0.6)},
                                FusionTopology::star(2), 0.3, 3);
  const auto b = make_apparatus({source(0.1, 0.7, 0.6), source(0.05, 0.9, 0.8)},
                                FusionTopology::star(2), 0.3, 3);
  const auto da = ExactSimulator(a).distribution(MeasurementSetting::hv(4));
  const auto db = ExactSimulator(b).distribution(MeasurementSetting::hv(4));
  // Output arms are "1","2","3","4": bit 3 is arm 1.
  auto permute = [](std::size_t i) {
    const std::size_t b1 = i >> 3 & 1U, b2 = i >> 2 & 1U, b3 = i >> 1 & 1U, b4 = i & 1U;
    return b4 << 3 | b3 << 2 | b2 << 1 | b1;
  };
  for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(da.absolute[i], db.absolute[permute(i)], 1e-15);
}

TEST(Distribution, WaveplateAnalyzerMatchesAbstract) {
  auto a = noisy_two_source();
  auto b = a;
  b.analyzer = AnalyzerMode::waveplates;
  const ExactSimulator sa(a), sb(b);
  for (int k = 0; k < 4; ++k) {
    const auto x = sa.distribution(MeasurementSetting::kth(k, 4));
    const auto y = sb.distribution(MeasurementSetting::kth(k, 4));
    for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(x.absolute[i], y.absolute[i], 1e-15);
  }
}

TEST(MonteCarlo, DeterministicForSeed) {
  const auto dist = ExactSimulator(noisy_two_source()).distribution(MeasurementSetting::kth(1, 4));
  const auto a = monte_carlo_counts(dist, 76e6, 3600.0, 99);
  const auto b = monte_carlo_counts(dist, 76e6, 3600.0, 99);
  EXPECT_EQ(a.counts, b.counts);
  EXPECT_EQ(a.seed, 99u);
  const auto tiny = monte_carlo_counts(dist, 76e6, 1e-12, 5);
  EXPECT_EQ(tiny.total(), 0u);
  EXPECT_THROW(monte_carlo_counts(dist, 76e6, 0.0, 5), std::invalid_argument);
}

TEST(MonteCarlo, IdealNineEventsPerHour) {
  // Choose p so that 76 MHz * p^4 / 8 equals 9 per hour at xi = 1.
  const double rate = 9.0 / 3600.0;
  const double p = std::pow(rate * 8.0 / 76e6, 0.25);
  auto a = make_apparatus(std::vector<PdcSource>(4, source(p)), FusionTopology::star(4), 1.0, 4);
  const auto dist = ExactSimulator(a).distribution(MeasurementSetting::hv(8));
  // Per-source normalization shifts the rate by (1 + p + ...)^-4.
  const double expected = 76e6 * dist.accepted_probability * 40 * 3600.0;
  EXPECT_NEAR(expected, 360.0, 360.0 * 4.1 * p);
  const auto h = monte_carlo_counts(dist, 76e6, 40 * 3600.0, 2024);
  EXPECT_NEAR(static_cast<double>(h.total()), expected, 5.0 * std::sqrt(expected));
}

TEST(MonteCarlo, ConvergesInTotalVariation) {
  const auto dist = ExactSimulator(noisy_two_source()).distribution(MeasurementSetting::kth(1, 4));
  // Scale the run so the expected count is 1e5.
  const double rep = 1e5 / (dist.accepted_probability * 3600.0);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto h = monte_carlo_counts(dist, rep, 3600.0, seed);
    const double n = static_cast<double>(h.total());
    ASSERT_GE(n, 1e4);
    double tv = 0.0, bound = 0.0;
    for (std::size_t i = 0; i < dist.conditional.size(); ++i) {
      const double q = dist.conditional[i];
      tv += std::abs(static_cast<double>(h.counts[i]) / n - q);
      bound += std::sqrt(q * (1.0 - q) / n);
    }
    EXPECT_LT(0.5 * tv, 3.0 * 0.5 * bound);
  }
}

TEST(Calibration, SynthesizerAndFusionVisibility) {
  auto s = source(0.058);
  s.arm_a = "1";
  s.arm_b = "2";
  const double overlap = calibrate_path_overlap(s, 0.265, 2, 0.94);
  s.path_overlap = overlap;
  EXPECT_NEAR(synthesizer_visibility(s, 0.265, 2), 0.94, 1e-9);
  const double fv = calibrate_fusion_visibility(s, 0.265, 3, 0.76);
  s.fusion_visibility = fv;
  EXPECT_NEAR(fusion_hom_visibility(s, 0.265, 3), 0.76, 1e-6);
  EXPECT_GT(fv, 0.76);
  EXPECT_LE(fv, 1.0);

  auto classical = source(0.058, 0.0);
  classical.arm_a = "1";
  classical.arm_b = "2";
  EXPECT_NEAR(synthesizer_visibility(classical, 1.0, 1), 0.0, kTol);
}

TEST(Histogram, RoundTripIsExact) {
  const auto dist = ExactSimulator(noisy_two_source()).distribution(MeasurementSetting::kth(2, 4));
  for (const auto& file : {to_file(dist, 3600.0, 7), to_file(monte_carlo_counts(dist, 76e9, 3600.0, 7))}) {
    std::ostringstream out;
    write_histogram(out, file);
    std::istringstream in(out.str());
    EXPECT_EQ(read_histogram(in), file);
  }
  HistogramFile custom{MeasurementSetting::custom({0.1, 0.2, 0.3}), HistogramKind::probability,
                       std::vector<double>(8, 0.125), 1.0, 3};
  std::ostringstream out;
  write_histogram(out, custom);
  std::istringstream in(out.str());
  EXPECT_EQ(read_histogram(in), custom);
}

TEST(Histogram, ReadErrorsNameTheLine) {
  const std::string header = "# setting=HV arms=2 duration_s=1 seed=1 kind=counts\n";
  auto error_of = [](const std::string& text) -> std::string {
    std::istringstream in(text);
    try {
      read_histogram(in);
    } catch (const std::runtime_error& e) {
      return e.what();
    }
    return "";
  };
  EXPECT_NE(error_of(header + "HH,1\nHH,2\nVH,0\nVV,0\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(header + "HH,1\nHV,x\n").find("line 3"), std::string::npos);
  EXPECT_NE(error_of(header + "HH,1.5\n").find("line 2"), std::string::npos);
  EXPECT_NE(error_of(header + "HH,1\n").find("rows"), std::string::npos);
  EXPECT_NE(error_of("HH,1\n").find("line 1"), std::string::npos);
}

}  // namespace
}  // namespace catsim::experiment
