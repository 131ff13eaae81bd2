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

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "catsim/experiment.hpp"

namespace catsim::analysis {

/// Weights over detection patterns. Counts carry Poisson statistics;
/// probabilities are exact and propagate zero uncertainty.
struct PatternTable {
  experiment::MeasurementSetting setting;
  std::vector<double> weights;
  bool counts = true;

  int n_arms() const { return setting.n_arms(); }
  double total() const;
};

PatternTable from_histogram(const experiment::CoincidenceHistogram& histogram);
/// Uses the conditional distribution.
PatternTable from_distribution(const experiment::OutcomeDistribution& distribution);
PatternTable from_file(const experiment::HistogramFile& file);

struct ObservableResult {
  double value = 0.0;
  double sigma = 0.0;
  double n_events = 0.0;
};

/// A ratio that may have a zero denominator.
struct Ratio {
  double value = 0.0;
  bool unbounded = false;
};

/// Text form: the value, or "unbounded".
std::string to_string(const Ratio& ratio);

/// Standard deviation of sum_i c_i N_i / N under independent Poisson counts
/// (first-order delta method, shared denominator included):
/// sigma^2 = sum_i (c_i - E)^2 N_i / N^2. Zero for probability tables.
/// Throws std::invalid_argument for an empty count table or mismatched sizes.
double poisson_propagate(const std::vector<double>& coefficients, const PatternTable& table);

/// Expectation and sigma of a linear form.
ObservableResult linear_form(const std::vector<double>& coefficients, const PatternTable& table);

struct Populations {
  /// All-H and all-V fractions.
  ObservableResult all_h;
  ObservableResult all_v;
  /// Half their sum, with the joint sigma.
  ObservableResult term;
  /// Mean of the two desired entries over the mean of the others.
  Ratio snr;
};

/// Throws std::invalid_argument unless the table is an H/V setting with a
/// non-zero total.
Populations populations(const PatternTable& table);

/// <M_theta^{(x) n}>: sum over patterns of the outcome-sign product. Throws
/// std::invalid_argument unless the table is the k-th setting.
ObservableResult m_k_expectation(const PatternTable& table, int k);

/// Mean weight of the parity favoured by (-1)^k over the mean of the other
/// parity.
Ratio parity_snr(const PatternTable& table);

struct Correlation {
  int k = 0;
  ObservableResult value;
};

struct WitnessReport {
  int n_arms = 0;
  ObservableResult population_term;
  std::vector<Correlation> correlations;
  ObservableResult fidelity;
  bool entangled = false;
  Ratio significance;
  Ratio snr;
};

/// (F - 0.5) / sigma, unbounded when sigma is zero.
Ratio significance(double fidelity, double sigma);

/// F = population_term + (1 / 2n) sum_k (-1)^k <M_k>, with k running over
/// 0..n-1 exactly once each; sigma_F adds the ingredient sigmas in quadrature.
/// Throws std::invalid_argument when a correlation is missing or repeated.
WitnessReport fidelity_witness(const Populations& populations,
                               const std::vector<Correlation>& correlations, int n_arms);

/// "key: value" lines: n_arms, population_term(_sigma), m_k_<k>(_sigma),
/// fidelity, sigma, significance, entangled, snr.
void write_report(std::ostream& out, const WitnessReport& report);

/// Rows "pattern,count" in pattern order.
void write_population_csv(std::ostream& out, const PatternTable& table);
/// Rows "k,signed_expectation,sigma" with the (-1)^k sign applied.
void write_correlation_csv(std::ostream& out, const WitnessReport& report);

}  // namespace catsim::analysis
