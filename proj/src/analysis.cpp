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

#include "catsim/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace catsim::analysis {

using experiment::MeasurementSetting;

namespace {

std::string format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double sign_product(std::size_t pattern) {
  return experiment::minus_count(pattern) % 2 ? -1.0 : 1.0;
}

}  // namespace

double PatternTable::total() const {
  double t = 0.0;
  for (double w : weights) t += w;
  return t;
}

PatternTable from_histogram(const experiment::CoincidenceHistogram& histogram) {
  PatternTable t{histogram.setting, {}, true};
  for (auto c : histogram.counts) t.weights.push_back(static_cast<double>(c));
  return t;
}

PatternTable from_distribution(const experiment::OutcomeDistribution& distribution) {
  return {distribution.setting, distribution.conditional, false};
}

PatternTable from_file(const experiment::HistogramFile& file) {
  return {file.setting, file.values, file.kind == experiment::HistogramKind::counts};
}

std::string to_string(const Ratio& ratio) {
  return ratio.unbounded ? "unbounded" : format(ratio.value);
}

double poisson_propagate(const std::vector<double>& coefficients, const PatternTable& table) {
  return linear_form(coefficients, table).sigma;
}

ObservableResult linear_form(const std::vector<double>& coefficients, const PatternTable& table) {
  if (coefficients.size() != table.weights.size()) {
    throw std::invalid_argument("coefficient count does not match the pattern table");
  }
  const double n = table.total();
  if (!(n > 0.0)) throw std::invalid_argument("empty pattern table");
  ObservableResult r;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (!std::isfinite(coefficients[i])) throw std::invalid_argument("non-finite coefficient");
    r.value += coefficients[i] * table.weights[i];
  }
  r.value /= n;
  r.n_events = table.counts ? n : 0.0;
  if (table.counts) {
    double var = 0.0;
    for (std::size_t i = 0; i < coefficients.size(); ++i) {
      const double d = coefficients[i] - r.value;
      var += d * d * table.weights[i];
    }
    r.sigma = std::sqrt(var) / n;
  }
  return r;
}

Populations populations(const PatternTable& table) {
  if (table.setting.kind() != MeasurementSetting::Kind::hv) {
    throw std::invalid_argument("populations need the H/V setting, got " + table.setting.label());
  }
  const std::size_t size = table.weights.size();
  std::vector<double> h(size, 0.0), v(size, 0.0), both(size, 0.0);
  h.front() = 1.0;
  v.back() = 1.0;
  both.front() = both.back() = 0.5;
  Populations p{linear_form(h, table), linear_form(v, table), linear_form(both, table), {}};

  const double desired = (table.weights.front() + table.weights.back()) / 2.0;
  double other = 0.0;
  for (std::size_t i = 1; i + 1 < size; ++i) other += table.weights[i];
  other /= static_cast<double>(size - 2);
  if (other > 0.0) {
    p.snr.value = desired / other;
  } else {
    p.snr.unbounded = true;
  }
  return p;
}

ObservableResult m_k_expectation(const PatternTable& table, int k) {
  if (table.setting.kind() != MeasurementSetting::Kind::k || table.setting.k() != k) {
    throw std::invalid_argument("expected setting k" + std::to_string(k) + ", got " +
                                table.setting.label());
  }
  std::vector<double> c(table.weights.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = sign_product(i);
  return linear_form(c, table);
}

Ratio parity_snr(const PatternTable& table) {
  if (table.setting.kind() != MeasurementSetting::Kind::k) {
    throw std::invalid_argument("parity SNR needs a k setting");
  }
  const double favoured = table.setting.k() % 2 ? -1.0 : 1.0;
  double good = 0.0, bad = 0.0;
  for (std::size_t i = 0; i < table.weights.size(); ++i) {
    (sign_product(i) == favoured ? good : bad) += table.weights[i];
  }
  // Both parities hold half of the patterns, so the ratio of sums is the
  // ratio of means.
  Ratio r;
  if (bad > 0.0) {
    r.value = good / bad;
  } else {
    r.unbounded = true;
  }
  return r;
}

Ratio significance(double fidelity, double sigma) {
  Ratio r;
  if (sigma > 0.0) {
    r.value = (fidelity - 0.5) / sigma;
  } else {
    r.unbounded = true;
    r.value = fidelity > 0.5 ? 1.0 : (fidelity < 0.5 ? -1.0 : 0.0);
  }
  return r;
}

WitnessReport fidelity_witness(const Populations& populations,
                               const std::vector<Correlation>& correlations, int n_arms) {
  if (n_arms < 1) throw std::invalid_argument("witness needs at least one arm");
  std::vector<const Correlation*> by_k(static_cast<std::size_t>(n_arms), nullptr);
  for (const auto& c : correlations) {
    if (c.k < 0 || c.k >= n_arms) {
      throw std::invalid_argument("correlation k" + std::to_string(c.k) + " out of range");
    }
    if (by_k[static_cast<std::size_t>(c.k)]) {
      throw std::invalid_argument("correlation k" + std::to_string(c.k) + " given twice");
    }
    by_k[static_cast<std::size_t>(c.k)] = &c;
  }
  WitnessReport r;
  r.n_arms = n_arms;
  r.population_term = populations.term;
  r.snr = populations.snr;
  double value = populations.term.value;
  double var = populations.term.sigma * populations.term.sigma;
  const double scale = 1.0 / (2.0 * n_arms);
  for (int k = 0; k < n_arms; ++k) {
    const auto* c = by_k[static_cast<std::size_t>(k)];
    if (!c) throw std::invalid_argument("missing correlation k" + std::to_string(k));
    r.correlations.push_back(*c);
    const double s = k % 2 ? -1.0 : 1.0;
    value += scale * s * c->value.value;
    var += scale * scale * c->value.sigma * c->value.sigma;
  }
  r.fidelity.value = value;
  r.fidelity.sigma = std::sqrt(var);
  r.fidelity.n_events = populations.term.n_events;
  for (const auto& c : r.correlations) r.fidelity.n_events += c.value.n_events;
  r.significance = significance(value, r.fidelity.sigma);
  r.entangled = r.significance.value > 0.0;
  return r;
}

void write_report(std::ostream& out, const WitnessReport& report) {
  out << "n_arms: " << report.n_arms << '\n';
  out << "population_term: " << format(report.population_term.value) << '\n';
  out << "population_term_sigma: " << format(report.population_term.sigma) << '\n';
  for (const auto& c : report.correlations) {
    out << "m_k_" << c.k << ": " << format(c.value.value) << '\n';
    out << "m_k_" << c.k << "_sigma: " << format(c.value.sigma) << '\n';
  }
  out << "fidelity: " << format(report.fidelity.value) << '\n';
  out << "sigma: " << format(report.fidelity.sigma) << '\n';
  out << "significance: " << to_string(report.significance) << '\n';
  out << "entangled: " << (report.entangled ? "true" : "false") << '\n';
  out << "snr: " << to_string(report.snr) << '\n';
}

void write_population_csv(std::ostream& out, const PatternTable& table) {
  const bool hv = table.setting.kind() == MeasurementSetting::Kind::hv;
  out << "pattern," << (table.counts ? "count" : "probability") << '\n';
  for (std::size_t i = 0; i < table.weights.size(); ++i) {
    out << experiment::pattern_string(i, table.n_arms(), hv) << ',' << format(table.weights[i])
        << '\n';
  }
}

void write_correlation_csv(std::ostream& out, const WitnessReport& report) {
  out << "k,signed_expectation,sigma\n";
  for (const auto& c : report.correlations) {
    const double s = c.k % 2 ? -1.0 : 1.0;
    out << c.k << ',' << format(s * c.value.value) << ',' << format(c.value.sigma) << '\n';
  }
}

}  // namespace catsim::analysis
