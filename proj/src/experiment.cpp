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

#include "catsim/experiment.hpp"

#include <algorithm>
#include <bit>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "catsim/qubits.hpp"

namespace catsim::experiment {

using fock::AmplitudeState;
using fock::Polarization;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Settings and patterns

MeasurementSetting MeasurementSetting::hv(int n_arms) {
  if (n_arms < 1) throw std::invalid_argument("setting needs at least one arm");
  MeasurementSetting s;
  s.kind_ = Kind::hv;
  s.n_arms_ = n_arms;
  return s;
}

MeasurementSetting MeasurementSetting::kth(int k, int n_arms) {
  if (n_arms < 1) throw std::invalid_argument("setting needs at least one arm");
  if (k < 0 || k >= 2 * n_arms) {
    throw std::invalid_argument("setting k=" + std::to_string(k) + " outside [0, " +
                                std::to_string(2 * n_arms) + ")");
  }
  MeasurementSetting s;
  s.kind_ = Kind::k;
  s.k_ = k;
  s.n_arms_ = n_arms;
  s.thetas_.assign(static_cast<std::size_t>(n_arms), k * std::numbers::pi / n_arms);
  return s;
}

MeasurementSetting MeasurementSetting::custom(std::vector<double> thetas) {
  if (thetas.empty()) throw std::invalid_argument("setting needs at least one arm");
  for (double t : thetas) {
    if (!(t >= 0.0 && t < kTwoPi)) throw std::invalid_argument("analyzer angle outside [0, 2pi)");
  }
  MeasurementSetting s;
  s.kind_ = Kind::custom;
  s.n_arms_ = static_cast<int>(thetas.size());
  s.thetas_ = std::move(thetas);
  return s;
}

MeasurementSetting MeasurementSetting::parse(const std::string& label, int n_arms) {
  if (label == "HV") return hv(n_arms);
  if (label.size() >= 2 && label.size() <= 4 && label[0] == 'k' &&
      std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return kth(std::stoi(label.substr(1)), n_arms);
  }
  throw std::invalid_argument("unknown measurement setting '" + label + "'");
}

std::string MeasurementSetting::label() const {
  switch (kind_) {
    case Kind::hv: return "HV";
    case Kind::k: return "k" + std::to_string(k_);
    case Kind::custom: return "custom";
  }
  return "custom";
}

std::string pattern_string(std::size_t index, int n_arms, bool hv) {
  std::string s(static_cast<std::size_t>(n_arms), ' ');
  for (int a = 0; a < n_arms; ++a) {
    const bool minus = (index >> (n_arms - 1 - a)) & 1U;
    s[static_cast<std::size_t>(a)] = hv ? (minus ? 'V' : 'H') : (minus ? '-' : '+');
  }
  return s;
}

std::size_t parse_pattern(const std::string& text) {
  if (text.empty() || text.size() > 20) throw std::invalid_argument("bad pattern '" + text + "'");
  std::size_t index = 0;
  for (char c : text) {
    index <<= 1U;
    if (c == 'V' || c == '-') {
      index |= 1U;
    } else if (c != 'H' && c != '+') {
      throw std::invalid_argument("bad pattern '" + text + "'");
    }
  }
  return index;
}

int minus_count(std::size_t index) { return std::popcount(index); }

AnalyzerMode parse_analyzer_mode(const std::string& name) {
  if (name == "abstract") return AnalyzerMode::abstract;
  if (name == "waveplates") return AnalyzerMode::waveplates;
  throw std::invalid_argument("unknown analyzer mode '" + name + "'");
}

// ---------------------------------------------------------------------------
// Apparatus

std::vector<optics::LinearElement> fusion_elements(const topology::FusionTopology& topology) {
  std::vector<optics::LinearElement> out;
  for (const auto& e : topology.edges) {
    out.push_back(optics::pbs(e.arm1, e.arm2, e.arm1, e.arm2));
    out.push_back(optics::phase_shift(e.arm2, Polarization::V, std::numbers::pi));
  }
  return out;
}

Apparatus make_apparatus(std::vector<sources::PdcSource> sources, topology::FusionTopology topology,
                         double efficiency, int truncation_pairs, AnalyzerMode analyzer,
                         double repetition_rate_hz) {
  topology.validate();
  if (static_cast<int>(sources.size()) != topology.n_sources) {
    throw std::invalid_argument("source count does not match the topology");
  }
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("efficiency outside [0, 1]");
  }
  if (truncation_pairs < topology.n_sources) {
    throw std::invalid_argument("truncation must allow one pair per source");
  }
  Apparatus a;
  std::vector<std::string> arms;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    const auto sa = topology::source_arms(static_cast<int>(i));
    sources[i].arm_a = sa.e_arm;
    sources[i].arm_b = sa.o_arm;
    sources[i].truncation_pairs = truncation_pairs;
    sources[i].validate();
    arms.push_back(sa.e_arm);
    arms.push_back(sa.o_arm);
  }
  a.registry = std::make_shared<const fock::ModeRegistry>(
      fock::ModeRegistry::product(arms, {sources::kExtraordinaryTag, sources::kOrdinaryTag}));
  a.sources = std::move(sources);
  a.output_arms = topology.output_arms();
  a.fusion_elements = fusion_elements(topology);
  a.topology = std::move(topology);
  a.efficiency = efficiency;
  a.repetition_rate_hz = repetition_rate_hz;
  a.truncation_pairs = truncation_pairs;
  a.analyzer = analyzer;
  return a;
}

Apparatus build_apparatus(const cli::ExperimentConfig& config) {
  config.validate();
  const auto& sc = config.sources;
  const auto shape = topology::parse_shape(config.topology.shape);
  topology::FusionTopology topo;
  if (shape == topology::Shape::star) {
    topo = topology::FusionTopology::star(sc.count);
  } else if (shape == topology::Shape::chain) {
    topo = topology::FusionTopology::chain(sc.count);
  } else {
    std::vector<topology::FusionEdge> edges;
    for (const auto& [a, b] : config.topology.edges) edges.push_back({a, b});
    topo = topology::FusionTopology::custom(sc.count, std::move(edges));
  }

  sources::PdcSource proto;
  proto.pair_probability = sc.pair_probability;
  proto.eo_overlap = sc.eo_overlap;
  proto.fusion_visibility = sc.fusion_visibility.value_or(1.0);
  proto.path_overlap = sc.path_overlap.value_or(1.0);
  proto.truncation_pairs = sc.truncation_pairs;
  const auto first = topology::source_arms(0);
  proto.arm_a = first.e_arm;
  proto.arm_b = first.o_arm;
  const int extra = sc.truncation_pairs - sc.count;
  if (sc.synthesizer_visibility) {
    proto.path_overlap = calibrate_path_overlap(proto, config.detection.efficiency, 1 + extra,
                                                *sc.synthesizer_visibility);
  }
  if (sc.hom_visibility) {
    proto.fusion_visibility = calibrate_fusion_visibility(proto, config.detection.efficiency,
                                                          2 + extra, *sc.hom_visibility);
  }
  std::vector<sources::PdcSource> srcs(static_cast<std::size_t>(sc.count), proto);
  return make_apparatus(std::move(srcs), std::move(topo), config.detection.efficiency,
                        sc.truncation_pairs, parse_analyzer_mode(config.detection.analyzer),
                        config.detection.repetition_rate_hz);
}

fock::RegistryPtr member_registry(const Apparatus& apparatus,
                                  const sources::EnsembleMember& member) {
  if (member.variants.size() != apparatus.sources.size()) {
    throw std::invalid_argument("ensemble member does not match the source count");
  }
  std::vector<std::string> arms, tags;
  for (std::size_t i = 0; i < apparatus.sources.size(); ++i) {
    const auto& s = apparatus.sources[i];
    arms.push_back(s.arm_a);
    arms.push_back(s.arm_b);
    for (auto& t : sources::source_tags(s, member.variants[i])) {
      if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(std::move(t));
    }
  }
  return std::make_shared<const fock::ModeRegistry>(fock::ModeRegistry::product(arms, tags));
}

AmplitudeState emit(const Apparatus& apparatus, const sources::EnsembleMember& member) {
  const int budget = 2 * apparatus.truncation_pairs;
  auto reg = member_registry(apparatus, member);
  std::optional<AmplitudeState> state;
  for (std::size_t i = 0; i < apparatus.sources.size(); ++i) {
    auto s = sources::pdc_emit(apparatus.sources[i], budget, member.variants[i]);
    state = state ? fock::tensor_product(*state, s, budget) : std::move(s);
  }
  return fock::embed(*state, std::move(reg));
}

AmplitudeState propagate(const Apparatus& apparatus, const AmplitudeState& state) {
  AmplitudeState s = state;
  for (const auto& src : apparatus.sources) {
    for (const auto& e : sources::synthesizer_elements(src)) s = optics::apply_element(s, e);
  }
  for (const auto& e : apparatus.fusion_elements) s = optics::apply_element(s, e);
  return s;
}

namespace {

// Slot of each mode's arm in `arms`, or -1.
std::vector<int> arm_slots(const fock::ModeRegistry& reg, const std::vector<std::string>& arms) {
  std::vector<int> slot(reg.size(), -1);
  for (std::size_t m = 0; m < reg.size(); ++m) {
    auto it = std::find(arms.begin(), arms.end(), reg.label(m).arm);
    if (it != arms.end()) slot[m] = static_cast<int>(it - arms.begin());
  }
  return slot;
}

AmplitudeState drop_below(const AmplitudeState& state, int min_photons) {
  fock::TermMap out;
  for (const auto& [occ, amp] : state.terms()) {
    if (occ.total() >= min_photons) out.emplace(occ, amp);
  }
  return AmplitudeState::from_terms(state.registry_ptr(), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

}  // namespace

AmplitudeState prune_empty_arms(const AmplitudeState& state, const std::vector<std::string>& arms) {
  const auto slot = arm_slots(state.registry(), arms);
  fock::TermMap out;
  std::vector<char> seen(arms.size());
  for (const auto& [occ, amp] : state.terms()) {
    std::fill(seen.begin(), seen.end(), 0);
    std::size_t filled = 0;
    for (auto m : occ.photons()) {
      if (slot[m] >= 0 && !seen[static_cast<std::size_t>(slot[m])]) {
        seen[static_cast<std::size_t>(slot[m])] = 1;
        ++filled;
      }
    }
    if (filled == arms.size()) out.emplace(occ, amp);
  }
  return AmplitudeState::from_terms(state.registry_ptr(), state.truncation(), std::move(out),
                                    state.prune_epsilon());
}

AmplitudeState ghz_projector_sector(const AmplitudeState& state,
                                    const std::vector<std::string>& arms) {
  return fock::one_photon_per_arm(state, arms);
}

// ---------------------------------------------------------------------------
// Detection

std::vector<optics::LinearElement> analyzer_elements(const MeasurementSetting& setting,
                                                     const std::vector<std::string>& arms,
                                                     AnalyzerMode mode) {
  if (setting.n_arms() != static_cast<int>(arms.size())) {
    throw std::invalid_argument("setting arm count does not match the apparatus");
  }
  std::vector<optics::LinearElement> out;
  if (setting.kind() == MeasurementSetting::Kind::hv) return out;
  for (std::size_t a = 0; a < arms.size(); ++a) {
    const double theta = setting.thetas()[a];
    if (mode == AnalyzerMode::abstract) {
      out.push_back(optics::analyzer_basis(theta, arms[a]));
    } else {
      const auto plates = optics::analyzer_waveplates(theta);
      out.push_back(optics::qwp(plates.qwp, arms[a]));
      out.push_back(optics::hwp(plates.hwp, arms[a]));
    }
  }
  return out;
}

std::vector<double> detection_probabilities(const AmplitudeState& state,
                                            const std::vector<std::string>& arms,
                                            const MeasurementSetting& setting, AnalyzerMode mode,
                                            double efficiency) {
  if (!(efficiency >= 0.0 && efficiency <= 1.0)) {
    throw std::invalid_argument("efficiency outside [0, 1]");
  }
  AmplitudeState s = state;
  for (const auto& e : analyzer_elements(setting, arms, mode)) s = optics::apply_element(s, e);

  const auto& reg = s.registry();
  const auto slot = arm_slots(reg, arms);
  const std::size_t n = arms.size();
  std::vector<double> miss(static_cast<std::size_t>(s.truncation()) + 1);
  for (std::size_t k = 0; k < miss.size(); ++k) {
    miss[k] = std::pow(1.0 - efficiency, static_cast<double>(k));
  }

  std::vector<double> probs(std::size_t{1} << n, 0.0);
  std::vector<int> plus(n), minus(n);
  std::vector<std::pair<std::size_t, double>> paths, next;
  for (const auto& [occ, amp] : s.terms()) {
    const double w = std::norm(amp);
    std::fill(plus.begin(), plus.end(), 0);
    std::fill(minus.begin(), minus.end(), 0);
    for (auto m : occ.photons()) {
      if (slot[m] < 0) continue;
      auto& c = reg.label(m).pol == Polarization::H ? plus : minus;
      ++c[static_cast<std::size_t>(slot[m])];
    }
    paths.assign(1, {0, w});
    for (std::size_t a = 0; a < n && !paths.empty(); ++a) {
      const auto np = static_cast<std::size_t>(plus[a]), nm = static_cast<std::size_t>(minus[a]);
      const double fp = (1.0 - miss[np]) * miss[nm];
      const double fm = (1.0 - miss[nm]) * miss[np];
      next.clear();
      for (const auto& [idx, p] : paths) {
        if (fp > 0.0) next.emplace_back(idx << 1U, p * fp);
        if (fm > 0.0) next.emplace_back((idx << 1U) | 1U, p * fm);
      }
      paths.swap(next);
    }
    for (const auto& [idx, p] : paths) probs[idx] += p;
  }
  return probs;
}

std::optional<std::size_t> coincidence_unit_filter(const std::set<int>& fired, int n_arms) {
  std::vector<int> clicks(static_cast<std::size_t>(n_arms), 0);
  std::size_t index = 0;
  for (int d : fired) {
    if (d < 0 || d >= 2 * n_arms) throw std::invalid_argument("unknown detector index");
    ++clicks[static_cast<std::size_t>(d / 2)];
    if (d % 2 == 1) index |= std::size_t{1} << (n_arms - 1 - d / 2);
  }
  for (int c : clicks) {
    if (c != 1) return std::nullopt;
  }
  return index;
}

// ---------------------------------------------------------------------------
// Exact simulation

ExactSimulator::ExactSimulator(Apparatus apparatus) : apparatus_(std::move(apparatus)) {
  const auto& arms = apparatus_.output_arms;
  const auto ensemble =
      sources::spectral_ensemble(apparatus_.sources, apparatus_.topology.has_eo_fusion());
  for (const auto& member : ensemble) {
    auto s = drop_below(emit(apparatus_, member), static_cast<int>(arms.size()));
    s = prune_empty_arms(propagate(apparatus_, s), arms);
    members_.push_back({member.weight, std::move(s)});
  }
}

OutcomeDistribution ExactSimulator::distribution(const MeasurementSetting& setting) const {
  const auto& arms = apparatus_.output_arms;
  OutcomeDistribution d{setting, {}, std::vector<double>(std::size_t{1} << arms.size(), 0.0), 0.0};
  for (const auto& m : members_) {
    const auto p = detection_probabilities(m.state, arms, setting, apparatus_.analyzer,
                                           apparatus_.efficiency);
    for (std::size_t i = 0; i < p.size(); ++i) d.absolute[i] += m.weight * p[i];
  }
  for (double p : d.absolute) d.accepted_probability += p;
  d.conditional.assign(d.absolute.size(), 0.0);
  if (d.accepted_probability > 0.0) {
    for (std::size_t i = 0; i < d.absolute.size(); ++i) {
      d.conditional[i] = d.absolute[i] / d.accepted_probability;
    }
  }
  return d;
}

double ExactSimulator::ghz_fidelity() const {
  const auto& arms = apparatus_.output_arms;
  const auto target = fock::ghz_amplitudes(static_cast<int>(arms.size()));
  double overlap = 0.0, weight = 0.0;
  for (const auto& m : members_) {
    const auto q = fock::qubit_overlap(m.state, arms, target);
    overlap += m.weight * q.overlap;
    weight += m.weight * q.weight;
  }
  return weight > 0.0 ? overlap / weight : 0.0;
}

OutcomeDistribution outcome_distribution(const Apparatus& apparatus,
                                         const MeasurementSetting& setting) {
  return ExactSimulator(apparatus).distribution(setting);
}

// ---------------------------------------------------------------------------
// Monte Carlo

std::uint64_t CoincidenceHistogram::total() const {
  std::uint64_t t = 0;
  for (auto c : counts) t += c;
  return t;
}

CoincidenceHistogram monte_carlo_counts(const OutcomeDistribution& distribution,
                                        double repetition_rate_hz, double duration_s,
                                        std::uint64_t seed) {
  if (!(duration_s > 0.0)) throw std::invalid_argument("duration must be positive");
  if (!(repetition_rate_hz >= 0.0)) throw std::invalid_argument("negative repetition rate");
  std::mt19937_64 rng(seed);
  CoincidenceHistogram h{distribution.setting, {}, duration_s, seed};
  h.counts.reserve(distribution.absolute.size());
  for (double p : distribution.absolute) {
    const double mean = repetition_rate_hz * p * duration_s;
    if (mean > 0.0) {
      std::poisson_distribution<std::uint64_t> poisson(mean);
      h.counts.push_back(poisson(rng));
    } else {
      h.counts.push_back(0);
    }
  }
  return h;
}

CoincidenceHistogram monte_carlo_counts(const Apparatus& apparatus,
                                        const MeasurementSetting& setting, double duration_s,
                                        std::uint64_t seed) {
  return monte_carlo_counts(outcome_distribution(apparatus, setting),
                            apparatus.repetition_rate_hz, duration_s, seed);
}

// ---------------------------------------------------------------------------
// Synthesizer calibration

namespace {

struct ParityStats {
  double correlated = 0.0;  // sum of parity-signed absolute probabilities
  double accepted = 0.0;
};

ParityStats synthesizer_stats(sources::PdcSource source, double efficiency, int truncation_pairs) {
  source.fusion_visibility = 1.0;
  const auto app = make_apparatus({source}, topology::FusionTopology::custom(1, {}), efficiency,
                                  truncation_pairs);
  const auto d = outcome_distribution(app, MeasurementSetting::kth(0, 2));
  ParityStats st;
  for (std::size_t i = 0; i < d.absolute.size(); ++i) {
    st.correlated += (minus_count(i) % 2 ? -1.0 : 1.0) * d.absolute[i];
    st.accepted += d.absolute[i];
  }
  return st;
}

}  // namespace

double synthesizer_visibility(const sources::PdcSource& source, double efficiency,
                              int truncation_pairs) {
  const auto st = synthesizer_stats(source, efficiency, truncation_pairs);
  if (st.accepted <= 0.0) throw std::domain_error("no twofold coincidences possible");
  return st.correlated / st.accepted;
}

double calibrate_path_overlap(const sources::PdcSource& source, double efficiency,
                              int truncation_pairs, double target_visibility) {
  auto coherent = source, late = source;
  coherent.path_overlap = 1.0;
  late.path_overlap = 0.0;
  const auto c = synthesizer_stats(coherent, efficiency, truncation_pairs);
  const auto l = synthesizer_stats(late, efficiency, truncation_pairs);
  // Visibility is (o C + (1 - o) L) / (o Nc + (1 - o) Nl) in the overlap o.
  const double denom = (c.correlated - target_visibility * c.accepted) -
                       (l.correlated - target_visibility * l.accepted);
  if (denom == 0.0) return 1.0;
  const double o = (target_visibility * l.accepted - l.correlated) / denom;
  return std::clamp(o, 0.0, 1.0);
}

namespace {

double fusion_odd_probability(sources::PdcSource source, double fusion_visibility,
                              double efficiency, int truncation_pairs) {
  source.fusion_visibility = fusion_visibility;
  const auto app = make_apparatus({source, source}, topology::FusionTopology::star(2), efficiency,
                                  truncation_pairs);
  const auto d = outcome_distribution(app, MeasurementSetting::kth(0, 4));
  double odd = 0.0;
  for (std::size_t i = 0; i < d.absolute.size(); ++i) {
    if (minus_count(i) % 2) odd += d.absolute[i];
  }
  return odd;
}

}  // namespace

double fusion_hom_visibility(const sources::PdcSource& source, double efficiency,
                             int truncation_pairs) {
  const double far = fusion_odd_probability(source, 0.0, efficiency, truncation_pairs);
  if (far <= 0.0) throw std::domain_error("no fourfold coincidences possible");
  return 1.0 - fusion_odd_probability(source, source.fusion_visibility, efficiency,
                                      truncation_pairs) / far;
}

double calibrate_fusion_visibility(const sources::PdcSource& source, double efficiency,
                                   int truncation_pairs, double target_visibility) {
  // P_odd is linear in the fusion visibility (the chance that both sources
  // share the spectrum), so the dip visibility is v (1 - P_odd(1) / P_odd(0)).
  const double far = fusion_odd_probability(source, 0.0, efficiency, truncation_pairs);
  const double near = fusion_odd_probability(source, 1.0, efficiency, truncation_pairs);
  if (far <= 0.0 || near >= far) return 1.0;
  return std::clamp(target_visibility / (1.0 - near / far), 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// Files

HistogramFile to_file(const CoincidenceHistogram& histogram) {
  HistogramFile f{histogram.setting, HistogramKind::counts, {}, histogram.duration_s,
                  histogram.seed};
  for (auto c : histogram.counts) f.values.push_back(static_cast<double>(c));
  return f;
}

HistogramFile to_file(const OutcomeDistribution& distribution, double duration_s,
                      std::uint64_t seed) {
  return {distribution.setting, HistogramKind::probability, distribution.conditional, duration_s,
          seed};
}

void write_histogram(std::ostream& out, const HistogramFile& file) {
  const int n = file.setting.n_arms();
  if (file.values.size() != (std::size_t{1} << n)) {
    throw std::invalid_argument("histogram size does not match the arm count");
  }
  out << "# setting=" << file.setting.label() << " arms=" << n
      << " duration_s=" << format_double(file.duration_s) << " seed=" << file.seed
      << " kind=" << (file.kind == HistogramKind::counts ? "counts" : "probability");
  if (file.setting.kind() == MeasurementSetting::Kind::custom) {
    out << " thetas=";
    for (std::size_t i = 0; i < file.setting.thetas().size(); ++i) {
      out << (i ? ":" : "") << format_double(file.setting.thetas()[i]);
    }
  }
  out << '\n';
  const bool hv = file.setting.kind() == MeasurementSetting::Kind::hv;
  for (std::size_t i = 0; i < file.values.size(); ++i) {
    out << pattern_string(i, n, hv) << ',';
    if (file.kind == HistogramKind::counts) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%" PRIu64, static_cast<std::uint64_t>(file.values[i]));
      out << buf;
    } else {
      out << format_double(file.values[i]);
    }
    out << '\n';
  }
}

HistogramFile read_histogram(std::istream& in) {
  int line_no = 0;
  auto fail = [&](const std::string& what) -> void {
    throw std::runtime_error("histogram line " + std::to_string(line_no) + ": " + what);
  };
  std::string line;
  if (!std::getline(in, line)) {
    line_no = 1;
    fail("empty file");
  }
  line_no = 1;
  if (line.rfind("# ", 0) != 0) fail("missing header");
  std::map<std::string, std::string> header;
  std::istringstream hs(line.substr(2));
  for (std::string tok; hs >> tok;) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) fail("bad header field '" + tok + "'");
    header[tok.substr(0, eq)] = tok.substr(eq + 1);
  }
  for (const char* key : {"setting", "arms", "duration_s", "seed", "kind"}) {
    if (!header.count(key)) fail(std::string("missing header field ") + key);
  }

  HistogramFile f;
  int n = 0;
  try {
    n = std::stoi(header["arms"]);
    if (n < 1 || n > 16) fail("arm count out of range");
    f.duration_s = std::stod(header["duration_s"]);
    f.seed = std::stoull(header["seed"]);
    if (header["setting"] == "custom") {
      if (!header.count("thetas")) fail("custom setting without thetas");
      std::vector<double> thetas;
      std::istringstream ts(header["thetas"]);
      for (std::string t; std::getline(ts, t, ':');) thetas.push_back(std::stod(t));
      if (static_cast<int>(thetas.size()) != n) fail("theta count does not match arms");
      f.setting = MeasurementSetting::custom(std::move(thetas));
    } else {
      f.setting = MeasurementSetting::parse(header["setting"], n);
    }
  } catch (const std::logic_error& e) {
    fail(e.what());
  }
  if (header["kind"] == "counts") {
    f.kind = HistogramKind::counts;
  } else if (header["kind"] == "probability") {
    f.kind = HistogramKind::probability;
  } else {
    fail("unknown kind '" + header["kind"] + "'");
  }

  const std::size_t size = std::size_t{1} << n;
  f.values.assign(size, 0.0);
  std::vector<char> seen(size, 0);
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) fail("expected 'pattern,value'");
    const std::string pat = line.substr(0, comma), val = line.substr(comma + 1);
    std::size_t idx = 0;
    double v = 0.0;
    try {
      if (static_cast<int>(pat.size()) != n) fail("pattern length does not match arms");
      idx = parse_pattern(pat);
      std::size_t used = 0;
      v = std::stod(val, &used);
      if (used != val.size()) fail("trailing characters in value");
    } catch (const std::logic_error& e) {
      fail(e.what());
    }
    if (seen[idx]) fail("duplicate pattern " + pat);
    if (v < 0.0 || (f.kind == HistogramKind::counts && v != std::floor(v))) {
      fail("invalid value '" + val + "'");
    }
    seen[idx] = 1;
    f.values[idx] = v;
    ++rows;
  }
  if (rows != size) {
    throw std::runtime_error("histogram has " + std::to_string(rows) + " rows, expected " +
                             std::to_string(size));
  }
  return f;
}

}  // namespace catsim::experiment
