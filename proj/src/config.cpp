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

#include "catsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "catsim/topology.hpp"

namespace catsim::cli {

using nlohmann::json;

double RunConfig::hours_for(const std::string& setting) const {
  auto it = duration_hours.find(setting);
  return it == duration_hours.end() ? default_duration_hours : it->second;
}

namespace {

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& i : items) s += (s.empty() ? "" : ", ") + i;
  return s;
}

bool valid_setting_label(const std::string& label, int n_arms) {
  if (label == "HV") return true;
  if (label.size() < 2 || label[0] != 'k') return false;
  if (!std::all_of(label.begin() + 1, label.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  if (label.size() > 4) return false;
  return std::stoi(label.substr(1)) < 2 * n_arms;
}

// Collects type and key errors while walking the document.
class Reader {
 public:
  std::vector<std::string> bad;

  const json* section(const json& root, const std::string& name,
                      const std::set<std::string>& allowed) {
    auto it = root.find(name);
    if (it == root.end()) return nullptr;
    if (!it->is_object()) {
      bad.push_back(name);
      return nullptr;
    }
    for (const auto& [key, value] : it->items()) {
      if (!allowed.count(key)) bad.push_back(name + "." + key);
    }
    return &*it;
  }

  template <class T>
  void read(const json* sec, const std::string& path, const std::string& key, T& out) {
    if (!sec) return;
    auto it = sec->find(key);
    if (it == sec->end()) return;
    try {
      if constexpr (std::is_same_v<T, double>) {
        if (!it->is_number()) throw std::invalid_argument("not a number");
      } else if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
        if (!it->is_number_integer()) throw std::invalid_argument("not an integer");
      }
      out = it->get<T>();
    } catch (const std::exception&) {
      bad.push_back(path + "." + key);
    }
  }

  template <class T>
  void read_optional(const json* sec, const std::string& path, const std::string& key,
                     std::optional<T>& out) {
    if (!sec || !sec->contains(key)) return;
    T value{};
    const auto before = bad.size();
    read(sec, path, key, value);
    if (bad.size() == before) out = value;
  }
};

}  // namespace

void ExperimentConfig::validate() const {
  std::vector<std::string> bad;
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (sources.count < 1 || sources.count > 8) bad.push_back("sources.count");
  if (!unit(sources.pair_probability)) bad.push_back("sources.pair_probability");
  if (sources.path_overlap && !unit(*sources.path_overlap)) bad.push_back("sources.path_overlap");
  if (sources.synthesizer_visibility && !unit(*sources.synthesizer_visibility)) {
    bad.push_back("sources.synthesizer_visibility");
  }
  if (sources.path_overlap && sources.synthesizer_visibility) {
    bad.push_back("sources.path_overlap");
    bad.push_back("sources.synthesizer_visibility");
  }
  if (sources.fusion_visibility && !unit(*sources.fusion_visibility)) {
    bad.push_back("sources.fusion_visibility");
  }
  if (sources.hom_visibility && !unit(*sources.hom_visibility)) bad.push_back("sources.hom_visibility");
  if (sources.fusion_visibility && sources.hom_visibility) {
    bad.push_back("sources.fusion_visibility");
    bad.push_back("sources.hom_visibility");
  }
  if (!unit(sources.eo_overlap)) bad.push_back("sources.eo_overlap");
  if (sources.truncation_pairs < sources.count || sources.truncation_pairs > 8) {
    bad.push_back("sources.truncation_pairs");
  }

  try {
    const auto shape = topology::parse_shape(topology.shape);
    if (shape == topology::Shape::custom) {
      std::vector<topology::FusionEdge> edges;
      for (const auto& [a, b] : topology.edges) edges.push_back({a, b});
      topology::FusionTopology::custom(sources.count, edges);
    } else if (!topology.edges.empty()) {
      bad.push_back("topology.edges");
    }
  } catch (const std::invalid_argument&) {
    bad.push_back(topology.shape == "custom" ? "topology.edges" : "topology.shape");
  }

  if (!unit(detection.efficiency)) bad.push_back("detection.efficiency");
  if (!(detection.repetition_rate_hz > 0.0)) bad.push_back("detection.repetition_rate_hz");
  if (detection.analyzer != "abstract" && detection.analyzer != "waveplates") {
    bad.push_back("detection.analyzer");
  }

  const int n_arms = 2 * sources.count;
  for (const auto& s : run.settings) {
    if (!valid_setting_label(s, n_arms)) bad.push_back("run.settings");
  }
  for (const auto& [label, hours] : run.duration_hours) {
    if (!valid_setting_label(label, n_arms) || !(hours > 0.0)) {
      bad.push_back("run.duration_hours." + label);
    }
  }
  if (!(run.default_duration_hours > 0.0)) bad.push_back("run.default_duration_hours");

  if (output.directory.empty()) bad.push_back("output.directory");
  for (const auto& f : output.formats) {
    if (f != "hist" && f != "csv") bad.push_back("output.formats");
  }

  if (!bad.empty()) {
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    throw ConfigError("invalid configuration keys: " + join(bad), bad);
  }
}

ExperimentConfig default_config() {
  ExperimentConfig c;
  c.sources.count = 4;
  c.sources.pair_probability = 0.058;
  c.sources.synthesizer_visibility = 0.94;
  c.sources.hom_visibility = 0.76;
  c.sources.eo_overlap = 1.0;
  c.sources.truncation_pairs = 5;
  c.topology.shape = "star";
  c.detection.efficiency = 0.265;
  c.detection.repetition_rate_hz = 76e6;
  c.run.settings = {"HV", "k0", "k1", "k2", "k3", "k4", "k5", "k6", "k7"};
  c.run.duration_hours = {{"HV", 40.0}, {"k0", 25.0}};
  c.run.default_duration_hours = 15.0;
  c.run.seed = 20120417;
  c.output.directory = "out";
  return c;
}

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what(), {"<document>"});
  }
  if (!root.is_object()) throw ConfigError("config must be a JSON object", {"<document>"});

  Reader r;
  const std::set<std::string> sections{"sources", "topology", "detection", "run", "output"};
  for (const auto& [key, value] : root.items()) {
    if (!sections.count(key)) r.bad.push_back(key);
  }

  ExperimentConfig c;
  const json* src = r.section(root, "sources",
                              {"count", "pair_probability", "path_overlap",
                               "synthesizer_visibility", "fusion_visibility", "hom_visibility",
                               "eo_overlap", "truncation_pairs"});
  r.read(src, "sources", "count", c.sources.count);
  r.read(src, "sources", "pair_probability", c.sources.pair_probability);
  r.read_optional(src, "sources", "path_overlap", c.sources.path_overlap);
  r.read_optional(src, "sources", "synthesizer_visibility", c.sources.synthesizer_visibility);
  r.read_optional(src, "sources", "fusion_visibility", c.sources.fusion_visibility);
  r.read_optional(src, "sources", "hom_visibility", c.sources.hom_visibility);
  r.read(src, "sources", "eo_overlap", c.sources.eo_overlap);
  r.read(src, "sources", "truncation_pairs", c.sources.truncation_pairs);

  const json* topo = r.section(root, "topology", {"shape", "edges"});
  r.read(topo, "topology", "shape", c.topology.shape);
  if (topo && topo->contains("edges")) {
    const auto& edges = topo->at("edges");
    bool ok = edges.is_array();
    if (ok) {
      for (const auto& e : edges) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
          ok = false;
          break;
        }
        c.topology.edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
      }
    }
    if (!ok) r.bad.push_back("topology.edges");
  }

  const json* det = r.section(root, "detection", {"efficiency", "repetition_rate_hz", "analyzer"});
  r.read(det, "detection", "efficiency", c.detection.efficiency);
  r.read(det, "detection", "repetition_rate_hz", c.detection.repetition_rate_hz);
  r.read(det, "detection", "analyzer", c.detection.analyzer);

  const json* run = r.section(root, "run",
                              {"settings", "duration_hours", "default_duration_hours", "seed",
                               "exact"});
  r.read(run, "run", "settings", c.run.settings);
  if (run && run->contains("duration_hours")) {
    const auto& d = run->at("duration_hours");
    if (!d.is_object()) {
      r.bad.push_back("run.duration_hours");
    } else {
      for (const auto& [label, hours] : d.items()) {
        if (!hours.is_number()) {
          r.bad.push_back("run.duration_hours." + label);
        } else {
          c.run.duration_hours[label] = hours.get<double>();
        }
      }
    }
  }
  r.read(run, "run", "default_duration_hours", c.run.default_duration_hours);
  r.read(run, "run", "seed", c.run.seed);
  r.read(run, "run", "exact", c.run.exact);

  const json* out = r.section(root, "output", {"directory", "formats"});
  r.read(out, "output", "directory", c.output.directory);
  r.read(out, "output", "formats", c.output.formats);

  if (!r.bad.empty()) throw ConfigError("invalid configuration keys: " + join(r.bad), r.bad);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what(), e.keys());
  }
}

std::string serialize_config(const ExperimentConfig& c) {
  json root;
  auto& s = root["sources"];
  s["count"] = c.sources.count;
  s["pair_probability"] = c.sources.pair_probability;
  if (c.sources.path_overlap) s["path_overlap"] = *c.sources.path_overlap;
  if (c.sources.synthesizer_visibility) s["synthesizer_visibility"] = *c.sources.synthesizer_visibility;
  if (c.sources.fusion_visibility) s["fusion_visibility"] = *c.sources.fusion_visibility;
  if (c.sources.hom_visibility) s["hom_visibility"] = *c.sources.hom_visibility;
  s["eo_overlap"] = c.sources.eo_overlap;
  s["truncation_pairs"] = c.sources.truncation_pairs;

  auto& t = root["topology"];
  t["shape"] = c.topology.shape;
  if (!c.topology.edges.empty()) {
    t["edges"] = json::array();
    for (const auto& [a, b] : c.topology.edges) t["edges"].push_back({a, b});
  }

  auto& d = root["detection"];
  d["efficiency"] = c.detection.efficiency;
  d["repetition_rate_hz"] = c.detection.repetition_rate_hz;
  d["analyzer"] = c.detection.analyzer;

  auto& r = root["run"];
  r["settings"] = c.run.settings;
  r["duration_hours"] = json::object();
  for (const auto& [label, hours] : c.run.duration_hours) r["duration_hours"][label] = hours;
  r["default_duration_hours"] = c.run.default_duration_hours;
  r["seed"] = c.run.seed;
  r["exact"] = c.run.exact;

  auto& o = root["output"];
  o["directory"] = c.output.directory;
  o["formats"] = c.output.formats;
  return root.dump(2) + "\n";
}

}  // namespace catsim::cli
