#pragma once

#include <cstddef>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/histogram.hpp"
#include "mbqc/ubqc.hpp"

// JSON encodings: pattern files, shot histograms and UBQC transcripts.
namespace mbqc::io {

using json = nlohmann::json;

inline json angle_to_json(const Angle& a) {
  if (a.is_octant()) return json{{"octants", a.octant()}};
  return json{{"radians", a.radians()}};
}

inline Angle angle_from_json(const json& j) {
  if (!j.is_object() || j.size() != 1) throw StructureError("angle must be {\"octants\": k} or {\"radians\": x}");
  if (j.contains("octants")) return Angle::octants(j.at("octants").get<int>());
  if (j.contains("radians")) return Angle::radians(j.at("radians").get<double>());
  throw StructureError("angle must be {\"octants\": k} or {\"radians\": x}");
}

// A pattern file: graph, planned angles and correction sets. Measurement
// order is ascending over the non-output nodes. The flow is read back from
// the X sets, since S_X(i) = {f^-1(i)}.
struct PatternFile {
  OpenGraph graph;
  Flow flow;
  MeasurementPattern pattern;
};

inline json pattern_to_json(const OpenGraph& graph, const MeasurementPattern& pattern) {
  json j;
  j["nodes"] = graph.node_count();
  j["edges"] = json::array();
  for (const auto& e : graph.edges()) j["edges"].push_back({e.a, e.b});
  j["inputs"] = std::vector<std::size_t>(graph.inputs().begin(), graph.inputs().end());
  j["outputs"] = std::vector<std::size_t>(graph.outputs().begin(), graph.outputs().end());
  j["angles"] = json::object();
  j["sx"] = json::object();
  j["sz"] = json::object();
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const auto key = std::to_string(i);
    if (pattern.angles[i]) j["angles"][key] = angle_to_json(*pattern.angles[i]);
    if (!pattern.sx(i).empty()) j["sx"][key] = pattern.sx(i);
    if (!pattern.sz(i).empty()) j["sz"][key] = pattern.sz(i);
  }
  return j;
}

inline std::size_t node_key(const std::string& key, std::size_t nodes) {
  std::size_t pos = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(key, &pos);
  } catch (const std::exception&) {
    throw StructureError("node key '" + key + "' is not an index");
  }
  if (pos != key.size() || value >= nodes) throw StructureError("node key '" + key + "' out of range");
  return value;
}

inline PatternFile pattern_from_json(const json& j) {
  try {
    const auto nodes = j.at("nodes").get<std::size_t>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw StructureError("edge must be a pair [a, b]");
      edges.push_back({e[0].get<std::size_t>(), e[1].get<std::size_t>()});
    }
    PatternFile f{OpenGraph(nodes, std::move(edges), j.at("inputs").get<std::vector<std::size_t>>(),
                            j.at("outputs").get<std::vector<std::size_t>>()),
                  {},
                  {}};
    auto& p = f.pattern;
    p.node_count = nodes;
    p.angles.resize(nodes);
    p.corrections.x.resize(nodes);
    p.corrections.z.resize(nodes);
    p.order = f.graph.measured_nodes();
    for (const auto& [key, value] : j.at("angles").items()) p.angles[node_key(key, nodes)] = angle_from_json(value);
    if (j.contains("sx")) {
      for (const auto& [key, value] : j.at("sx").items()) {
        p.corrections.x[node_key(key, nodes)] = value.get<std::vector<std::size_t>>();
      }
    }
    if (j.contains("sz")) {
      for (const auto& [key, value] : j.at("sz").items()) {
        p.corrections.z[node_key(key, nodes)] = value.get<std::vector<std::size_t>>();
      }
    }
    validate_pattern(f.graph, p);
    for (std::size_t i = 0; i < nodes; ++i) {
      for (auto j : p.corrections.x[i]) {
        if (!f.flow.successor.emplace(j, i).second) throw StructureError("node " + std::to_string(j) + " appears in two X sets");
      }
    }
    if (!validate_flow(f.graph, f.flow)) throw StructureError("X sets of the pattern do not describe a flow");
    return f;
  } catch (const json::exception& e) {
    throw StructureError(std::string("malformed pattern file: ") + e.what());
  }
}

inline PatternFile load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open pattern file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw StructureError(std::string("pattern file is not JSON: ") + e.what());
  }
  return pattern_from_json(j);
}

// {counts, shots, seed, width, ...metadata}
inline json histogram_to_json(const ShotHistogram& h) {
  json j;
  j["counts"] = json::object();
  for (const auto& [bits, n] : h.counts) j["counts"][bits] = n;
  j["shots"] = h.shots;
  j["seed"] = h.seed;
  j["width"] = h.width;
  for (const auto& [k, v] : h.metadata) j[k] = v;
  return j;
}

// One protocol session. Everything only the client knows sits under
// "client_secrets"; dropping that key leaves the server's view.
inline json transcript_to_json(const ubqc::Transcript& t) {
  json j;
  j["rounds"] = json::array();
  for (const auto& r : t.rounds) {
    j["rounds"].push_back({{"node", r.node}, {"delta_octants", r.delta.octant()}, {"s_raw", r.s_raw}});
  }
  j["outputs"] = json::array();
  for (std::size_t k = 0; k < t.output_nodes.size(); ++k) {
    j["outputs"].push_back({{"node", t.output_nodes[k]}, {"s_raw", t.outputs_raw[k]}});
  }
  json secrets;
  secrets["theta_octants"] = json::array();
  for (const auto& th : t.secrets.theta) secrets["theta_octants"].push_back(th.octant());
  secrets["r"] = t.secrets.r;
  secrets["s_unmasked"] = json::array();
  for (const auto& r : t.rounds) secrets["s_unmasked"].push_back(r.s_unmasked);
  secrets["output"] = t.client_output;
  j["client_secrets"] = std::move(secrets);
  return j;
}

inline json server_view(json transcript) {
  transcript.erase("client_secrets");
  return transcript;
}

// Keys that must never appear in anything the server sees.
inline const std::set<std::string>& secret_keys() {
  static const std::set<std::string> keys{"client_secrets", "theta", "theta_octants", "r",
                                          "phi",            "s_unmasked", "oracle"};
  return keys;
}

inline bool contains_secret_key(const json& j) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items()) {
      if (secret_keys().contains(key) || contains_secret_key(value)) return true;
    }
  } else if (j.is_array()) {
    for (const auto& v : j) {
      if (contains_secret_key(v)) return true;
    }
  }
  return false;
}

}  // namespace mbqc::io
