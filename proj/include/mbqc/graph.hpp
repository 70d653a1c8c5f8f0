#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"

namespace mbqc {

struct Edge {
  std::size_t a;
  std::size_t b;
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Open graph (G, I, O). Nodes are 0..node_count-1 and node i is simulated
// on qubit i. Immutable once constructed.
class OpenGraph {
 public:
  OpenGraph() = default;

  OpenGraph(std::size_t node_count, std::vector<Edge> edges, std::vector<std::size_t> inputs,
            std::vector<std::size_t> outputs)
      : node_count_(node_count),
        edges_(std::move(edges)),
        inputs_(std::move(inputs)),
        outputs_(std::move(outputs)),
        adjacency_(node_count),
        incident_(node_count),
        is_input_(node_count, false),
        is_output_(node_count, false) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const auto [a, b] = edges_[e];
      if (a >= node_count_ || b >= node_count_) {
        throw StructureError("edge references node outside [0, " + std::to_string(node_count_) + ")");
      }
      if (a == b) throw StructureError("self-loop on node " + std::to_string(a));
      if (!seen.emplace(std::min(a, b), std::max(a, b)).second) {
        throw StructureError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
      }
      adjacency_[a].push_back(b);
      adjacency_[b].push_back(a);
      incident_[a].push_back(e);
      incident_[b].push_back(e);
    }
    for (auto& n : adjacency_) std::sort(n.begin(), n.end());
    mark(inputs_, is_input_, "input");
    mark(outputs_, is_output_, "output");
  }

  std::size_t node_count() const { return node_count_; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const std::size_t> inputs() const { return inputs_; }
  std::span<const std::size_t> outputs() const { return outputs_; }
  std::span<const std::size_t> neighbors(std::size_t node) const { return adjacency_.at(node); }
  std::span<const std::size_t> incident_edges(std::size_t node) const { return incident_.at(node); }
  bool is_input(std::size_t node) const { return is_input_.at(node); }
  bool is_output(std::size_t node) const { return is_output_.at(node); }

  bool adjacent(std::size_t a, std::size_t b) const {
    const auto& n = adjacency_.at(a);
    return std::binary_search(n.begin(), n.end(), b);
  }

  // Nodes not in O, ascending.
  std::vector<std::size_t> measured_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < node_count_; ++i) {
      if (!is_output_[i]) out.push_back(i);
    }
    return out;
  }

 private:
  void mark(const std::vector<std::size_t>& nodes, std::vector<bool>& flags, const char* what) {
    for (auto n : nodes) {
      if (n >= node_count_) throw StructureError(std::string(what) + " node out of range");
      if (flags[n]) throw StructureError(std::string("duplicate ") + what + " node " + std::to_string(n));
      flags[n] = true;
    }
  }

  std::size_t node_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> inputs_;
  std::vector<std::size_t> outputs_;
  std::vector<std::vector<std::size_t>> adjacency_;
  std::vector<std::vector<std::size_t>> incident_;
  std::vector<bool> is_input_;
  std::vector<bool> is_output_;
};

// Flow map f: O^c -> I^c together with a total order over all nodes that
// refines the flow's partial order. An empty order means ascending index.
struct Flow {
  std::map<std::size_t, std::size_t> successor;
  std::vector<std::size_t> order;
};

// rank[node] = position of node in the flow's total order.
inline std::vector<std::size_t> order_ranks(const OpenGraph& graph, const Flow& flow) {
  const std::size_t n = graph.node_count();
  std::vector<std::size_t> rank(n);
  if (flow.order.empty()) {
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    return rank;
  }
  if (flow.order.size() != n) throw StructureError("flow order must list every node exactly once");
  std::vector<bool> seen(n, false);
  for (std::size_t pos = 0; pos < n; ++pos) {
    const auto node = flow.order[pos];
    if (node >= n || seen[node]) throw StructureError("flow order must list every node exactly once");
    seen[node] = true;
    rank[node] = pos;
  }
  return rank;
}

// Non-output nodes in measurement order.
inline std::vector<std::size_t> measurement_order(const OpenGraph& graph, const Flow& flow) {
  const auto rank = order_ranks(graph, flow);
  auto nodes = graph.measured_nodes();
  std::sort(nodes.begin(), nodes.end(), [&](auto a, auto b) { return rank[a] < rank[b]; });
  return nodes;
}

// True iff the three flow conditions hold under the flow's total order:
// x ~ f(x), x < f(x), and x < y for every other neighbour y of f(x).
// Throws StructureError when the map itself is malformed.
inline bool validate_flow(const OpenGraph& graph, const Flow& flow) {
  const std::size_t n = graph.node_count();
  const auto rank = order_ranks(graph, flow);
  for (std::size_t x = 0; x < n; ++x) {
    const bool in_domain = flow.successor.contains(x);
    if (graph.is_output(x) == in_domain) {
      throw StructureError("flow domain must be exactly the non-output nodes (node " + std::to_string(x) + ")");
    }
  }
  for (const auto& [x, fx] : flow.successor) {
    if (x >= n) throw StructureError("flow domain node out of range");
    if (fx >= n) throw StructureError("flow target out of range");
    if (graph.is_input(fx)) {
      throw StructureError("flow maps " + std::to_string(x) + " onto input node " + std::to_string(fx));
    }
  }
  for (const auto& [x, fx] : flow.successor) {
    if (!graph.adjacent(x, fx)) return false;
    if (rank[x] >= rank[fx]) return false;
    for (auto y : graph.neighbors(fx)) {
      if (y != x && rank[x] >= rank[y]) return false;
    }
  }
  return true;
}

struct CorrectionSets {
  std::vector<std::vector<std::size_t>> x;  // S_X(i)
  std::vector<std::vector<std::size_t>> z;  // S_Z(i)
  friend bool operator==(const CorrectionSets&, const CorrectionSets&) = default;
};

// S_X(i) = { f^-1(i) },  S_Z(i) = { j != i : i ~ f(j) }.
inline CorrectionSets derive_correction_sets(const OpenGraph& graph, const Flow& flow) {
  if (!validate_flow(graph, flow)) throw StructureError("correction sets need a valid flow");
  const std::size_t n = graph.node_count();
  CorrectionSets sets{std::vector<std::vector<std::size_t>>(n), std::vector<std::vector<std::size_t>>(n)};
  for (const auto& [j, fj] : flow.successor) {
    sets.x[fj].push_back(j);
    for (auto i : graph.neighbors(fj)) {
      if (i != j) sets.z[i].push_back(j);
    }
  }
  for (auto& s : sets.x) std::sort(s.begin(), s.end());
  for (auto& s : sets.z) std::sort(s.begin(), s.end());
  return sets;
}

// Planned angle per measured node plus the X/Z dependency sets of every
// node (outputs included). `order` lists the measured nodes in the order
// they are measured; outputs are read out afterwards.
struct MeasurementPattern {
  std::size_t node_count = 0;
  std::vector<std::optional<Angle>> angles;
  CorrectionSets corrections;
  std::vector<std::size_t> order;

  const std::vector<std::size_t>& sx(std::size_t node) const { return corrections.x.at(node); }
  const std::vector<std::size_t>& sz(std::size_t node) const { return corrections.z.at(node); }
  const Angle& angle(std::size_t node) const {
    const auto& a = angles.at(node);
    if (!a) throw StructureError("node " + std::to_string(node) + " has no measurement angle");
    return *a;
  }
};

// Checks the pattern against its graph: angles exactly on measured nodes,
// the order is a permutation of the measured nodes, and every dependency is
// measured before the node that uses it.
inline void validate_pattern(const OpenGraph& graph, const MeasurementPattern& pattern) {
  const std::size_t n = graph.node_count();
  if (pattern.node_count != n || pattern.angles.size() != n || pattern.corrections.x.size() != n ||
      pattern.corrections.z.size() != n) {
    throw StructureError("pattern size does not match graph");
  }
  constexpr std::size_t kOutputRank = static_cast<std::size_t>(-1);
  std::vector<std::size_t> rank(n, kOutputRank);
  for (std::size_t pos = 0; pos < pattern.order.size(); ++pos) {
    const auto node = pattern.order[pos];
    if (node >= n || graph.is_output(node) || rank[node] != kOutputRank) {
      throw StructureError("pattern order must list each measured node once");
    }
    rank[node] = pos;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool measured = !graph.is_output(i);
    if (measured && rank[i] == kOutputRank) throw StructureError("measured node missing from pattern order");
    if (measured != pattern.angles[i].has_value()) {
      throw StructureError("node " + std::to_string(i) + (measured ? " needs" : " must not have") +
                           " a measurement angle");
    }
    for (const auto* set : {&pattern.corrections.x[i], &pattern.corrections.z[i]}) {
      for (auto j : *set) {
        if (j >= n || graph.is_output(j) || (measured && rank[j] >= rank[i])) {
          throw StructureError("dependency " + std::to_string(j) + " of node " + std::to_string(i) +
                               " is not measured before it");
        }
      }
    }
  }
}

// `planned` holds one angle per node; entries for outputs are ignored.
inline MeasurementPattern make_pattern(const OpenGraph& graph, const Flow& flow, const std::vector<Angle>& planned) {
  if (planned.size() != graph.node_count()) throw StructureError("need one planned angle per node");
  MeasurementPattern pattern;
  pattern.node_count = graph.node_count();
  pattern.corrections = derive_correction_sets(graph, flow);
  pattern.order = measurement_order(graph, flow);
  pattern.angles.resize(graph.node_count());
  for (auto i : pattern.order) pattern.angles[i] = planned[i];
  validate_pattern(graph, pattern);
  return pattern;
}

// (-1)^sx * phi + pi * sz
inline Angle corrected_angle(const Angle& phi, int sx_parity, int sz_parity) {
  Angle out = (sx_parity & 1) ? -phi : phi;
  return (sz_parity & 1) ? out.plus_pi() : out;
}

}  // namespace mbqc
