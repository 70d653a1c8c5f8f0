#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/simulator.hpp"

namespace mbqc {

// One gate of a dense reference circuit acting on the gadget's inputs
// (qubit k = k-th input).
struct ReferenceOp {
  Gate gate;
  std::vector<std::size_t> targets;
};

// A measurement-pattern realisation of one gate of {H, X, Z, T, RZ, CZ}.
struct GateGadget {
  std::string name;
  OpenGraph graph;
  Flow flow;
  std::vector<Angle> planned;  // per node; output entries unused
  MeasurementPattern pattern;
  std::vector<ReferenceOp> reference;
};

inline void apply_reference(const GateGadget& g, StateVector& state) {
  for (const auto& op : g.reference) {
    if (op.targets.size() == 1) {
      apply_gate(state, op.gate, op.targets[0]);
    } else {
      apply_gate(state, op.gate, op.targets[0], op.targets[1]);
    }
  }
}

namespace detail {
inline GateGadget chain_gadget(std::string name, std::vector<Angle> angles, std::vector<ReferenceOp> reference) {
  const std::size_t n = angles.size() + 1;
  std::vector<Edge> edges;
  Flow flow;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    edges.push_back({i, i + 1});
    flow.successor[i] = i + 1;
  }
  OpenGraph graph(n, std::move(edges), {0}, {n - 1});
  angles.push_back(Angle::zero());
  auto pattern = make_pattern(graph, flow, angles);
  return GateGadget{std::move(name), std::move(graph), std::move(flow), std::move(angles), std::move(pattern),
                    std::move(reference)};
}
}  // namespace detail

// H: 2-chain, angle 0.
inline GateGadget h_gadget() { return detail::chain_gadget("H", {Angle::zero()}, {{Gate::h(), {0}}}); }

// X: 3-chain, angles 0 and pi. Realises -X.
inline GateGadget x_gadget() {
  return detail::chain_gadget("X", {Angle::zero(), Angle::pi()}, {{Gate::x(), {0}}});
}

// RZ(theta): 3-chain, first node measured at -theta, second at 0.
inline GateGadget rz_gadget(const Angle& theta, std::string name = "RZ") {
  return detail::chain_gadget(std::move(name), {-theta, Angle::zero()}, {{Gate::rz(theta), {0}}});
}

inline GateGadget z_gadget() { return rz_gadget(Angle::pi(), "Z"); }
inline GateGadget t_gadget() { return rz_gadget(Angle::octants(1), "T"); }

// CZ: 2x3 grid. Row 0 is 0-2-4, row 1 is 1-3-5, vertical edge 4-5;
// inputs {0, 1}, outputs {4, 5}, every angle 0.
inline GateGadget cz_gadget() {
  std::vector<Edge> edges{{0, 2}, {2, 4}, {1, 3}, {3, 5}, {4, 5}};
  OpenGraph graph(6, std::move(edges), {0, 1}, {4, 5});
  Flow flow;
  for (std::size_t i = 0; i < 4; ++i) flow.successor[i] = i + 2;
  std::vector<Angle> angles(6, Angle::zero());
  auto pattern = make_pattern(graph, flow, angles);
  return GateGadget{"CZ", std::move(graph), std::move(flow), std::move(angles), std::move(pattern),
                    {{Gate::cz(), {0, 1}}}};
}

// Names: H, X, Z, T, RZ (uses theta), CZ.
inline GateGadget gadget(std::string_view name, const Angle& theta = Angle::zero()) {
  if (name == "H") return h_gadget();
  if (name == "X") return x_gadget();
  if (name == "Z") return z_gadget();
  if (name == "T") return t_gadget();
  if (name == "RZ") return rz_gadget(theta);
  if (name == "CZ") return cz_gadget();
  throw UsageError("unknown gadget '" + std::string(name) + "' (expected H, X, Z, T, RZ or CZ)");
}

}  // namespace mbqc
