#pragma once

#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/simulator.hpp"
#include "mbqc/state_vector.hpp"

namespace mbqc {

// Joint state of the input nodes, little-endian in graph.inputs() order.
struct InputState {
  std::vector<amplitude> amplitudes{amplitude{1.0, 0.0}};

  static InputState product(const std::vector<Qubit>& qubits) {
    InputState s;
    for (const auto& q : qubits) {
      std::vector<amplitude> next(s.amplitudes.size() * 2);
      for (std::size_t i = 0; i < s.amplitudes.size(); ++i) {
        next[i] = s.amplitudes[i] * q[0];
        next[i + s.amplitudes.size()] = s.amplitudes[i] * q[1];
      }
      s.amplitudes = std::move(next);
    }
    return s;
  }

  static InputState from_state(const StateVector& state) {
    return InputState{std::vector<amplitude>(state.amplitudes().begin(), state.amplitudes().end())};
  }
};

// How the cluster is prepared: inputs from `input`, every other node in
// |+>, then RZ(phase[i]) on node i (empty = no rotations), then CZ on
// every edge.
struct ClusterPrep {
  InputState input;
  std::vector<Angle> phase;
};

namespace detail {
inline void check_input(const OpenGraph& graph, const InputState& input) {
  if (input.amplitudes.size() != (std::size_t{1} << graph.inputs().size())) {
    throw SizeError("input state has " + std::to_string(input.amplitudes.size()) + " amplitudes, expected 2^" +
                    std::to_string(graph.inputs().size()));
  }
}

inline void check_phases(const OpenGraph& graph, const ClusterPrep& prep) {
  if (!prep.phase.empty() && prep.phase.size() != graph.node_count()) {
    throw SizeError("need one preparation phase per node");
  }
}
}  // namespace detail

// Full-register preparation: node i lives on qubit i. `state` must be a
// fresh |0...0> register with exactly node_count qubits.
inline void prepare_cluster(StateVector& state, const OpenGraph& graph, const ClusterPrep& prep) {
  if (state.num_qubits() != graph.node_count()) {
    throw SizeError("state has " + std::to_string(state.num_qubits()) + " qubits, graph has " +
                    std::to_string(graph.node_count()) + " nodes");
  }
  if (std::abs(state[0] - amplitude{1.0, 0.0}) > kAmplitudeTolerance) {
    throw StateError("cluster preparation needs a fresh |0...0> state");
  }
  detail::check_input(graph, prep.input);
  detail::check_phases(graph, prep);

  const auto inputs = graph.inputs();
  std::vector<amplitude> amps(state.size(), amplitude{0.0, 0.0});
  for (std::size_t k = 0; k < prep.input.amplitudes.size(); ++k) {
    std::size_t index = 0;
    for (std::size_t b = 0; b < inputs.size(); ++b) {
      if ((k >> b) & 1U) index |= std::size_t{1} << inputs[b];
    }
    amps[index] = prep.input.amplitudes[k];
  }
  state = StateVector::from_amplitudes(std::move(amps));

  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    if (!graph.is_input(i)) state.h(i);
  }
  if (!prep.phase.empty()) {
    for (std::size_t i = 0; i < graph.node_count(); ++i) state.rz(i, prep.phase[i]);
  }
  for (const auto& e : graph.edges()) state.cz(e.a, e.b);
}

// H on every non-input node, inputs as given, then CZ on every edge.
inline void entangle_cluster(StateVector& state, const OpenGraph& graph, const InputState& input) {
  prepare_cluster(state, graph, ClusterPrep{input, {}});
}

// Measurement with correction on a register where the node sits at
// physical qubit `qubit`: conditional Z for S_Z, conditional X for S_X,
// then RZ(-phi), H and a Z measurement sampled with `u`.
inline int measure_with_correction(StateVector& state, std::size_t qubit, ClassicalBits& bits, std::size_t node,
                                   const MeasurementPattern& pattern, double u, bool corrections = true) {
  if (bits.measured(node)) throw StateError("node " + std::to_string(node) + " already measured");
  for (auto j : pattern.sz(node)) {
    if (!bits.measured(j)) throw StateError("node " + std::to_string(node) + " measured before its Z dependency " + std::to_string(j));
  }
  for (auto j : pattern.sx(node)) {
    if (!bits.measured(j)) throw StateError("node " + std::to_string(node) + " measured before its X dependency " + std::to_string(j));
  }
  if (corrections) {
    for (auto j : pattern.sz(node)) apply_conditional(state, Gate::z(), qubit, j, bits);
    for (auto j : pattern.sx(node)) apply_conditional(state, Gate::x(), qubit, j, bits);
  }
  state.rz(qubit, -pattern.angle(node));
  state.h(qubit);
  const int bit = state.measure(qubit, u);
  bits.record(node, bit);
  return bit;
}

// Full-register form: node `node` is qubit `node`.
inline int measure_pattern_qubit(StateVector& state, ClassicalBits& bits, std::size_t node,
                                 const MeasurementPattern& pattern, RngStream& rng) {
  return measure_with_correction(state, node, bits, node, pattern, rng.uniform());
}

enum class Execution {
  // Nodes are prepared and entangled just before they are first needed and
  // dropped from the register once measured.
  windowed,
  // The whole cluster is prepared up front on node_count qubits.
  eager,
};

// One execution of an open graph. Owns its register; holds a pointer to
// the graph, which must outlive the session. Copyable, so exact-mode
// enumeration can branch by copying.
//
// In windowed mode an edge is applied when one of its endpoints is about to
// be acted on. CZ commutes with every operation on other qubits, so the
// state seen by any gate or measurement equals the one the eager schedule
// produces; only the register width differs.
class PatternSession {
 public:
  PatternSession(const OpenGraph& graph, ClusterPrep prep, Execution mode = Execution::windowed)
      : graph_(&graph),
        prep_(std::move(prep)),
        mode_(mode),
        state_(StateVector::empty()),
        bits_(graph.node_count()),
        slot_(graph.node_count(), kNone),
        released_(graph.node_count(), false),
        edge_done_(graph.edges().size(), false) {
    detail::check_input(graph, prep_.input);
    detail::check_phases(graph, prep_);
    if (mode_ == Execution::eager) {
      state_ = StateVector(graph.node_count());
      prepare_cluster(state_, graph, prep_);
      for (std::size_t i = 0; i < graph.node_count(); ++i) slot_[i] = i;
      node_of_slot_.resize(graph.node_count());
      std::iota(node_of_slot_.begin(), node_of_slot_.end(), std::size_t{0});
      edge_done_.assign(edge_done_.size(), true);
    } else {
      state_ = StateVector::from_amplitudes(prep_.input.amplitudes);
      const auto inputs = graph.inputs();
      for (std::size_t k = 0; k < inputs.size(); ++k) {
        slot_[inputs[k]] = k;
        node_of_slot_.push_back(inputs[k]);
        if (!prep_.phase.empty()) state_.rz(k, prep_.phase[inputs[k]]);
      }
    }
    peak_ = state_.num_qubits();
  }

  const OpenGraph& graph() const { return *graph_; }
  const StateVector& state() const { return state_; }
  StateVector& state() { return state_; }
  const ClassicalBits& bits() const { return bits_; }
  ClassicalBits& bits() { return bits_; }
  Execution execution() const { return mode_; }
  std::size_t live_qubits() const { return state_.num_qubits(); }
  std::size_t peak_qubits() const { return peak_; }

  // Makes `node` live with every incident edge applied. Returns its qubit.
  std::size_t entangle(std::size_t node) {
    activate(node);
    for (auto e : graph_->incident_edges(node)) {
      if (edge_done_[e]) continue;
      const auto& edge = graph_->edges()[e];
      activate(edge.a);
      activate(edge.b);
      state_.cz(slot_[edge.a], slot_[edge.b]);
      edge_done_[e] = true;
    }
    return slot_[node];
  }

  std::size_t qubit(std::size_t node) const {
    if (node >= slot_.size() || slot_[node] == kNone) {
      throw StateError("node " + std::to_string(node) + " is not live");
    }
    return slot_[node];
  }

  void apply(const Gate& gate, std::size_t node) { apply_gate(state_, gate, entangle(node)); }

  void apply_conditional(const Gate& gate, std::size_t node, std::size_t control) {
    mbqc::apply_conditional(state_, gate, entangle(node), control, bits_);
  }

  int measure_z(std::size_t node, double u, Remeasure remeasure = Remeasure::forbid) {
    if (remeasure == Remeasure::forbid && bits_.measured(node)) {
      throw StateError("node " + std::to_string(node) + " already measured");
    }
    const int bit = state_.measure(entangle(node), u);
    bits_.record(node, bit);
    return bit;
  }

  int measure_pattern_qubit(std::size_t node, const MeasurementPattern& pattern, double u, bool corrections = true) {
    const auto q = entangle(node);
    return measure_with_correction(state_, q, bits_, node, pattern, u, corrections);
  }

  // Exact-mode step: projects `node` onto `bit` and records it. Returns the
  // probability of that outcome.
  double project(std::size_t node, int bit) {
    const double p = state_.project(entangle(node), bit);
    bits_.record(node, bit);
    return p;
  }

  // Drops a measured node from the register (windowed mode only).
  void release(std::size_t node) {
    if (mode_ == Execution::eager) return;
    if (!bits_.measured(node)) throw StateError("cannot release unmeasured node " + std::to_string(node));
    for (auto e : graph_->incident_edges(node)) {
      if (!edge_done_[e]) throw StateError("node " + std::to_string(node) + " released with pending edges");
    }
    drop(node);
  }

  // State of `nodes` (in that order, little-endian) once every other live
  // node has collapsed to a basis state.
  StateVector extract(std::span<const std::size_t> nodes) {
    for (auto n : nodes) entangle(n);
    StateVector copy = state_;
    std::vector<std::size_t> owner = node_of_slot_;
    std::vector<bool> keep(graph_->node_count(), false);
    for (auto n : nodes) keep[n] = true;
    for (std::size_t s = copy.num_qubits(); s-- > 0;) {
      if (!keep[owner[s]]) {
        copy.discard_qubit(s);
        owner[s] = owner.back();
        owner.pop_back();
      }
    }
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const auto s = static_cast<std::size_t>(std::find(owner.begin(), owner.end(), nodes[k]) - owner.begin());
      copy.swap_qubits(k, s);
      std::swap(owner[k], owner[s]);
    }
    return copy;
  }

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  void activate(std::size_t node) {
    if (node >= slot_.size()) throw IndexError("node " + std::to_string(node) + " out of range");
    if (slot_[node] != kNone) return;
    if (released_[node]) throw StateError("node " + std::to_string(node) + " was already released");
    const Qubit q = prep_.phase.empty() ? ket::plus : ket::plus_at(prep_.phase[node]);
    slot_[node] = state_.append_qubit(q);
    node_of_slot_.push_back(node);
    peak_ = std::max(peak_, state_.num_qubits());
  }

  void drop(std::size_t node) {
    const auto s = qubit(node);
    state_.discard_qubit(s);
    const auto moved = node_of_slot_.back();
    node_of_slot_[s] = moved;
    slot_[moved] = s;
    node_of_slot_.pop_back();
    slot_[node] = kNone;
    released_[node] = true;
  }

  const OpenGraph* graph_;
  ClusterPrep prep_;
  Execution mode_;
  StateVector state_;
  ClassicalBits bits_;
  std::vector<std::size_t> slot_;
  std::vector<std::size_t> node_of_slot_;
  std::vector<bool> released_;
  std::vector<bool> edge_done_;
  std::size_t peak_ = 0;
};

enum class Basis { Z, X };

struct RunOptions {
  bool corrections = true;
  // Z corrections on outputs only matter for non-Z readout.
  bool output_z_corrections = false;
  // Readout basis per output; empty = Z everywhere.
  std::vector<Basis> readout;
  Execution execution = Execution::windowed;
};

// One uniform per node, drawn in node order at the start of a shot. Every
// measurement of node i is sampled with u[i], so runs that differ only in
// how a basis is reached (blind vs plain, faithful vs replica) see the
// same outcomes.
class OutcomeSchedule {
 public:
  OutcomeSchedule(RngStream& rng, std::size_t nodes) : u_(nodes) {
    for (auto& u : u_) u = rng.uniform();
  }
  double operator[](std::size_t node) const { return u_.at(node); }

 private:
  std::vector<double> u_;
};

struct PatternRun {
  std::vector<int> output_bits;  // in graph.outputs() order
  ClassicalBits bits;
};

namespace detail {
inline Basis readout_basis(const RunOptions& options, std::size_t k) {
  if (options.readout.empty()) return Basis::Z;
  return options.readout.at(k);
}

inline void correct_output(PatternSession& session, const MeasurementPattern& pattern, std::size_t node,
                           const RunOptions& options) {
  if (!options.corrections) return;
  for (auto j : pattern.sx(node)) session.apply_conditional(Gate::x(), node, j);
  if (options.output_z_corrections) {
    for (auto j : pattern.sz(node)) session.apply_conditional(Gate::z(), node, j);
  }
}

inline void check_run(const OpenGraph& graph, const Flow& flow, const MeasurementPattern& pattern,
                      const RunOptions& options) {
  if (!validate_flow(graph, flow)) throw StructureError("pattern flow is not valid");
  validate_pattern(graph, pattern);
  if (!options.readout.empty() && options.readout.size() != graph.outputs().size()) {
    throw UsageError("need one readout basis per output");
  }
}
}  // namespace detail

// Measures every non-output node in pattern order with corrections, then
// reads the outputs after their X (and optionally Z) corrections.
inline PatternRun run_pattern(const OpenGraph& graph, const Flow& flow, const MeasurementPattern& pattern,
                              const ClusterPrep& prep, RngStream& rng, const RunOptions& options = {}) {
  detail::check_run(graph, flow, pattern, options);
  const OutcomeSchedule u(rng, graph.node_count());
  PatternSession session(graph, prep, options.execution);
  for (auto node : pattern.order) {
    session.measure_pattern_qubit(node, pattern, u[node], options.corrections);
    session.release(node);
  }
  PatternRun run;
  const auto outputs = graph.outputs();
  for (std::size_t k = 0; k < outputs.size(); ++k) {
    const auto node = outputs[k];
    detail::correct_output(session, pattern, node, options);
    if (detail::readout_basis(options, k) == Basis::X) session.apply(Gate::h(), node);
    run.output_bits.push_back(session.measure_z(node, u[node]));
  }
  run.bits = session.bits();
  return run;
}

inline PatternRun run_pattern(const OpenGraph& graph, const Flow& flow, const MeasurementPattern& pattern,
                              const InputState& input, RngStream& rng, const RunOptions& options = {}) {
  return run_pattern(graph, flow, pattern, ClusterPrep{input, {}}, rng, options);
}

inline constexpr std::size_t kMaxExactMeasurements = 8;

struct Branch {
  std::vector<int> outcomes;  // one per measured node, pattern order
  double probability = 0.0;
  StateVector output;         // corrected output state, graph.outputs() order
};

// Depth-first enumeration of every measurement branch with its probability.
// Output corrections follow `options`; readout bases are not applied.
inline std::vector<Branch> enumerate_branches(const OpenGraph& graph, const Flow& flow,
                                              const MeasurementPattern& pattern, const ClusterPrep& prep,
                                              const RunOptions& options = {}) {
  detail::check_run(graph, flow, pattern, options);
  if (pattern.order.size() > kMaxExactMeasurements) {
    throw UsageError("exact mode supports at most " + std::to_string(kMaxExactMeasurements) +
                     " measured qubits, pattern has " + std::to_string(pattern.order.size()));
  }
  std::vector<Branch> branches;
  std::vector<int> outcomes;
  const std::function<void(PatternSession, std::size_t, double)> descend =
      [&](PatternSession session, std::size_t depth, double probability) {
        if (depth == pattern.order.size()) {
          for (auto node : graph.outputs()) detail::correct_output(session, pattern, node, options);
          branches.push_back(Branch{outcomes, probability, session.extract(graph.outputs())});
          return;
        }
        const auto node = pattern.order[depth];
        const auto q = session.entangle(node);
        auto& state = session.state();
        auto& bits = session.bits();
        if (options.corrections) {
          for (auto j : pattern.sz(node)) apply_conditional(state, Gate::z(), q, j, bits);
          for (auto j : pattern.sx(node)) apply_conditional(state, Gate::x(), q, j, bits);
        }
        state.rz(q, -pattern.angle(node));
        state.h(q);
        const double p0 = state.probability_of_zero(q);
        for (int bit = 0; bit < 2; ++bit) {
          const double p = bit == 0 ? p0 : 1.0 - p0;
          if (p < 1e-14) continue;
          PatternSession next = session;
          next.project(node, bit);
          next.release(node);
          outcomes.push_back(bit);
          descend(std::move(next), depth + 1, probability * p);
          outcomes.pop_back();
        }
      };
  descend(PatternSession(graph, prep, options.execution), 0, 1.0);
  return branches;
}

// Exact distribution over output bitstrings (index little-endian in output
// order) under the given readout bases.
inline std::vector<double> exact_output_distribution(const std::vector<Branch>& branches,
                                                     const std::vector<Basis>& readout = {}) {
  if (branches.empty()) return {};
  std::vector<double> dist(branches.front().output.size(), 0.0);
  for (const auto& b : branches) {
    StateVector out = b.output;
    for (std::size_t k = 0; k < readout.size(); ++k) {
      if (readout[k] == Basis::X) out.h(k);
    }
    for (std::size_t i = 0; i < out.size(); ++i) dist[i] += b.probability * std::norm(out[i]);
  }
  return dist;
}

}  // namespace mbqc
