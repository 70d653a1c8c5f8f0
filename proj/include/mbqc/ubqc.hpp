#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/grover.hpp"
#include "mbqc/histogram.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/simulator.hpp"

// Universal blind quantum computation on the Grover grid, simulated as two
// logical parties exchanging in-process messages.
namespace mbqc::ubqc {

// Hidden rotation theta_i (an octant) and flip bit r_i for every node.
struct ClientSecrets {
  std::vector<Angle> theta;
  std::vector<int> r;

  static ClientSecrets zero(std::size_t nodes = grover::kNodes) {
    return {std::vector<Angle>(nodes, Angle::zero()), std::vector<int>(nodes, 0)};
  }

  std::size_t size() const { return theta.size(); }

  void check(std::size_t nodes) const {
    if (theta.size() != nodes || r.size() != nodes) throw SizeError("client secrets do not cover every node");
    for (const auto& t : theta) {
      if (!t.is_octant()) throw UsageError("client rotation " + t.to_string() + " is not an octant");
    }
  }
};

// theta_i uniform over the eight octants, then r_i uniform, i.i.d.
inline ClientSecrets generate_secrets(RngStream& rng, std::size_t nodes = grover::kNodes) {
  ClientSecrets s;
  s.theta.reserve(nodes);
  s.r.reserve(nodes);
  for (std::size_t i = 0; i < nodes; ++i) s.theta.push_back(Angle::octants(rng.octant()));
  for (std::size_t i = 0; i < nodes; ++i) s.r.push_back(rng.bit());
  return s;
}

// Every node, inputs included, starts in |+_theta_i>.
inline ClusterPrep blind_cluster_prep(const OpenGraph& graph, const ClientSecrets& secrets) {
  secrets.check(graph.node_count());
  return ClusterPrep{InputState::product(std::vector<Qubit>(graph.inputs().size(), ket::plus)), secrets.theta};
}

// Full-register blind preparation: H and RZ(theta_i) on every node, then CZ
// along the edges.
inline void blind_prepare(StateVector& state, const OpenGraph& graph, const ClientSecrets& secrets) {
  prepare_cluster(state, graph, blind_cluster_prep(graph, secrets));
}

// delta = phi' + theta + pi * r
inline Angle client_delta(const Angle& phi_corrected, const Angle& theta, int r) {
  const Angle delta = phi_corrected + theta;
  return (r & 1) ? delta.plus_pi() : delta;
}

// phi' from the unmasked outcomes of the node's dependencies.
inline Angle client_compute_phi(std::size_t node, const MeasurementPattern& pattern, const ClassicalBits& unmasked) {
  for (const auto* set : {&pattern.sx(node), &pattern.sz(node)}) {
    for (auto j : *set) {
      if (!unmasked.measured(j)) {
        throw StateError("outcome of node " + std::to_string(j) + " needed for node " + std::to_string(node) +
                         " is not available yet");
      }
    }
  }
  return corrected_angle(pattern.angle(node), unmasked.parity(pattern.sx(node)), unmasked.parity(pattern.sz(node)));
}

// Measurement in the {|+_delta>, |-_delta>} basis: RZ(-delta), H, Z readout.
inline int server_measure_delta(StateVector& state, std::size_t qubit, ClassicalBits& bits, std::size_t node,
                                const Angle& delta, double u) {
  if (bits.measured(node)) throw StateError("node " + std::to_string(node) + " already measured");
  state.rz(qubit, -delta);
  state.h(qubit);
  const int bit = state.measure(qubit, u);
  bits.record(node, bit);
  return bit;
}

inline int server_measure_delta(StateVector& state, ClassicalBits& bits, std::size_t node, const Angle& delta,
                                RngStream& rng) {
  return server_measure_delta(state, node, bits, node, delta, rng.uniform());
}

// --- messages -------------------------------------------------------------

// Stands in for the client's quantum states in transit. The server builds
// its register from it but never reads the rotations.
class PreparedQubits {
 public:
  explicit PreparedQubits(ClusterPrep prep) : prep_(std::move(prep)) {}
  const ClusterPrep& states() const { return prep_; }

 private:
  ClusterPrep prep_;
};

struct DeltaMessage {
  std::size_t node;
  Angle delta;
};

struct OutcomeMessage {
  std::size_t node;
  int s;
};

struct OutputMessage {
  std::vector<std::size_t> nodes;
  std::vector<int> s;  // raw Z readouts
};

struct Round {
  std::size_t node;
  Angle delta;
  int s_raw;
  int s_unmasked;
};

// Everything recorded in one protocol session. The server view of it is
// `rounds` (node, delta, s_raw) and `outputs_raw`; the rest stays with the
// client.
struct Transcript {
  std::vector<Round> rounds;
  std::vector<std::size_t> output_nodes;
  std::vector<int> outputs_raw;
  std::vector<int> client_output;
  std::vector<int> server_output;
  ClientSecrets secrets;
};

// --- parties --------------------------------------------------------------

class Client {
 public:
  Client(const grover::GroverPattern& computation, ClientSecrets secrets)
      : computation_(&computation), secrets_(std::move(secrets)), unmasked_(computation.graph.node_count()) {
    secrets_.check(computation.graph.node_count());
  }

  PreparedQubits prepare() const { return PreparedQubits(blind_cluster_prep(computation_->graph, secrets_)); }

  DeltaMessage delta_for(std::size_t node) {
    const Angle phi = client_compute_phi(node, computation_->pattern, unmasked_);
    const Angle delta = client_delta(phi, secrets_.theta.at(node), secrets_.r.at(node));
    pending_ = Round{node, delta, 0, 0};
    return {node, delta};
  }

  void receive(const OutcomeMessage& msg) {
    if (!pending_ || pending_->node != msg.node) throw StateError("outcome for a node that was not asked for");
    Round round = *pending_;
    round.s_raw = msg.s;
    round.s_unmasked = msg.s ^ secrets_.r.at(msg.node);
    unmasked_.record(msg.node, round.s_unmasked);
    rounds_.push_back(round);
    pending_.reset();
  }

  // Output X corrections from the unmasked outcomes.
  std::vector<int> decode(const OutputMessage& msg) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < msg.nodes.size(); ++k) {
      out.push_back(msg.s[k] ^ unmasked_.parity(computation_->pattern.sx(msg.nodes[k])));
    }
    return out;
  }

  const std::vector<Round>& rounds() const { return rounds_; }
  const ClientSecrets& secrets() const { return secrets_; }

 private:
  const grover::GroverPattern* computation_;
  ClientSecrets secrets_;
  ClassicalBits unmasked_;
  std::optional<Round> pending_;
  std::vector<Round> rounds_;
};

// Knows the public graph and flow, the prepared qubits and the messages.
class Server {
 public:
  Server(const OpenGraph& graph, const Flow& flow, const PreparedQubits& qubits, const OutcomeSchedule& schedule,
         Execution execution = Execution::windowed)
      : graph_(&graph),
        public_corrections_(derive_correction_sets(graph, flow)),
        session_(graph, qubits.states(), execution),
        schedule_(&schedule) {}

  OutcomeMessage measure(const DeltaMessage& msg) {
    if (graph_->is_output(msg.node)) throw StateError("outputs are not measured blind");
    const auto q = session_.entangle(msg.node);
    const int s = server_measure_delta(session_.state(), q, session_.bits(), msg.node, msg.delta,
                                       (*schedule_)[msg.node]);
    session_.release(msg.node);
    return {msg.node, s};
  }

  OutputMessage read_outputs() {
    OutputMessage out;
    for (auto node : graph_->outputs()) {
      out.nodes.push_back(node);
      out.s.push_back(session_.measure_z(node, (*schedule_)[node]));
    }
    return out;
  }

  // What the server concludes from its own (masked) outcomes.
  std::vector<int> decode(const OutputMessage& msg) const {
    std::vector<int> out;
    for (std::size_t k = 0; k < msg.nodes.size(); ++k) {
      out.push_back(msg.s[k] ^ session_.bits().parity(public_corrections_.x.at(msg.nodes[k])));
    }
    return out;
  }

 private:
  const OpenGraph* graph_;
  CorrectionSets public_corrections_;
  PatternSession session_;
  const OutcomeSchedule* schedule_;
};

// --- sessions -------------------------------------------------------------

enum class Mode {
  // Corrections folded into delta by the client; no conditional gates.
  faithful,
  // Conditional gates on flipped bits, flips realised as X then re-measure.
  replica,
};

inline Transcript run_faithful_session(const grover::GroverPattern& g, const ClientSecrets& secrets,
                                       const OutcomeSchedule& schedule, Execution execution = Execution::windowed) {
  Client client(g, secrets);
  Server server(g.graph, g.flow, client.prepare(), schedule, execution);
  for (auto node : g.pattern.order) client.receive(server.measure(client.delta_for(node)));
  const auto outputs = server.read_outputs();
  Transcript t;
  t.rounds = client.rounds();
  t.output_nodes = outputs.nodes;
  t.outputs_raw = outputs.s;
  t.client_output = client.decode(outputs);
  t.server_output = server.decode(outputs);
  t.secrets = secrets;
  return t;
}

// Single-register replica: every node gets Z^r and RZ(-theta), then the
// usual corrected measurement at phi; when r = 1 the qubit is flipped with
// X and measured again so the classical register holds the unmasked bit.
inline Transcript run_replica_session(const grover::GroverPattern& g, const ClientSecrets& secrets,
                                      const OutcomeSchedule& schedule, Execution execution = Execution::windowed) {
  secrets.check(g.graph.node_count());
  PatternSession session(g.graph, blind_cluster_prep(g.graph, secrets), execution);
  ClassicalBits raw(g.graph.node_count());
  Transcript t;
  for (auto node : g.pattern.order) {
    const int r = secrets.r[node];
    const Angle phi = client_compute_phi(node, g.pattern, session.bits());
    if (r) session.apply(Gate::z(), node);
    session.apply(Gate::rz(-secrets.theta[node]), node);
    const int s_raw = session.measure_pattern_qubit(node, g.pattern, schedule[node]);
    raw.record(node, s_raw);
    int s = s_raw;
    if (r) {
      session.apply(Gate::x(), node);
      s = session.measure_z(node, schedule[node], Remeasure::allow);
    }
    session.release(node);
    t.rounds.push_back(Round{node, client_delta(phi, secrets.theta[node], r), s_raw, s});
  }
  for (auto node : g.graph.outputs()) {
    for (auto j : g.pattern.sx(node)) session.apply_conditional(Gate::x(), node, j);
    const int out = session.measure_z(node, schedule[node]);
    t.output_nodes.push_back(node);
    t.client_output.push_back(out);
    // Without the flips the X correction would have used the raw bits.
    int mask = 0;
    for (auto j : g.pattern.sx(node)) mask ^= raw.get(j) ^ session.bits().get(j);
    t.server_output.push_back(out ^ mask);
    t.outputs_raw.push_back(out ^ session.bits().parity(g.pattern.sx(node)));
  }
  t.secrets = secrets;
  return t;
}

struct Options {
  Mode mode = Mode::faithful;
  // Same secrets for every shot; otherwise fresh secrets per shot from
  // RngStream::for_secrets(seed, shot).
  std::optional<ClientSecrets> fixed_secrets;
  Execution execution = Execution::windowed;
  bool keep_transcripts = true;
};

struct Result {
  ShotHistogram client;
  ShotHistogram server;
  std::vector<Transcript> transcripts;
};

inline Result run(const grover::Oracle& oracle, std::size_t shots, std::uint64_t seed, const Options& options = {}) {
  if (shots == 0) throw UsageError("shots must be at least 1");
  const auto g = grover::build_pattern(oracle);
  Result result{grover::make_histogram(oracle, seed), grover::make_histogram(oracle, seed), {}};
  const char* mode = options.mode == Mode::faithful ? "faithful" : "replica";
  result.client.metadata["mode"] = mode;
  result.client.metadata["view"] = "client";
  result.server.metadata["mode"] = mode;
  result.server.metadata["view"] = "server";
  result.server.metadata.erase("oracle");
  for (std::size_t s = 0; s < shots; ++s) {
    RngStream rng = RngStream::for_shot(seed, s);
    const OutcomeSchedule schedule(rng, g.graph.node_count());
    ClientSecrets secrets;
    if (options.fixed_secrets) {
      secrets = *options.fixed_secrets;
    } else {
      RngStream secret_rng = RngStream::for_secrets(seed, s);
      secrets = generate_secrets(secret_rng, g.graph.node_count());
    }
    Transcript t = options.mode == Mode::faithful ? run_faithful_session(g, secrets, schedule, options.execution)
                                                  : run_replica_session(g, secrets, schedule, options.execution);
    result.client.add(format_bits(t.client_output));
    result.server.add(format_bits(t.server_output));
    if (options.keep_transcripts) result.transcripts.push_back(std::move(t));
  }
  return result;
}

// Weights of delta over the eight octants when (theta, r) is uniform over
// all 16 combinations: weight[k] / total.
struct DeltaDistribution {
  std::array<std::size_t, 8> weight{};
  std::size_t total = 0;
  friend bool operator==(const DeltaDistribution&, const DeltaDistribution&) = default;
};

inline DeltaDistribution blindness_enumerate(const Angle& phi_corrected) {
  if (!phi_corrected.is_octant()) {
    throw UsageError("blindness enumeration needs an octant angle, got " + phi_corrected.to_string());
  }
  DeltaDistribution d;
  for (int theta = 0; theta < 8; ++theta) {
    for (int r = 0; r < 2; ++r) {
      ++d.weight[static_cast<std::size_t>(client_delta(phi_corrected, Angle::octants(theta), r).octant())];
      ++d.total;
    }
  }
  return d;
}

}  // namespace mbqc::ubqc
