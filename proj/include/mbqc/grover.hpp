#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/histogram.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/simulator.hpp"

namespace mbqc::grover {

// Marked two-bit string. Written like a classical register readout: the
// first character is row 1 (output q17), the second is row 0 (output q16).
class Oracle {
 public:
  static Oracle parse(std::string_view s) {
    if (s.size() != 2 || (s[0] != '0' && s[0] != '1') || (s[1] != '0' && s[1] != '1')) {
      throw UsageError("oracle must be one of 00, 01, 10, 11 (got '" + std::string(s) + "')");
    }
    return Oracle(std::string(s));
  }

  static std::array<Oracle, 4> all() { return {parse("00"), parse("01"), parse("10"), parse("11")}; }

  const std::string& str() const { return marked_; }

  // Marked bit of grid row 0 or 1.
  int row_bit(std::size_t row) const { return marked_.at(1 - row) - '0'; }

  friend bool operator==(const Oracle&, const Oracle&) = default;

 private:
  explicit Oracle(std::string s) : marked_(std::move(s)) {}
  std::string marked_;
};

// 2 x 9 grid, node q_{x,y} = 2y + x for row x and column y.
inline constexpr std::size_t kRows = 2;
inline constexpr std::size_t kColumns = 9;
inline constexpr std::size_t kNodes = kRows * kColumns;
inline constexpr std::array<std::size_t, 4> kVerticalCz{4, 5, 14, 15};
inline constexpr std::array<std::size_t, 2> kInputs{0, 1};
inline constexpr std::array<std::size_t, 2> kOutputs{16, 17};
inline constexpr std::size_t kDefaultShots = 1024;

inline constexpr std::size_t node(std::size_t row, std::size_t column) { return 2 * column + row; }

inline bool in_vertical_cz(std::size_t i) {
  for (auto v : kVerticalCz) {
    if (v == i) return true;
  }
  return false;
}

inline OpenGraph layout() {
  std::vector<Edge> edges;
  for (std::size_t y = 0; y + 1 < kColumns; ++y) {
    edges.push_back({node(0, y), node(0, y + 1)});
    edges.push_back({node(1, y), node(1, y + 1)});
  }
  for (auto v : kVerticalCz) {
    if (v % 2 == 0) edges.push_back({v, v + 1});
  }
  return OpenGraph(kNodes, std::move(edges), {kInputs.begin(), kInputs.end()}, {kOutputs.begin(), kOutputs.end()});
}

// f(i) = i + 2, ascending measurement order.
inline Flow flow() {
  Flow f;
  for (std::size_t i = 0; i + 2 < kNodes; ++i) f.successor[i] = i + 2;
  return f;
}

// pi on the X-gadget middle nodes of every row whose marked bit is 0
// (columns 1 and 3), pi on the Z nodes 10 and 11, 0 elsewhere.
inline std::vector<Angle> angles(const Oracle& oracle) {
  std::vector<Angle> phi(kNodes, Angle::zero());
  for (std::size_t row = 0; row < kRows; ++row) {
    if (oracle.row_bit(row) == 0) {
      phi[node(row, 1)] = Angle::pi();
      phi[node(row, 3)] = Angle::pi();
    }
  }
  phi[10] = Angle::pi();
  phi[11] = Angle::pi();
  return phi;
}

// Closed-form correction sets of the grid:
//   S_X(i) = {i-2} for i >= 2;
//   S_Z(i) = {} for i < 4, {i-4, i-1} for even VCZ nodes, {i-4, i-3} for
//   odd VCZ nodes, {i-4} otherwise.
inline CorrectionSets closed_form_correction_sets() {
  CorrectionSets sets{std::vector<std::vector<std::size_t>>(kNodes), std::vector<std::vector<std::size_t>>(kNodes)};
  for (std::size_t i = 2; i < kNodes; ++i) sets.x[i] = {i - 2};
  for (std::size_t i = 4; i < kNodes; ++i) {
    if (in_vertical_cz(i)) {
      sets.z[i] = i % 2 == 0 ? std::vector<std::size_t>{i - 4, i - 1} : std::vector<std::size_t>{i - 4, i - 3};
    } else {
      sets.z[i] = {i - 4};
    }
  }
  return sets;
}

struct GroverPattern {
  OpenGraph graph;
  Flow flow;
  MeasurementPattern pattern;
};

inline GroverPattern build_pattern(const Oracle& oracle) {
  GroverPattern g{layout(), grover::flow(), {}};
  g.pattern = make_pattern(g.graph, g.flow, angles(oracle));
  return g;
}

// Inputs of the grid start in |+>, standing in for the leading H layer.
inline InputState input_state() { return InputState::product({ket::plus, ket::plus}); }

struct Options {
  bool corrections = true;
  Execution execution = Execution::windowed;
};

inline ShotHistogram make_histogram(const Oracle& oracle, std::uint64_t seed) {
  ShotHistogram h;
  h.width = 2;
  h.seed = seed;
  h.metadata["oracle"] = oracle.str();
  return h;
}

// Shot s uses RngStream::for_shot(seed, s). Outcomes are rendered "q17 q16".
inline ShotHistogram run(const Oracle& oracle, std::size_t shots, std::uint64_t seed, const Options& options = {}) {
  if (shots == 0) throw UsageError("shots must be at least 1");
  const auto g = build_pattern(oracle);
  RunOptions run_options;
  run_options.corrections = options.corrections;
  run_options.execution = options.execution;
  const ClusterPrep prep{input_state(), {}};
  ShotHistogram hist = make_histogram(oracle, seed);
  hist.metadata["mode"] = "sample";
  for (std::size_t s = 0; s < shots; ++s) {
    RngStream rng = RngStream::for_shot(seed, s);
    const auto result = run_pattern(g.graph, g.flow, g.pattern, prep, rng, run_options);
    hist.add(format_bits(result.output_bits));
  }
  return hist;
}

// Exact output distribution of the two-qubit circuit: H H, oracle (X on
// each qubit whose marked bit is 0, CZ, undo X), H H, Z Z, CZ, H H.
// Qubit 0 is row 0. Index i is rendered as index_bits(i, 2).
inline std::array<double, 4> reference_circuit(const Oracle& oracle) {
  StateVector s(2);
  s.h(0);
  s.h(1);
  for (std::size_t q = 0; q < 2; ++q) {
    if (oracle.row_bit(q) == 0) s.x(q);
  }
  s.cz(0, 1);
  for (std::size_t q = 0; q < 2; ++q) {
    if (oracle.row_bit(q) == 0) s.x(q);
  }
  s.h(0);
  s.h(1);
  s.z(0);
  s.z(1);
  s.cz(0, 1);
  s.h(0);
  s.h(1);
  std::array<double, 4> dist{};
  for (std::size_t i = 0; i < 4; ++i) dist[i] = std::norm(s[i]);
  return dist;
}

}  // namespace mbqc::grover
