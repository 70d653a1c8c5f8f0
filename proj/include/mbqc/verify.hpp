#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/gadgets.hpp"
#include "mbqc/graph.hpp"
#include "mbqc/grover.hpp"
#include "mbqc/histogram.hpp"
#include "mbqc/pattern.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/ubqc.hpp"

// Property checks shared by the test suites and the `selftest` command.
namespace mbqc::verify {

// Haar-distributed pure state: i.i.d. complex Gaussian amplitudes
// (Box-Muller), normalized.
inline StateVector random_state(std::size_t num_qubits, RngStream& rng) {
  std::vector<amplitude> amps(std::size_t{1} << num_qubits);
  double norm = 0.0;
  for (auto& a : amps) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    a = {radius * std::cos(kTwoPi * u2), radius * std::sin(kTwoPi * u2)};
    norm += std::norm(a);
  }
  for (auto& a : amps) a /= std::sqrt(norm);
  return StateVector::from_amplitudes(std::move(amps));
}

inline Angle random_angle(RngStream& rng) { return Angle::radians(kTwoPi * rng.uniform()); }

// Smallest fidelity, over every measurement branch, between the corrected
// output and the dense reference applied to the same input.
inline double gadget_min_fidelity(const GateGadget& g, const StateVector& input, bool corrections = true) {
  RunOptions options;
  options.corrections = corrections;
  options.output_z_corrections = true;
  const auto branches = enumerate_branches(g.graph, g.flow, g.pattern, ClusterPrep{InputState::from_state(input), {}},
                                           options);
  StateVector expected = input;
  apply_reference(g, expected);
  double worst = 1.0;
  for (const auto& b : branches) worst = std::min(worst, fidelity(b.output, expected));
  return worst;
}

// Two-node teleportation, node 0 measured at theta with no correction:
// outcome 0 leaves H RZ(-theta)|psi>, outcome 1 leaves X H RZ(-theta)|psi>.
// Returns the smaller of the two branch fidelities.
inline double teleportation_min_fidelity(const StateVector& input, const Angle& theta) {
  const OpenGraph graph(2, {{0, 1}}, {0}, {1});
  Flow flow;
  flow.successor[0] = 1;
  const auto pattern = make_pattern(graph, flow, {theta, Angle::zero()});
  RunOptions options;
  options.corrections = false;
  const auto branches = enumerate_branches(graph, flow, pattern, ClusterPrep{InputState::from_state(input), {}},
                                           options);
  double worst = branches.size() == 2 ? 1.0 : 0.0;
  for (const auto& b : branches) {
    StateVector expected = input;
    expected.rz(0, -theta);
    expected.h(0);
    if (b.outcomes[0] == 1) expected.x(0);
    worst = std::min(worst, fidelity(b.output, expected));
  }
  return worst;
}

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelftestOptions {
  std::uint64_t seed = 20240611;
  // Debug switch: runs every pattern without conditional corrections.
  bool disable_corrections = false;
};

inline Check check_teleportation(const SelftestOptions& opt) {
  RngStream rng(opt.seed);
  double worst = 1.0;
  for (int t = 0; t < 100; ++t) {
    const auto psi = random_state(1, rng);
    worst = std::min(worst, teleportation_min_fidelity(psi, random_angle(rng)));
  }
  return {"gate teleportation", worst > 1.0 - 1e-9, "min fidelity " + std::to_string(worst)};
}

inline Check check_gadget_equivalence(const SelftestOptions& opt) {
  RngStream rng(opt.seed + 1);
  double worst = 1.0;
  std::string worst_name;
  for (const char* name : {"H", "X", "Z", "T", "RZ", "CZ"}) {
    for (int t = 0; t < 100; ++t) {
      const auto g = gadget(name, random_angle(rng));
      const auto psi = random_state(g.graph.inputs().size(), rng);
      const double f = gadget_min_fidelity(g, psi, !opt.disable_corrections);
      if (f < worst) {
        worst = f;
        worst_name = name;
      }
    }
  }
  return {"gadget equivalence", worst > 1.0 - 1e-9,
          "min fidelity " + std::to_string(worst) + (worst_name.empty() ? "" : " (" + worst_name + ")")};
}

inline Check check_correction_sets() {
  const auto derived = derive_correction_sets(grover::layout(), grover::flow());
  return {"correction sets", derived == grover::closed_form_correction_sets(), "grid sets vs closed form"};
}

inline Check check_flow() {
  const auto graph = grover::layout();
  const bool valid = validate_flow(graph, grover::flow());
  Flow corrupted;
  for (std::size_t i = 0; i < grover::kNodes - 2; ++i) corrupted.successor[i] = std::min(i + 4, grover::kNodes - 1);
  const bool corrupted_valid = validate_flow(graph, corrupted);
  return {"flow validity", valid && !corrupted_valid,
          std::string("f(i)=i+2 ") + (valid ? "valid" : "INVALID") + ", f(i)=i+4 " +
              (corrupted_valid ? "VALID" : "invalid")};
}

inline bool uniform_deltas(const ubqc::DeltaDistribution& d) {
  for (auto w : d.weight) {
    if (w * 8 != d.total) return false;
  }
  return true;
}

inline Check check_blindness_enumeration() {
  bool ok = true;
  const auto reference = ubqc::blindness_enumerate(Angle::zero());
  for (int k = 0; k < 8; ++k) {
    const auto d = ubqc::blindness_enumerate(Angle::octants(k));
    ok = ok && uniform_deltas(d) && d == reference;
  }
  return {"blindness enumeration", ok, "delta uniform over octants for every phi'"};
}

inline Check check_grover(const SelftestOptions& opt) {
  grover::Options g;
  g.corrections = !opt.disable_corrections;
  std::string detail;
  bool ok = true;
  for (const auto& oracle : grover::Oracle::all()) {
    const auto h = grover::run(oracle, grover::kDefaultShots, opt.seed, g);
    const bool hit = h.count(oracle.str()) == h.shots;
    ok = ok && hit;
    detail += oracle.str() + ":" + std::to_string(h.count(oracle.str())) + "/" + std::to_string(h.shots) + " ";
  }
  return {"grover determinism", ok, detail};
}

inline Check check_correction_necessity(const SelftestOptions& opt) {
  const auto oracle = grover::Oracle::parse("00");
  grover::Options with;
  with.corrections = !opt.disable_corrections;
  grover::Options without;
  without.corrections = false;
  const auto corrected = grover::run(oracle, 4096, opt.seed, with);
  const auto raw = grover::run(oracle, 4096, opt.seed, without);
  double max_freq = 0.0;
  for (const auto& [bits, n] : raw.counts) max_freq = std::max(max_freq, raw.frequency(bits));
  const bool deterministic = corrected.count(oracle.str()) == corrected.shots;
  return {"correction necessity", deterministic && max_freq <= 0.35,
          "corrected hit rate " + std::to_string(corrected.frequency(oracle.str())) +
              ", uncorrected max frequency " + std::to_string(max_freq)};
}

inline Check check_ubqc(const SelftestOptions& opt) {
  bool ok = true;
  std::string detail;
  for (const auto& oracle : grover::Oracle::all()) {
    ubqc::Options u;
    u.keep_transcripts = false;
    const auto r = ubqc::run(oracle, 4096, opt.seed, u);
    const auto chi = chi_square_uniform(r.server.dense_counts());
    const bool hit = r.client.count(oracle.str()) == r.client.shots;
    ok = ok && hit && chi.p_value > 0.01;
    detail += oracle.str() + ": client " + (hit ? "ok" : "WRONG") + ", server p=" + std::to_string(chi.p_value) + " ";
  }
  return {"ubqc correctness and blindness", ok, detail};
}

inline std::vector<Check> run_selftest(const SelftestOptions& opt = {}) {
  return {check_teleportation(opt),     check_gadget_equivalence(opt), check_correction_sets(),
          check_flow(),                 check_blindness_enumeration(), check_grover(opt),
          check_correction_necessity(opt), check_ubqc(opt)};
}

}  // namespace mbqc::verify
