// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mbqc.hpp"

namespace {

using namespace mbqc;
using Clock = std::chrono::steady_clock;

constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_seconds, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome out{false, ""};
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_seconds > 0 && secs > budget_seconds) {
    out.passed = false;
    out.detail += " (over time budget)";
  }
  if (!out.passed) ++failures;
  std::printf("%s  %2d  %-32s %s [%.2fs]\n", out.passed ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

// Exact output distribution of a gadget under the given readout.
std::vector<double> exact(const GateGadget& g, const InputState& input, const std::vector<Basis>& readout) {
  RunOptions opt;
  opt.output_z_corrections = true;
  return exact_output_distribution(enumerate_branches(g.graph, g.flow, g.pattern, ClusterPrep{input, {}}, opt),
                                   readout);
}

// Sampled histogram of a gadget, outcome index little-endian over outputs.
std::vector<std::size_t> sample(const GateGadget& g, const InputState& input, const std::vector<Basis>& readout,
                                std::size_t shots) {
  RunOptions opt;
  opt.output_z_corrections = true;
  opt.readout = readout;
  std::vector<std::size_t> counts(std::size_t{1} << g.graph.outputs().size(), 0);
  for (std::size_t s = 0; s < shots; ++s) {
    RngStream rng = RngStream::for_shot(kSeed, s);
    const auto run = run_pattern(g.graph, g.flow, g.pattern, input, rng, opt);
    std::size_t index = 0;
    for (std::size_t k = 0; k < run.output_bits.size(); ++k) index |= std::size_t(run.output_bits[k]) << k;
    ++counts[index];
  }
  return counts;
}

// Closed-form grid sets, written out independently of the library.
CorrectionSets grid_sets_by_formula() {
  const std::vector<std::size_t> vcz{4, 5, 14, 15};
  CorrectionSets s{std::vector<std::vector<std::size_t>>(18), std::vector<std::vector<std::size_t>>(18)};
  for (std::size_t i = 2; i <= 17; ++i) s.x[i] = {i - 2};
  for (std::size_t i = 4; i <= 17; ++i) {
    const bool in_vcz = std::find(vcz.begin(), vcz.end(), i) != vcz.end();
    if (!in_vcz) {
      s.z[i] = {i - 4};
    } else if (i % 2 == 0) {
      s.z[i] = {i - 4, i - 1};
    } else {
      s.z[i] = {i - 4, i - 3};
    }
  }
  return s;
}

io::json counts_only(const ShotHistogram& h) {
  ShotHistogram bare = h;
  bare.metadata.clear();
  return io::histogram_to_json(bare);
}

}  // namespace

int main() {
  const auto zero = InputState::product({ket::zero});
  const auto plus = InputState::product({ket::plus});

  criterion(1, "grover determinism", 10.0, [] {
    std::string detail;
    bool ok = true;
    for (const auto& oracle : grover::Oracle::all()) {
      const auto h = grover::run(oracle, 1024, kSeed);
      ok = ok && h.count(oracle.str()) == 1024 && h.shots == 1024;
      detail += oracle.str() + ":" + std::to_string(h.count(oracle.str())) + "/1024 ";
    }
    return Outcome{ok, detail};
  });

  criterion(2, "H gadget", 0, [&] {
    const auto g = h_gadget();
    const double p0 = exact(g, zero, {})[0];
    const double f0 = sample(g, zero, {}, 1024)[0] / 1024.0;
    return Outcome{std::fabs(p0 - 0.5) < 1e-9 && std::fabs(f0 - 0.5) <= 0.05,
                   "exact P(0)=" + fmt(p0) + ", sampled " + fmt(f0)};
  });

  criterion(3, "T gadget", 0, [&] {
    const auto g = t_gadget();
    const double expected = std::pow(std::cos(kPi / 8), 2);
    const double p0 = exact(g, plus, {Basis::X})[0];
    const double f0 = sample(g, plus, {Basis::X}, 1024)[0] / 1024.0;
    return Outcome{std::fabs(p0 - expected) < 1e-9 && std::fabs(f0 - expected) <= 0.04,
                   "exact P(0)=" + fmt(p0) + ", sampled " + fmt(f0)};
  });

  criterion(4, "X, Z, CZ gadgets", 0, [&] {
    const auto one_plus = InputState::product({ket::one, ket::plus});
    const auto x = sample(x_gadget(), zero, {}, 1024);
    const auto z = sample(z_gadget(), plus, {Basis::X}, 1024);
    const auto cz = sample(cz_gadget(), one_plus, {Basis::Z, Basis::X}, 1024);
    const double px = exact(x_gadget(), zero, {})[1];
    const double pz = exact(z_gadget(), plus, {Basis::X})[1];
    const double pcz = exact(cz_gadget(), one_plus, {Basis::Z, Basis::X})[3];
    const bool ok = x[1] == 1024 && z[1] == 1024 && cz[3] == 1024 && std::fabs(px - 1) < 1e-9 &&
                    std::fabs(pz - 1) < 1e-9 && std::fabs(pcz - 1) < 1e-9;
    return Outcome{ok, "X:" + std::to_string(x[1]) + " Z:" + std::to_string(z[1]) + " CZ:" + std::to_string(cz[3]) +
                           " of 1024"};
  });

  criterion(5, "gadget-matrix equivalence", 5.0, [] {
    RngStream rng(kSeed);
    double worst = 1.0;
    for (const char* name : {"H", "X", "Z", "T", "RZ", "CZ"}) {
      for (int t = 0; t < 100; ++t) {
        const auto g = gadget(name, verify::random_angle(rng));
        const auto psi = verify::random_state(g.graph.inputs().size(), rng);
        worst = std::min(worst, verify::gadget_min_fidelity(g, psi));
      }
    }
    return Outcome{worst > 1.0 - 1e-9, "min fidelity " + fmt(worst)};
  });

  criterion(6, "correction-set oracle", 0, [] {
    const auto derived = derive_correction_sets(grover::layout(), grover::flow());
    return Outcome{derived == grid_sets_by_formula(), "18 nodes compared"};
  });

  criterion(7, "UBQC correctness", 60.0, [] {
    bool ok = true;
    std::size_t runs = 0;
    for (const auto& oracle : grover::Oracle::all()) {
      for (std::uint64_t secret_seed = 0; secret_seed < 20; ++secret_seed) {
        RngStream secret_rng(1000 + secret_seed);
        ubqc::Options opt;
        opt.fixed_secrets = ubqc::generate_secrets(secret_rng);
        opt.keep_transcripts = false;
        const auto r = ubqc::run(oracle, 64, kSeed + secret_seed, opt);
        ok = ok && r.client.count(oracle.str()) == r.client.shots;
        ++runs;
      }
    }
    return Outcome{ok, std::to_string(runs) + " (oracle, secrets) runs of 64 shots"};
  });

  criterion(8, "UBQC angle-level blindness", 0, [] {
    bool ok = true;
    for (int k = 0; k < 8; ++k) {
      const auto d = ubqc::blindness_enumerate(Angle::octants(k));
      for (auto w : d.weight) ok = ok && d.total == 16 && w == 2;
    }
    return Outcome{ok, "every octant weight 2/16 for all 8 phi'"};
  });

  criterion(9, "UBQC outcome-level blindness", 0, [] {
    bool ok = true;
    std::string detail;
    for (const auto& oracle : grover::Oracle::all()) {
      ubqc::Options opt;
      opt.keep_transcripts = false;
      const auto r = ubqc::run(oracle, 4096, kSeed, opt);
      const auto chi = chi_square_uniform(r.server.dense_counts());
      ok = ok && chi.p_value > 0.01 && r.client.count(oracle.str()) == 4096;
      detail += oracle.str() + " p=" + fmt(chi.p_value).substr(0, 6) + " ";
    }
    return Outcome{ok, detail};
  });

  criterion(10, "faithful/replica equivalence", 0, [] {
    bool ok = true;
    for (const auto& oracle : grover::Oracle::all()) {
      ubqc::Options faithful, replica;
      faithful.keep_transcripts = replica.keep_transcripts = false;
      replica.mode = ubqc::Mode::replica;
      ok = ok && ubqc::run(oracle, 1024, kSeed, faithful).client.counts ==
                     ubqc::run(oracle, 1024, kSeed, replica).client.counts;
    }
    return Outcome{ok, "client histograms compared for 4 oracles"};
  });

  criterion(11, "zero-secret degeneracy", 0, [] {
    bool ok = true;
    for (const auto& oracle : grover::Oracle::all()) {
      ubqc::Options opt;
      opt.fixed_secrets = ubqc::ClientSecrets::zero();
      opt.keep_transcripts = false;
      const auto blind = ubqc::run(oracle, 1024, kSeed, opt).client;
      const auto plain = grover::run(oracle, 1024, kSeed);
      ok = ok && counts_only(blind).dump() == counts_only(plain).dump();

      // Every intermediate outcome agrees too, shot by shot.
      opt.keep_transcripts = true;
      const auto sessions = ubqc::run(oracle, 64, kSeed, opt).transcripts;
      const auto g = grover::build_pattern(oracle);
      for (std::size_t s = 0; s < sessions.size(); ++s) {
        RngStream rng = RngStream::for_shot(kSeed, s);
        const auto run = run_pattern(g.graph, g.flow, g.pattern, ClusterPrep{grover::input_state(), {}}, rng);
        for (const auto& round : sessions[s].rounds) ok = ok && round.s_raw == run.bits.get(round.node);
      }
    }
    return Outcome{ok, "serialized histograms and per-shot outcomes compared for 4 oracles"};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
