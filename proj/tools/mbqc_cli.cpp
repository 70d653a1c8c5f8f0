// mbqc: command-line front end for gadget checks, the Grover pattern and
// blind (UBQC) runs. Exit status is 0 iff the run reproduced the expected
// outcome within tolerance.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbqc.hpp"

namespace {

using namespace mbqc;
using io::json;

constexpr std::uint64_t kFallbackSeed = 1;
constexpr double kSampleTolerance = 0.05;
constexpr double kExactTolerance = 1e-9;
constexpr double kSignificance = 0.01;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MBQC_SEED")) {
    try {
      std::size_t pos = 0;
      const auto v = std::stoull(env, &pos);
      if (pos == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("MBQC_SEED must be a non-negative integer, got '") + env + "'");
  }
  return kFallbackSeed;
}

struct Common {
  std::size_t shots = 1024;
  std::optional<std::uint64_t> seed;
  std::string mode = "sample";
  std::string format = "text";
  std::string out;

  std::uint64_t resolved_seed() const { return seed ? *seed : default_seed(); }
};

void add_common(CLI::App* cmd, Common& c, bool with_mode) {
  cmd->add_option("--shots", c.shots, "Number of shots")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "RNG seed (default: $MBQC_SEED or 1)");
  if (with_mode) cmd->add_option("--mode", c.mode, "sample or exact")->check(CLI::IsMember({"sample", "exact"}));
  cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
  cmd->add_option("--out", c.out, "Write the report here instead of stdout");
}

// Input spec, highest input first like an output bitstring: "+1" puts the
// first input in |1> and the second in |+>.
std::vector<Qubit> parse_inputs(const std::string& spec, std::size_t count) {
  if (spec.size() != count) {
    throw UsageError("input spec '" + spec + "' must have one of 0 1 + - per input (" + std::to_string(count) + ")");
  }
  std::vector<Qubit> qubits(count);
  for (std::size_t k = 0; k < count; ++k) {
    switch (spec[count - 1 - k]) {
      case '0': qubits[k] = ket::zero; break;
      case '1': qubits[k] = ket::one; break;
      case '+': qubits[k] = ket::plus; break;
      case '-': qubits[k] = ket::minus; break;
      default: throw UsageError("input spec characters are 0, 1, + or -");
    }
  }
  return qubits;
}

std::vector<Basis> parse_bases(const std::string& spec, std::size_t count) {
  if (spec.size() != count) throw UsageError("basis spec '" + spec + "' must have one of z x per output");
  std::vector<Basis> bases(count);
  for (std::size_t k = 0; k < count; ++k) {
    const char c = spec[count - 1 - k];
    if (c != 'z' && c != 'x') throw UsageError("basis spec characters are z or x");
    bases[k] = c == 'x' ? Basis::X : Basis::Z;
  }
  return bases;
}

// Outcome distribution of a dense state under per-qubit readout bases.
std::vector<double> readout_distribution(StateVector state, const std::vector<Basis>& bases) {
  for (std::size_t k = 0; k < bases.size(); ++k) {
    if (bases[k] == Basis::X) state.h(k);
  }
  std::vector<double> p(state.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::norm(state[i]);
  return p;
}

void emit(const Common& c, const std::string& text, const json& report) {
  const std::string body = c.format == "json" ? report.dump(2) + "\n" : text;
  if (c.out.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw UsageError("cannot write " + c.out);
  f << body;
}

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << x;
  return s.str();
}

// Runs or enumerates a pattern and compares against `expected` when given.
int run_open_pattern(const OpenGraph& graph, const Flow& flow, const MeasurementPattern& pattern,
                     const InputState& input, const std::vector<Basis>& bases,
                     const std::optional<std::vector<double>>& expected, const Common& c, json report,
                     std::string header) {
  const std::size_t width = graph.outputs().size();
  RunOptions opt;
  opt.output_z_corrections = true;
  opt.readout = bases;
  bool passed = true;
  std::ostringstream text;
  text << header;
  if (c.mode == "exact") {
    const auto dist = exact_output_distribution(
        enumerate_branches(graph, flow, pattern, ClusterPrep{input, {}}, opt), bases);
    json probs = json::object();
    text << "exact output distribution\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
      probs[index_bits(i, width)] = dist[i];
      text << "  " << index_bits(i, width) << "  " << fixed(dist[i], 6) << '\n';
      if (expected) passed = passed && std::fabs(dist[i] - (*expected)[i]) <= kExactTolerance;
    }
    report["probabilities"] = probs;
  } else {
    ShotHistogram h;
    h.width = width;
    h.seed = c.resolved_seed();
    h.metadata["mode"] = "sample";
    for (std::size_t s = 0; s < c.shots; ++s) {
      RngStream rng = RngStream::for_shot(h.seed, s);
      h.add(format_bits(run_pattern(graph, flow, pattern, input, rng, opt).output_bits));
    }
    text << c.shots << " shots, seed " << h.seed << '\n';
    h.write_text(text);
    if (expected) {
      for (std::size_t i = 0; i < expected->size(); ++i) {
        passed = passed && std::fabs(h.frequency(index_bits(i, width)) - (*expected)[i]) <= kSampleTolerance;
      }
    }
    report["histogram"] = io::histogram_to_json(h);
  }
  if (expected) {
    json e = json::object();
    for (std::size_t i = 0; i < expected->size(); ++i) e[index_bits(i, width)] = (*expected)[i];
    report["expected"] = e;
    text << (passed ? "PASS" : "FAIL") << ": " << (c.mode == "exact" ? "exact" : "sampled")
         << " distribution vs reference\n";
  }
  report["passed"] = passed;
  emit(c, text.str(), report);
  return passed ? 0 : 1;
}

struct GadgetArgs {
  std::string name;
  std::string input;
  std::string basis;
  std::optional<double> theta;
  std::optional<int> theta_octants;
};

// Default scenarios: H and X on |0>, Z/T/RZ on |+> read in X, CZ on |1>|+>
// read Z then X.
void apply_gadget_defaults(GadgetArgs& a, std::size_t inputs) {
  const bool phase = a.name == "Z" || a.name == "T" || a.name == "RZ";
  if (a.input.empty()) a.input = a.name == "CZ" ? "+1" : phase ? "+" : std::string(inputs, '0');
  if (a.basis.empty()) a.basis = a.name == "CZ" ? "xz" : phase ? "x" : std::string(inputs, 'z');
}

int cmd_gadget(GadgetArgs a, const Common& c) {
  Angle theta = Angle::zero();
  if (a.theta_octants) theta = Angle::octants(*a.theta_octants);
  if (a.theta) theta = Angle::radians(*a.theta);
  const auto g = gadget(a.name, theta);
  apply_gadget_defaults(a, g.graph.inputs().size());
  const auto qubits = parse_inputs(a.input, g.graph.inputs().size());
  const auto bases = parse_bases(a.basis, g.graph.outputs().size());
  const auto input = InputState::product(qubits);

  StateVector reference = StateVector::from_amplitudes(input.amplitudes);
  apply_reference(g, reference);

  json report;
  report["command"] = "gadget";
  report["gadget"] = a.name;
  report["input"] = a.input;
  report["basis"] = a.basis;
  report["mode"] = c.mode;
  if (a.name == "RZ") report["theta"] = io::angle_to_json(theta);
  const std::string header = "gadget " + a.name + (a.name == "RZ" ? " theta=" + theta.to_string() : "") +
                             ", input " + a.input + ", basis " + a.basis + "\n";
  return run_open_pattern(g.graph, g.flow, g.pattern, input, bases, readout_distribution(reference, bases), c,
                          report, header);
}

int cmd_pattern(const std::string& path, std::string input_spec, std::string basis_spec, const Common& c) {
  const auto file = io::load_pattern(path);
  const auto& graph = file.graph;
  if (input_spec.empty()) input_spec = std::string(graph.inputs().size(), '+');
  if (basis_spec.empty()) basis_spec = std::string(graph.outputs().size(), 'z');
  const auto input = InputState::product(parse_inputs(input_spec, graph.inputs().size()));
  const auto bases = parse_bases(basis_spec, graph.outputs().size());
  json report;
  report["command"] = "pattern";
  report["file"] = path;
  report["input"] = input_spec;
  report["basis"] = basis_spec;
  report["mode"] = c.mode;
  return run_open_pattern(graph, file.flow, file.pattern, input, bases, std::nullopt, c, report,
                          "pattern " + path + ", input " + input_spec + ", basis " + basis_spec + "\n");
}

int cmd_grover(const std::string& oracle_text, const Common& c) {
  const auto oracle = grover::Oracle::parse(oracle_text);
  if (c.mode == "exact") {
    throw UsageError("exact mode supports at most " + std::to_string(kMaxExactMeasurements) +
                     " measured qubits; the Grover pattern measures 16");
  }
  const auto h = grover::run(oracle, c.shots, c.resolved_seed());
  const bool passed = h.count(oracle.str()) == h.shots;
  std::ostringstream text;
  text << "grover oracle " << oracle.str() << ", " << h.shots << " shots, seed " << h.seed << '\n';
  h.write_text(text);
  text << (passed ? "PASS" : "FAIL") << ": marked string frequency " << fixed(h.frequency(oracle.str()), 4) << '\n';
  json report;
  report["command"] = "grover";
  report["histogram"] = io::histogram_to_json(h);
  report["passed"] = passed;
  emit(c, text.str(), report);
  return passed ? 0 : 1;
}

struct UbqcArgs {
  std::string oracle;
  std::string view = "both";
  std::string protocol = "faithful";
  std::string transcript;
};

int cmd_ubqc(const UbqcArgs& a, const Common& c) {
  const auto oracle = grover::Oracle::parse(a.oracle);
  if (c.mode == "exact") throw UsageError("exact mode is not available for UBQC runs");
  ubqc::Options opt;
  opt.mode = a.protocol == "replica" ? ubqc::Mode::replica : ubqc::Mode::faithful;
  opt.keep_transcripts = !a.transcript.empty();
  const auto r = ubqc::run(oracle, c.shots, c.resolved_seed(), opt);

  const bool show_client = a.view != "server";
  const bool show_server = a.view != "client";
  const bool client_ok = r.client.count(oracle.str()) == r.client.shots;
  const auto chi = chi_square_uniform(r.server.dense_counts());
  const bool server_ok = chi.p_value > kSignificance;
  const bool passed = (!show_client || client_ok) && (!show_server || server_ok);

  std::ostringstream text;
  text << "ubqc oracle " << oracle.str() << " (" << a.protocol << "), " << c.shots << " shots, seed "
       << r.client.seed << '\n';
  json report;
  report["command"] = "ubqc";
  report["protocol"] = a.protocol;
  report["view"] = a.view;
  if (show_client) {
    text << "client view\n";
    r.client.write_text(text);
    text << (client_ok ? "PASS" : "FAIL") << ": client output is the marked string\n";
    report["client"] = io::histogram_to_json(r.client);
  }
  if (show_server) {
    text << "server view\n";
    r.server.write_text(text);
    text << (server_ok ? "PASS" : "FAIL") << ": chi-square uniformity statistic " << fixed(chi.statistic, 4)
         << ", p = " << fixed(chi.p_value, 4) << '\n';
    json s = io::histogram_to_json(r.server);
    s["chi_square"] = {{"statistic", chi.statistic}, {"dof", chi.dof}, {"p_value", chi.p_value}};
    report["server"] = s;
  }
  if (!a.transcript.empty()) {
    json sessions = json::array();
    for (const auto& t : r.transcripts) sessions.push_back(io::transcript_to_json(t));
    std::ofstream f(a.transcript);
    if (!f) throw UsageError("cannot write " + a.transcript);
    f << sessions.dump(2) << '\n';
    text << "transcripts written to " << a.transcript << '\n';
    report["transcript"] = a.transcript;
  }
  report["passed"] = passed;
  emit(c, text.str(), report);
  return passed ? 0 : 1;
}

int cmd_selftest(bool disable_corrections, const Common& c) {
  verify::SelftestOptions opt;
  opt.disable_corrections = disable_corrections;
  if (c.seed) opt.seed = *c.seed;
  const auto checks = verify::run_selftest(opt);
  bool passed = true;
  std::ostringstream text;
  json list = json::array();
  for (const auto& check : checks) {
    passed = passed && check.passed;
    text << (check.passed ? "PASS" : "FAIL") << "  " << std::left << std::setw(32) << check.name << check.detail
         << '\n';
    list.push_back({{"name", check.name}, {"passed", check.passed}, {"detail", check.detail}});
  }
  json report;
  report["command"] = "selftest";
  report["checks"] = list;
  report["passed"] = passed;
  emit(c, text.str(), report);
  return passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-based quantum computation simulator"};
  app.require_subcommand(1);

  Common gadget_common, grover_common, ubqc_common, selftest_common, pattern_common;

  GadgetArgs gadget_args;
  auto* gadget_cmd = app.add_subcommand("gadget", "Run one gate gadget against its dense reference");
  gadget_cmd->add_option("name", gadget_args.name, "H, X, Z, T, RZ or CZ")->required();
  gadget_cmd->add_option("--input", gadget_args.input, "Input states, highest input first (0 1 + -)");
  gadget_cmd->add_option("--basis", gadget_args.basis, "Readout bases, highest output first (z x)");
  auto* theta = gadget_cmd->add_option("--theta", gadget_args.theta, "RZ angle in radians");
  gadget_cmd->add_option("--theta-octants", gadget_args.theta_octants, "RZ angle in units of pi/4")->excludes(theta);
  add_common(gadget_cmd, gadget_common, true);

  std::string grover_oracle;
  auto* grover_cmd = app.add_subcommand("grover", "Two-qubit Grover search on the 18-node grid");
  grover_cmd->add_option("--oracle", grover_oracle, "Marked string: 00, 01, 10 or 11")->required();
  add_common(grover_cmd, grover_common, true);

  UbqcArgs ubqc_args;
  auto* ubqc_cmd = app.add_subcommand("ubqc", "Blind Grover run between a client and a server");
  ubqc_cmd->add_option("--oracle", ubqc_args.oracle, "Marked string: 00, 01, 10 or 11")->required();
  ubqc_cmd->add_option("--view", ubqc_args.view, "client, server or both")
      ->check(CLI::IsMember({"client", "server", "both"}));
  ubqc_cmd->add_option("--protocol", ubqc_args.protocol, "faithful or replica")
      ->check(CLI::IsMember({"faithful", "replica"}));
  ubqc_cmd->add_option("--transcript", ubqc_args.transcript, "Write per-shot transcripts (JSON) here");
  add_common(ubqc_cmd, ubqc_common, true);

  bool disable_corrections = false;
  auto* selftest_cmd = app.add_subcommand("selftest", "Run the invariant suite");
  selftest_cmd->add_flag("--debug-disable-corrections", disable_corrections)->group("");
  selftest_cmd->add_option("--seed", selftest_common.seed, "RNG seed");
  selftest_cmd->add_option("--format", selftest_common.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  selftest_cmd->add_option("--out", selftest_common.out, "Write the report here instead of stdout");

  std::string pattern_path, pattern_input, pattern_basis;
  auto* pattern_cmd = app.add_subcommand("pattern", "Run a measurement pattern from a JSON file");
  pattern_cmd->add_option("file", pattern_path, "Pattern file")->required();
  pattern_cmd->add_option("--input", pattern_input, "Input states, highest input first (default all +)");
  pattern_cmd->add_option("--basis", pattern_basis, "Readout bases, highest output first (default all z)");
  add_common(pattern_cmd, pattern_common, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gadget_cmd) return cmd_gadget(gadget_args, gadget_common);
    if (*grover_cmd) return cmd_grover(grover_oracle, grover_common);
    if (*ubqc_cmd) return cmd_ubqc(ubqc_args, ubqc_common);
    if (*selftest_cmd) return cmd_selftest(disable_corrections, selftest_common);
    if (*pattern_cmd) return cmd_pattern(pattern_path, pattern_input, pattern_basis, pattern_common);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
