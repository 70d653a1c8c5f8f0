#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"
#include "mbqc/rng.hpp"
#include "mbqc/state_vector.hpp"

namespace mbqc {

enum class GateKind { H, X, Z, RZ, CZ };

struct Gate {
  GateKind kind = GateKind::H;
  Angle angle{};  // RZ only

  static Gate h() { return {GateKind::H, {}}; }
  static Gate x() { return {GateKind::X, {}}; }
  static Gate z() { return {GateKind::Z, {}}; }
  static Gate rz(Angle theta) { return {GateKind::RZ, theta}; }
  static Gate cz() { return {GateKind::CZ, {}}; }

  std::size_t arity() const { return kind == GateKind::CZ ? 2 : 1; }
};

inline void apply_gate(StateVector& state, const Gate& gate, std::size_t target) {
  switch (gate.kind) {
    case GateKind::H: state.h(target); break;
    case GateKind::X: state.x(target); break;
    case GateKind::Z: state.z(target); break;
    case GateKind::RZ: state.rz(target, gate.angle); break;
    case GateKind::CZ: throw IndexError("CZ needs two targets");
  }
}

inline void apply_gate(StateVector& state, const Gate& gate, std::size_t a, std::size_t b) {
  if (gate.kind != GateKind::CZ) throw IndexError("single-qubit gate given two targets");
  state.cz(a, b);
}

// Classical register: one outcome slot per qubit, readable once written.
class ClassicalBits {
 public:
  ClassicalBits() = default;
  explicit ClassicalBits(std::size_t size) : outcomes_(size, 0), measured_(size, 0) {}

  std::size_t size() const { return outcomes_.size(); }

  bool measured(std::size_t i) const {
    check(i);
    return measured_[i] != 0;
  }

  int get(std::size_t i) const {
    check(i);
    if (!measured_[i]) throw StateError("classical bit " + std::to_string(i) + " read before measurement");
    return outcomes_[i];
  }

  void record(std::size_t i, int bit) {
    check(i);
    outcomes_[i] = static_cast<std::uint8_t>(bit & 1);
    measured_[i] = 1;
  }

  // XOR parity of the listed bits; every one must be measured.
  int parity(const std::vector<std::size_t>& indices) const {
    int p = 0;
    for (auto j : indices) p ^= get(j);
    return p;
  }

  friend bool operator==(const ClassicalBits&, const ClassicalBits&) = default;

 private:
  void check(std::size_t i) const {
    if (i >= outcomes_.size()) throw IndexError("classical bit " + std::to_string(i) + " out of range");
  }

  std::vector<std::uint8_t> outcomes_;
  std::vector<std::uint8_t> measured_;
};

enum class Remeasure { forbid, allow };

// Z-basis measurement with collapse; the outcome is written to bits[qubit].
inline int measure_z(StateVector& state, std::size_t qubit, RngStream& rng, ClassicalBits& bits,
                     Remeasure remeasure = Remeasure::forbid) {
  if (qubit >= state.num_qubits()) throw IndexError("qubit " + std::to_string(qubit) + " out of range");
  if (remeasure == Remeasure::forbid && bits.measured(qubit)) {
    throw StateError("qubit " + std::to_string(qubit) + " already measured");
  }
  const int bit = state.measure(qubit, rng.uniform());
  bits.record(qubit, bit);
  return bit;
}

// Applies an X or Z to target iff the recorded bit `control` is 1.
inline void apply_conditional(StateVector& state, const Gate& gate, std::size_t target, std::size_t control,
                              const ClassicalBits& bits) {
  if (gate.kind != GateKind::X && gate.kind != GateKind::Z) {
    throw UsageError("conditional gates are X or Z");
  }
  if (bits.get(control) == 1) apply_gate(state, gate, target);
}

inline double probability_of_zero(const StateVector& state, std::size_t qubit) {
  return state.probability_of_zero(qubit);
}

}  // namespace mbqc
