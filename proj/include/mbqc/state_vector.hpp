#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbqc/angle.hpp"
#include "mbqc/errors.hpp"

namespace mbqc {

using amplitude = std::complex<double>;

// Single-qubit state (amplitude of |0>, amplitude of |1>).
using Qubit = std::array<amplitude, 2>;

inline constexpr std::size_t kMaxQubits = 24;
inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kAmplitudeTolerance = 1e-9;

namespace ket {
inline constexpr double kInvSqrt2 = std::numbers::sqrt2 / 2.0;
inline const Qubit zero{amplitude{1.0, 0.0}, amplitude{0.0, 0.0}};
inline const Qubit one{amplitude{0.0, 0.0}, amplitude{1.0, 0.0}};
inline const Qubit plus{amplitude{kInvSqrt2, 0.0}, amplitude{kInvSqrt2, 0.0}};
inline const Qubit minus{amplitude{kInvSqrt2, 0.0}, amplitude{-kInvSqrt2, 0.0}};

// |+_theta> = (|0> + e^{i theta}|1>) / sqrt(2)
inline Qubit plus_at(const Angle& theta) { return {amplitude{kInvSqrt2, 0.0}, kInvSqrt2 * theta.phase()}; }
}  // namespace ket

// Dense state vector. Qubit i is bit i of the basis-state index
// (little-endian). RZ(theta) is diag(1, e^{i theta}); global phases are
// never observable through this interface.
//
// Besides the fixed-width gate kernels, the register can grow
// (append_qubit) and shrink (discard_qubit) so that pattern executors can
// keep only the live part of a cluster state in memory.
class StateVector {
 public:
  explicit StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits == 0 || num_qubits > kMaxQubits) {
      throw SizeError("qubit count must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                      std::to_string(num_qubits));
    }
    amps_.assign(std::size_t{1} << num_qubits, amplitude{0.0, 0.0});
    amps_[0] = 1.0;
  }

  // Zero-qubit register holding the scalar 1.
  static StateVector empty() { return StateVector(); }

  static StateVector from_amplitudes(std::vector<amplitude> amps) {
    const std::size_t size = amps.size();
    if (size == 0 || (size & (size - 1)) != 0) {
      throw SizeError("amplitude count must be a power of two, got " + std::to_string(size));
    }
    const auto n = static_cast<std::size_t>(std::countr_zero(size));
    if (n > kMaxQubits) throw SizeError("more than " + std::to_string(kMaxQubits) + " qubits");
    StateVector s;
    s.num_qubits_ = n;
    s.amps_ = std::move(amps);
    if (std::fabs(s.norm() - 1.0) > kNormTolerance) {
      throw SizeError("amplitudes are not normalized");
    }
    return s;
  }

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t size() const { return amps_.size(); }
  std::span<const amplitude> amplitudes() const { return amps_; }
  const amplitude& operator[](std::size_t index) const { return amps_[index]; }

  double norm() const {
    double total = 0.0;
    for (const auto& a : amps_) total += std::norm(a);
    return total;
  }

  void h(std::size_t q) {
    check_qubit(q);
    constexpr double r = ket::kInvSqrt2;
    for_each_pair(q, [r](amplitude& a0, amplitude& a1) {
      const amplitude t0 = a0;
      a0 = r * (t0 + a1);
      a1 = r * (t0 - a1);
    });
  }

  void x(std::size_t q) {
    check_qubit(q);
    for_each_pair(q, [](amplitude& a0, amplitude& a1) { std::swap(a0, a1); });
  }

  void z(std::size_t q) {
    check_qubit(q);
    for_each_pair(q, [](amplitude&, amplitude& a1) { a1 = -a1; });
  }

  void rz(std::size_t q, const Angle& theta) {
    check_qubit(q);
    if (theta.is_octant() && theta.octant() == 0) return;
    const amplitude phase = theta.phase();
    for_each_pair(q, [phase](amplitude&, amplitude& a1) { a1 *= phase; });
  }

  void cz(std::size_t a, std::size_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw IndexError("CZ targets must be distinct");
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & mask) == mask) amps_[i] = -amps_[i];
    }
  }

  double probability_of_zero(std::size_t q) const {
    check_qubit(q);
    const std::size_t stride = std::size_t{1} << q;
    double p0 = 0.0;
    for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) p0 += std::norm(amps_[i]);
    }
    return p0;
  }

  // Projects qubit q onto |bit> and renormalizes. Returns the probability
  // the outcome had before projection.
  double project(std::size_t q, int bit) {
    check_qubit(q);
    const double p0 = probability_of_zero(q);
    const double p = bit == 0 ? p0 : 1.0 - p0;
    if (p <= 0.0) throw StateError("projection onto a zero-probability outcome");
    const double scale = 1.0 / std::sqrt(p);
    for_each_pair(q, [bit, scale](amplitude& a0, amplitude& a1) {
      if (bit == 0) {
        a0 *= scale;
        a1 = 0.0;
      } else {
        a0 = 0.0;
        a1 *= scale;
      }
    });
    return p;
  }

  // Born-rule sample driven by a caller-supplied uniform u in [0, 1):
  // outcome 0 iff u < P(0). Collapses the state.
  int measure(std::size_t q, double u) {
    const double p0 = probability_of_zero(q);
    const int bit = u < p0 ? 0 : 1;
    project(q, bit);
    return bit;
  }

  // Tensors a new qubit in as the most significant bit. Returns its index.
  std::size_t append_qubit(const Qubit& q) {
    if (num_qubits_ + 1 > kMaxQubits) throw SizeError("register full");
    const std::size_t half = amps_.size();
    amps_.resize(2 * half);
    for (std::size_t i = 0; i < half; ++i) {
      amps_[half + i] = amps_[i] * q[1];
      amps_[i] *= q[0];
    }
    return num_qubits_++;
  }

  void swap_qubits(std::size_t a, std::size_t b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) return;
    const std::size_t ma = std::size_t{1} << a;
    const std::size_t mb = std::size_t{1} << b;
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & ma) && !(i & mb)) std::swap(amps_[i], amps_[(i ^ ma) | mb]);
    }
  }

  // Removes qubit q, which must be in a computational basis state. The
  // qubit previously at index num_qubits() - 1 takes index q.
  void discard_qubit(std::size_t q) {
    check_qubit(q);
    const double p0 = probability_of_zero(q);
    int bit;
    if (p0 > 1.0 - kNormTolerance) {
      bit = 0;
    } else if (p0 < kNormTolerance) {
      bit = 1;
    } else {
      throw StateError("cannot discard qubit " + std::to_string(q) + ": not in a basis state");
    }
    const std::size_t last = num_qubits_ - 1;
    swap_qubits(q, last);
    const std::size_t half = amps_.size() / 2;
    if (bit == 1) {
      std::copy(amps_.begin() + static_cast<std::ptrdiff_t>(half), amps_.end(), amps_.begin());
    }
    amps_.resize(half);
    --num_qubits_;
  }

  // One line per basis index: `index bitstring re im`, bitstring written
  // with the highest qubit first.
  void write_text(std::ostream& out) const {
    out << std::setprecision(17);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      std::string bits(num_qubits_, '0');
      for (std::size_t q = 0; q < num_qubits_; ++q) {
        if ((i >> q) & 1U) bits[num_qubits_ - 1 - q] = '1';
      }
      out << i << ' ' << bits << ' ' << amps_[i].real() << ' ' << amps_[i].imag() << '\n';
    }
  }

 private:
  StateVector() : num_qubits_(0), amps_{amplitude{1.0, 0.0}} {}

  void check_qubit(std::size_t q) const {
    if (q >= num_qubits_) {
      throw IndexError("qubit " + std::to_string(q) + " out of range for " + std::to_string(num_qubits_) +
                       "-qubit state");
    }
  }

  // Visits (a0, a1) for every index pair differing only in bit q.
  template <typename Fn>
  void for_each_pair(std::size_t q, Fn&& fn) {
    const std::size_t stride = std::size_t{1} << q;
    for (std::size_t base = 0; base < amps_.size(); base += 2 * stride) {
      for (std::size_t i = base; i < base + stride; ++i) fn(amps_[i], amps_[i + stride]);
    }
  }

  std::size_t num_qubits_;
  std::vector<amplitude> amps_;
};

inline StateVector new_state(std::size_t num_qubits) { return StateVector(num_qubits); }

// |<a|b>|^2
inline double fidelity(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw SizeError("fidelity of states with different qubit counts");
  amplitude overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::norm(overlap);
}

}  // namespace mbqc
