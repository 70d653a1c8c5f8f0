#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>

#include "mbqc/errors.hpp"

namespace mbqc {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kAngleTolerance = 1e-12;

// An angle on the unit circle. Multiples of pi/4 are kept as an exact octant
// index so that sums, negations and pi-shifts of octants never round.
class Angle {
 public:
  constexpr Angle() = default;

  static constexpr Angle octants(int k) { return Angle(std::in_place_index<0>, ((k % 8) + 8) % 8); }

  static Angle radians(double x) { return Angle(std::in_place_index<1>, canonical(x)); }

  static constexpr Angle zero() { return octants(0); }
  static constexpr Angle pi() { return octants(4); }

  constexpr bool is_octant() const { return std::holds_alternative<int>(value_); }

  int octant() const {
    if (!is_octant()) {
      throw UsageError("angle " + to_string() + " is not an exact multiple of pi/4");
    }
    return std::get<int>(value_);
  }

  // Value in [0, 2pi).
  double radians() const {
    if (is_octant()) return std::get<int>(value_) * (kPi / 4.0);
    return std::get<double>(value_);
  }

  Angle operator-() const {
    if (is_octant()) return octants(-std::get<int>(value_));
    return radians(-std::get<double>(value_));
  }

  friend Angle operator+(const Angle& a, const Angle& b) {
    if (a.is_octant() && b.is_octant()) {
      return octants(std::get<int>(a.value_) + std::get<int>(b.value_));
    }
    return radians(a.radians() + b.radians());
  }

  friend Angle operator-(const Angle& a, const Angle& b) { return a + (-b); }

  Angle plus_pi() const { return *this + pi(); }

  // e^{i * angle}; exact table lookup for octants.
  std::complex<double> phase() const {
    if (is_octant()) {
      static constexpr double r = std::numbers::sqrt2 / 2.0;
      static const std::complex<double> table[8] = {
          {1.0, 0.0}, {r, r}, {0.0, 1.0}, {-r, r}, {-1.0, 0.0}, {-r, -r}, {0.0, -1.0}, {r, -r}};
      return table[std::get<int>(value_)];
    }
    return std::polar(1.0, std::get<double>(value_));
  }

  // Equality on the circle within kAngleTolerance.
  friend bool operator==(const Angle& a, const Angle& b) {
    if (a.is_octant() && b.is_octant()) return a.value_ == b.value_;
    double d = std::fabs(a.radians() - b.radians());
    d = std::fmin(d, kTwoPi - d);
    return d < kAngleTolerance;
  }

  std::string to_string() const {
    std::ostringstream out;
    if (is_octant()) {
      out << std::get<int>(value_) << "pi/4";
    } else {
      out << std::get<double>(value_) << "rad";
    }
    return out.str();
  }

 private:
  template <std::size_t I, typename T>
  constexpr Angle(std::in_place_index_t<I> tag, T v) : value_(tag, v) {}

  static double canonical(double x) {
    if (!std::isfinite(x)) throw UsageError("angle must be finite");
    double y = std::fmod(x, kTwoPi);
    if (y < 0.0) y += kTwoPi;
    if (y >= kTwoPi) y = 0.0;
    return y;
  }

  std::variant<int, double> value_{0};
};

}  // namespace mbqc
