#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "mbqc/errors.hpp"

namespace mbqc {

// Renders outcome bits with the last element first, e.g. {q16, q17} ->
// "q17 q16". Matches the usual big-endian display of classical registers.
inline std::string format_bits(std::span<const int> bits) {
  std::string s;
  s.reserve(bits.size());
  for (std::size_t k = bits.size(); k-- > 0;) s.push_back(bits[k] ? '1' : '0');
  return s;
}

// Bitstring for basis index `index` over `width` bits (little-endian index).
inline std::string index_bits(std::size_t index, std::size_t width) {
  std::string s(width, '0');
  for (std::size_t k = 0; k < width; ++k) {
    if ((index >> k) & 1U) s[width - 1 - k] = '1';
  }
  return s;
}

struct ShotHistogram {
  std::size_t width = 0;  // bits per outcome
  std::map<std::string, std::size_t> counts;
  std::size_t shots = 0;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> metadata;

  void add(const std::string& outcome, std::size_t n = 1) {
    if (outcome.size() != width) throw SizeError("outcome '" + outcome + "' has the wrong width");
    counts[outcome] += n;
    shots += n;
  }

  std::size_t count(const std::string& outcome) const {
    const auto it = counts.find(outcome);
    return it == counts.end() ? 0 : it->second;
  }

  double frequency(const std::string& outcome) const {
    return shots == 0 ? 0.0 : static_cast<double>(count(outcome)) / static_cast<double>(shots);
  }

  // Counts for every outcome of the given width, including zeros, in
  // ascending bitstring order.
  std::vector<std::size_t> dense_counts() const {
    std::vector<std::size_t> out(std::size_t{1} << width, 0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = count(index_bits(i, width));
    return out;
  }

  // Descending count, ties broken by bitstring.
  std::vector<std::pair<std::string, std::size_t>> sorted() const {
    std::vector<std::pair<std::string, std::size_t>> rows(counts.begin(), counts.end());
    std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    return rows;
  }

  void write_text(std::ostream& out) const {
    for (const auto& [bits, n] : sorted()) {
      out << "  " << bits << "  " << std::setw(8) << n << "  " << std::fixed << std::setprecision(4)
          << frequency(bits) << '\n';
    }
    out << std::defaultfloat;
  }

  friend bool operator==(const ShotHistogram&, const ShotHistogram&) = default;
};

struct ChiSquare {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 1.0;
};

// Pearson goodness-of-fit against the uniform distribution over all bins.
inline ChiSquare chi_square_uniform(std::span<const std::size_t> counts) {
  if (counts.size() < 2) throw UsageError("chi-square needs at least two bins");
  double total = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  if (total <= 0.0) throw UsageError("chi-square needs at least one observation");
  const double expected = total / static_cast<double>(counts.size());
  ChiSquare result;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    result.statistic += d * d / expected;
  }
  result.dof = counts.size() - 1;
  const boost::math::chi_squared dist(static_cast<double>(result.dof));
  result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
  return result;
}

}  // namespace mbqc
