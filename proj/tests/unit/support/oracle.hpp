#pragma once

// Test-side reference implementations, deliberately written as plain loops so
// they stay independent of the counting paths they are used to check.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace test_oracle {

using BigInt = boost::multiprecision::cpp_int;

inline bool inside(double s, double x) {
  if (s <= x) return true;
  const double scale = std::max({1.0, std::fabs(s), std::fabs(x)});
  return s - x <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

/// Full-box count of { u in Z^k : sum diag_i u_i^2 <= x }.
inline BigInt brute_force_count(const std::vector<double>& diag, double x,
                                bool include_origin = true) {
  const std::size_t k = diag.size();
  std::vector<std::int64_t> hi(k), u(k);
  for (std::size_t i = 0; i < k; ++i) {
    hi[i] = static_cast<std::int64_t>(std::floor(std::sqrt(x / diag[i]))) + 1;
    u[i] = -hi[i];
  }
  BigInt count = 0;
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      s += diag[i] * static_cast<double>(u[i]) * static_cast<double>(u[i]);
    if (inside(s, x)) ++count;
    std::size_t level = 0;
    while (level < k && ++u[level] > hi[level]) {
      u[level] = -hi[level];
      ++level;
    }
    if (level == k) break;
  }
  if (!include_origin) count -= 1;
  return count;
}

/// Sorted positive form values up to cutoff, with multiplicity.
inline std::vector<double> brute_force_spectrum(const std::vector<double>& diag,
                                                double cutoff) {
  const std::size_t k = diag.size();
  std::vector<std::int64_t> hi(k), u(k);
  for (std::size_t i = 0; i < k; ++i) {
    hi[i] = static_cast<std::int64_t>(std::floor(std::sqrt(cutoff / diag[i]))) + 1;
    u[i] = -hi[i];
  }
  std::vector<double> vals;
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      s += diag[i] * static_cast<double>(u[i]) * static_cast<double>(u[i]);
    if (s > 0.0 && inside(s, cutoff)) vals.push_back(s);
    std::size_t level = 0;
    while (level < k && ++u[level] > hi[level]) {
      u[level] = -hi[level];
      ++level;
    }
    if (level == k) break;
  }
  std::sort(vals.begin(), vals.end());
  return vals;
}

/// Deterministic uniform doubles (engine-independent mapping).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bull) {}
  std::uint64_t next() {
    // xorshift64*
    state_ ^= state_ >> 12;
    state_ ^= state_ << 25;
    state_ ^= state_ >> 27;
    return state_ * 0x2545f4914f6cdd1dull;
  }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

 private:
  std::uint64_t state_;
};

}  // namespace test_oracle
