#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace ellipsoid_entropy::detail {

/// Neumaier-compensated accumulator.
class NeumaierSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::fabs(sum_) >= std::fabs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// Compensated running prefix (sum, compensation) passed by value down a
/// recursion; value-semantic so sibling branches never see each other's state.
struct PrefixSum {
  double sum = 0.0;
  double comp = 0.0;
  PrefixSum add(double v) const {
    PrefixSum r = *this;
    const double t = r.sum + v;
    if (std::fabs(r.sum) >= std::fabs(v)) {
      r.comp += (r.sum - t) + v;
    } else {
      r.comp += (v - t) + r.sum;
    }
    r.sum = t;
    return r;
  }
  double value() const { return sum + comp; }
};

/// Membership rule s <= x, with ties within 4 ulp counting as inside.
inline bool tie_leq(double s, double x) {
  if (s <= x) return true;
  const double scale = std::max({1.0, std::fabs(s), std::fabs(x)});
  return s - x <= 4.0 * std::numeric_limits<double>::epsilon() * scale;
}

/// Tolerance used when comparing against a threshold x.
inline double tie_tolerance(double x) {
  return 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(x));
}

/// Snap q to the nearest integer when it is within 4 ulp of one.
inline double snap_to_integer(double q) {
  const double r = std::nearbyint(q);
  if (std::fabs(q - r) <=
      4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(q))) {
    return r;
  }
  return q;
}

inline double logsumexp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : xs) m = std::max(m, v);
  if (!std::isfinite(m)) return m;  // all -inf, or an inf/nan dominates
  NeumaierSum s;
  for (double v : xs) s.add(std::exp(v - m));
  return m + std::log(s.value());
}

/// Binomial coefficients C(n,0..n). Exact Pascal additions up to n = 60,
/// log-gamma based beyond (values there exceed 2^53 anyway).
inline std::vector<double> binomial_row(int n) {
  if (n < 0) throw std::invalid_argument("binomial_row: negative order");
  std::vector<double> row(static_cast<std::size_t>(n) + 1, 1.0);
  if (n <= 60) {
    for (int i = 1; i <= n; ++i) {
      for (int j = i - 1; j >= 1; --j) row[j] += row[j - 1];
      // row holds C(i, .) after pass i
    }
  } else {
    for (int j = 1; j < n; ++j) {
      row[j] = std::exp(std::lgamma(n + 1.0) - std::lgamma(j + 1.0) -
                        std::lgamma(n - j + 1.0));
    }
  }
  return row;
}

struct RationalApprox {
  bool ok = false;
  std::int64_t num = 0;
  std::int64_t den = 1;
};

/// Best continued-fraction approximation p/q of v with q <= max_den,
/// accepted only when it reproduces v to rel_tol.
inline RationalApprox rationalize(double v, std::int64_t max_den = 1'000'000,
                                  double rel_tol = 1e-9) {
  RationalApprox out;
  if (!std::isfinite(v) || v <= 0.0) return out;
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int it = 0; it < 64; ++it) {
    const double fl = std::floor(frac);
    if (fl > 9e17) return out;
    const auto a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (q2 > max_den || p2 < 0 || q2 < 0) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double rem = frac - fl;
    if (rem < 1e-15) break;
    frac = 1.0 / rem;
  }
  if (q1 == 0) return out;
  const double approx = static_cast<double>(p1) / static_cast<double>(q1);
  if (std::fabs(approx - v) <= rel_tol * std::max(1.0, std::fabs(v))) {
    out.ok = true;
    out.num = p1;
    out.den = q1;
  }
  return out;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  while (b != 0) {
    const std::int64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

}  // namespace ellipsoid_entropy::detail
