#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ellipsoid_entropy::codec {

/// Per-coordinate quantization precisions eps_1..eps_k (all > 0), with an
/// optional declared balance constant C >= 1 under which
///   (1/C) eps_total/k <= eps_i <= C eps_total/k   for all i.
class PrecisionProfile {
 public:
  PrecisionProfile() = default;
  explicit PrecisionProfile(std::vector<double> eps,
                            std::optional<double> balance_c = std::nullopt);

  const std::vector<double>& eps() const { return eps_; }
  int dimension() const { return static_cast<int>(eps_.size()); }
  std::optional<double> balance_c() const { return balance_c_; }

  double total() const;  // sum of eps_i
  double geom() const;   // (prod eps_i)^{1/k}

  /// Smallest C >= 1 for which the profile is balanced.
  double min_balance_constant() const;

 private:
  std::vector<double> eps_;
  std::optional<double> balance_c_;
};

struct CodeVector {
  std::vector<std::int64_t> u;
  PrecisionProfile profile;
};

/// Axis-parallel recovery parallelepiped; side i has length eps_i.
/// Positive-side coordinates are half-open [lo, hi), negative-side ones are
/// (lo, hi] so that exact negative multiples of eps_i round-trip.
struct RecoveryBox {
  std::vector<double> lo;
  std::vector<double> hi;
  bool contains(std::span<const double> f) const;
};

/// f(i) = g(i) - g(i-1) for i = 1..k, from g indexed 0..k with g(0) = 0.
/// (The forward differences g(i+1) - g(i), i = 0..k-1, re-indexed to 1..k.)
std::vector<double> forward_difference(std::span<const double> g);

/// Sum of squares; the energy-constraint membership test is energy(f) <= R^2.
double energy(std::span<const double> f);

/// Round each coordinate toward zero in units of eps_i:
///   u_i = floor(f_i/eps_i) for f_i >= 0, u_i = ceil(f_i/eps_i) for f_i < 0.
/// Quotients within 4 ulp of an integer are snapped to it first, so codes are
/// stable under benign rounding of the inputs. -0.0 takes the floor branch.
CodeVector quantize(std::span<const double> f, const PrecisionProfile& p);

/// Box containing every signal that quantizes to u:
///   [u eps, (u+1) eps) for u_i >= 0,  ((u-1) eps, u eps] for u_i < 0.
RecoveryBox recovery_box(const CodeVector& code);

}  // namespace ellipsoid_entropy::codec
