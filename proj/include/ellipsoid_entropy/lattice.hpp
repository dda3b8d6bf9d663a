#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ellipsoid_entropy/codec.hpp"

namespace ellipsoid_entropy::lattice {

using BigInt = boost::multiprecision::cpp_int;

/// Thrown when an instance exceeds the configured enumeration budget.
struct BudgetExceeded : std::runtime_error {
  explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

enum class FormKind { primal, dual };

/// Diagonal positive-definite quadratic form sum_i diag_i u_i^2.
/// Primal entries are eps_i^2, dual entries eps_i^{-2}.
struct DiagonalForm {
  std::vector<double> diag;
  FormKind kind = FormKind::primal;

  int dimension() const { return static_cast<int>(diag.size()); }
  double det() const;
  DiagonalForm dual_form() const;  // entrywise reciprocal, kind flipped

  static DiagonalForm primal(const codec::PrecisionProfile& p);
  static DiagonalForm dual(const codec::PrecisionProfile& p);
};

enum class CountScheme { automatic, recursive, dynamic_programming };

struct CountOptions {
  CountScheme scheme = CountScheme::automatic;
  std::uint64_t node_budget = 10'000'000;       // recursion nodes
  std::uint64_t dp_cell_budget = 100'000'000;   // k * (scaled threshold + 1)
  int threads = 0;                              // 0: ELLIPSOID_ENTROPY_THREADS / hw
};

struct CountResult {
  BigInt count;
  bool includes_origin = true;
  CountScheme scheme_used = CountScheme::recursive;
  std::uint64_t work = 0;  // nodes visited (recursion) or cells filled (DP)
};

/// Exact number of u in Z^k with sum_i diag_i u_i^2 <= x.
/// Ties within 4 ulp of x count as inside. The origin is included iff
/// include_origin. Pruned coordinate recursion by default; an exact
/// integerized dynamic program when the inputs are commensurate rationals and
/// the DP is the cheaper scheme.
CountResult count_points(const DiagonalForm& form, double x, bool include_origin,
                         const CountOptions& opts = {});

struct BoxBound {
  BigInt exact;    // prod_i (2 floor(sqrt(x) eps_i) + 1)
  double relaxed;  // prod_i (2 sqrt(x) eps_i + 1)
};

/// Integer-point count of the bounding box of the dual ellipsoid
/// {sum eps_i^{-2} u_i^2 <= x}, and its floor-free relaxation.
BoxBound box_bound(std::span<const double> eps, double x);

/// Sorted positive values of a form on Z^k up to a cutoff, with multiplicity.
/// Values within 1e-12 (relative) of each other share one key.
struct Spectrum {
  int dimension = 0;
  double cutoff = 0.0;
  std::vector<double> values;

  /// Counting function at x: number of values <= x (tie-tolerant).
  /// Equals B(x) for a primal spectrum and G(x) for a dual one.
  std::size_t count_at(double x) const;

  /// n-th smallest value, 1-based (lambda_n / l_n).
  double value_at(std::size_t n) const;

  /// Distinct (value, multiplicity) pairs.
  std::vector<std::pair<double, std::size_t>> grouped() const;
};

/// Exact multiset of positive form values <= cutoff. Throws BudgetExceeded
/// when the instance holds more than point_budget lattice points.
Spectrum spectrum(const DiagonalForm& form, double cutoff,
                  std::uint64_t point_budget = 10'000'000);

/// Smoothed counting function of order rho:
///   (1/rho!) sum_{l_n <= x} (x - l_n)^rho.
/// rho = 0 reproduces the plain count.
double smoothed_count(const Spectrum& s, double x, int rho);

/// Natural log of a nonnegative big integer (log(0) = -inf).
double log_big(const BigInt& n);

}  // namespace ellipsoid_entropy::lattice
