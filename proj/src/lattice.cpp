#include "ellipsoid_entropy/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <thread>

#include "ellipsoid_entropy/detail/numeric.hpp"

namespace ellipsoid_entropy::lattice {

using detail::PrefixSum;
using detail::tie_leq;

namespace {

int env_thread_cap() {
  if (const char* s = std::getenv("ELLIPSOID_ENTROPY_THREADS")) {
    const long v = std::strtol(s, nullptr, 10);
    if (v >= 1) return static_cast<int>(std::min<long>(v, 256));
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp<unsigned>(hw, 1u, 8u));
}

void check_form(const DiagonalForm& form) {
  if (form.diag.empty()) throw std::invalid_argument("DiagonalForm: empty diagonal");
  for (double d : form.diag) {
    if (!std::isfinite(d) || d <= 0.0)
      throw std::invalid_argument("DiagonalForm: diagonal entries must be > 0");
  }
}

/// Largest m >= 0 with prefix + d m^2 <= x (tie-tolerant); assumes the prefix
/// itself fits. sqrt gives the initial guess, the loops repair +-1 ulp slips.
std::int64_t coord_max(const PrefixSum& prefix, double d, double x) {
  const double room = x - prefix.value();
  std::int64_t m = 0;
  if (room > 0.0) m = static_cast<std::int64_t>(std::floor(std::sqrt(room / d)));
  auto fits = [&](std::int64_t u) {
    const double uu = static_cast<double>(u);
    return tie_leq(prefix.add(d * uu * uu).value(), x);
  };
  while (fits(m + 1)) ++m;
  while (m > 0 && !fits(m)) --m;
  return m;
}

// ---------------------------------------------------------------------------
// Scheme 1: pruned coordinate recursion.
//
// Descend coordinate by coordinate keeping the compensated partial form value;
// the admissible range of u_i given the prefix is |u_i| <= coord_max(...).
// Mirror symmetry u_i <-> -u_i halves the work, and the innermost coordinate
// is counted as an interval (2m+1) without materializing its points.
// ---------------------------------------------------------------------------
struct RecursiveCounter {
  const std::vector<double>& diag;
  double x;
  std::uint64_t budget;
  std::atomic<std::uint64_t>& nodes;

  BigInt run(std::size_t level, PrefixSum prefix) const {
    if (nodes.fetch_add(1, std::memory_order_relaxed) + 1 > budget)
      throw BudgetExceeded("count_points: node budget exceeded");
    const std::int64_t m = coord_max(prefix, diag[level], x);
    if (level + 1 == diag.size()) return BigInt(2 * m + 1);
    BigInt total = run(level + 1, prefix);  // u_level = 0
    for (std::int64_t u = 1; u <= m; ++u) {
      const double uu = static_cast<double>(u);
      total += 2 * run(level + 1, prefix.add(diag[level] * uu * uu));
    }
    return total;
  }
};

BigInt count_recursive(const std::vector<double>& diag, double x,
                       std::uint64_t budget, int threads,
                       std::uint64_t& work_out) {
  std::atomic<std::uint64_t> nodes{0};
  RecursiveCounter counter{diag, x, budget, nodes};
  BigInt total;
  const std::int64_t m0 = coord_max(PrefixSum{}, diag[0], x);
  const bool parallel = threads > 1 && diag.size() > 1 && m0 >= 4 * threads;
  if (!parallel) {
    total = counter.run(0, PrefixSum{});
  } else {
    nodes.fetch_add(1, std::memory_order_relaxed);  // the split root itself
    std::vector<std::future<BigInt>> parts;
    const std::int64_t chunk = (m0 + threads - 1) / threads;
    for (std::int64_t lo = 0; lo <= m0; lo += chunk) {
      const std::int64_t hi = std::min(m0, lo + chunk - 1);
      parts.push_back(std::async(std::launch::async, [&, lo, hi] {
        BigInt part;
        for (std::int64_t u = lo; u <= hi; ++u) {
          const double uu = static_cast<double>(u);
          const PrefixSum p = PrefixSum{}.add(diag[0] * uu * uu);
          const BigInt sub = counter.run(1, p);
          part += (u == 0) ? sub : 2 * sub;
        }
        return part;
      }));
    }
    for (auto& f : parts) total += f.get();
  }
  work_out = nodes.load();
  return total;
}

// ---------------------------------------------------------------------------
// Scheme 2: exact dynamic program over integerized budgets.
//
// When every diag_i and x equal p_i/q (common denominator) the form value is
// an integer multiple of 1/q, and A[b] = #{(u_1..u_i) : sum c_j u_j^2 = b}
// evolves coordinate by coordinate; the answer is sum_{b<=X} A[b]. No point is
// materialized, so counts around 1e13+ stay exact and fast.
// ---------------------------------------------------------------------------
struct DpPlan {
  bool feasible = false;
  std::vector<std::int64_t> coeff;
  std::int64_t threshold = -1;
  std::uint64_t cells = 0;
  double ops = 0.0;  // estimated inner-loop additions
};

DpPlan plan_dp(const std::vector<double>& diag, double x,
               std::uint64_t dp_cell_budget) {
  DpPlan plan;
  std::int64_t lcm = 1;
  for (double d : diag) {
    const auto r = detail::rationalize(d);
    if (!r.ok) return plan;
    const std::int64_t g = detail::gcd64(lcm, r.den);
    const double next = static_cast<double>(lcm) / g * static_cast<double>(r.den);
    if (next > 4.0e9) return plan;
    lcm = lcm / g * r.den;
  }
  {
    const auto rx = detail::rationalize(std::max(x, 1e-300));
    if (rx.ok) {
      const std::int64_t g = detail::gcd64(lcm, rx.den);
      const double next = static_cast<double>(lcm) / g * static_cast<double>(rx.den);
      if (next > 4.0e9) return plan;
      lcm = lcm / g * rx.den;
    }
  }
  const auto L = static_cast<double>(lcm);
  plan.coeff.reserve(diag.size());
  for (double d : diag) {
    const double scaled = d * L;
    const double snapped = std::nearbyint(scaled);
    if (std::fabs(scaled - snapped) > 1e-6 * std::max(1.0, scaled)) return plan;
    if (snapped < 1.0 || snapped > 9.0e18) return plan;
    plan.coeff.push_back(static_cast<std::int64_t>(snapped));
  }
  const double xs = x * L;
  if (xs > 4.6e18) return plan;
  const double snapped = std::nearbyint(xs);
  const double X = (std::fabs(xs - snapped) <= detail::tie_tolerance(xs))
                       ? snapped
                       : std::floor(xs);
  plan.threshold = static_cast<std::int64_t>(std::max(0.0, X));
  const auto cells = static_cast<double>(plan.threshold + 1) * diag.size();
  if (cells > static_cast<double>(dp_cell_budget)) return plan;
  plan.cells = static_cast<std::uint64_t>(cells);
  for (std::int64_t c : plan.coeff) {
    const double reach =
        std::floor(std::sqrt(static_cast<double>(plan.threshold) /
                             static_cast<double>(c)));
    plan.ops += static_cast<double>(plan.threshold + 1) * (reach + 1.0);
  }
  if (plan.ops > 20.0 * static_cast<double>(dp_cell_budget)) return plan;
  plan.feasible = true;
  return plan;
}

template <typename Int>
BigInt dp_run(const DpPlan& plan) {
  const std::size_t n = static_cast<std::size_t>(plan.threshold) + 1;
  std::vector<Int> acc(n, Int(0));
  acc[0] = Int(1);
  std::vector<Int> next(n);
  for (const std::int64_t c : plan.coeff) {
    std::fill(next.begin(), next.end(), Int(0));
    for (std::int64_t b = 0; b <= plan.threshold; ++b) {
      Int s = acc[static_cast<std::size_t>(b)];
      for (std::int64_t u = 1; c * u * u <= b; ++u) {
        s += 2 * acc[static_cast<std::size_t>(b - c * u * u)];
      }
      next[static_cast<std::size_t>(b)] = s;
    }
    acc.swap(next);
  }
  if constexpr (std::is_same_v<Int, BigInt>) {
    BigInt total = 0;
    for (const auto& v : acc) total += v;
    return total;
  } else {
    unsigned __int128 total = 0;
    for (const auto& v : acc) total += v;
    BigInt out = static_cast<std::uint64_t>(total >> 64);
    out <<= 64;
    out += static_cast<std::uint64_t>(total);
    return out;
  }
}

BigInt count_dp(const DpPlan& plan, double relaxed_box_bound) {
  // The box bound caps every DP entry; below ~1e30 the whole table fits
  // unsigned 128-bit, otherwise fall back to arbitrary precision.
  if (relaxed_box_bound < 1e30) return dp_run<unsigned __int128>(plan);
  return dp_run<BigInt>(plan);
}

double recursion_nodes_estimate(const std::vector<double>& diag, double x) {
  // Upper estimate ignoring pruning: product of the first k-1 coordinate
  // ranges (the innermost coordinate costs one node per branch).
  double est = 1.0;
  for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
    est *= 2.0 * std::floor(std::sqrt(x / diag[i])) + 1.0;
    if (est > 1e18) return 1e18;
  }
  return est;
}

}  // namespace

double DiagonalForm::det() const {
  detail::NeumaierSum s;
  for (double d : diag) s.add(std::log(d));
  return std::exp(s.value());
}

DiagonalForm DiagonalForm::dual_form() const {
  DiagonalForm out;
  out.kind = kind == FormKind::primal ? FormKind::dual : FormKind::primal;
  out.diag.reserve(diag.size());
  for (double d : diag) out.diag.push_back(1.0 / d);
  return out;
}

DiagonalForm DiagonalForm::primal(const codec::PrecisionProfile& p) {
  DiagonalForm f;
  f.kind = FormKind::primal;
  for (double e : p.eps()) f.diag.push_back(e * e);
  return f;
}

DiagonalForm DiagonalForm::dual(const codec::PrecisionProfile& p) {
  DiagonalForm f;
  f.kind = FormKind::dual;
  for (double e : p.eps()) f.diag.push_back(1.0 / (e * e));
  return f;
}

CountResult count_points(const DiagonalForm& form, double x, bool include_origin,
                         const CountOptions& opts) {
  check_form(form);
  if (!std::isfinite(x) || x < 0.0)
    throw std::invalid_argument("count_points: threshold must be >= 0");

  CountResult result;
  result.includes_origin = include_origin;

  CountScheme scheme = opts.scheme;
  DpPlan plan;
  if (scheme != CountScheme::recursive) {
    plan = plan_dp(form.diag, x, opts.dp_cell_budget);
  }
  if (scheme == CountScheme::automatic) {
    const double rec_est = recursion_nodes_estimate(form.diag, x);
    scheme = (plan.feasible && plan.ops < rec_est) ? CountScheme::dynamic_programming
                                                   : CountScheme::recursive;
  }

  if (scheme == CountScheme::dynamic_programming) {
    if (!plan.feasible)
      throw BudgetExceeded("count_points: inputs not commensurate or DP budget exceeded");
    double box = 1.0;
    for (double d : form.diag) box *= 2.0 * std::sqrt(x / d) + 1.0;
    result.count = count_dp(plan, box);
    result.scheme_used = CountScheme::dynamic_programming;
    result.work = plan.cells;
  } else {
    const int threads = opts.threads > 0 ? opts.threads : env_thread_cap();
    std::uint64_t work = 0;
    result.count = count_recursive(form.diag, x, opts.node_budget, threads, work);
    result.scheme_used = CountScheme::recursive;
    result.work = work;
  }
  if (!include_origin) result.count -= 1;
  return result;
}

BoxBound box_bound(std::span<const double> eps, double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw std::invalid_argument("box_bound: threshold must be >= 0");
  BoxBound out;
  out.exact = 1;
  out.relaxed = 1.0;
  const double r = std::sqrt(x);
  for (double e : eps) {
    if (!std::isfinite(e) || e <= 0.0)
      throw std::invalid_argument("box_bound: eps_i must be > 0");
    const double side = detail::snap_to_integer(r * e);
    out.exact *= BigInt(2 * static_cast<std::int64_t>(std::floor(side)) + 1);
    out.relaxed *= 2.0 * r * e + 1.0;
  }
  return out;
}

std::size_t Spectrum::count_at(double x) const {
  const double bound = x + detail::tie_tolerance(x);
  return static_cast<std::size_t>(
      std::upper_bound(values.begin(), values.end(), bound) - values.begin());
}

double Spectrum::value_at(std::size_t n) const {
  if (n == 0 || n > values.size())
    throw std::out_of_range("Spectrum::value_at: index out of range");
  return values[n - 1];
}

std::vector<std::pair<double, std::size_t>> Spectrum::grouped() const {
  std::vector<std::pair<double, std::size_t>> out;
  for (double v : values) {
    if (!out.empty() && out.back().first == v) {
      ++out.back().second;
    } else {
      out.emplace_back(v, 1);
    }
  }
  return out;
}

namespace {

void enumerate_values(const std::vector<double>& diag, double cutoff,
                      std::size_t level, PrefixSum prefix, std::size_t weight,
                      std::vector<double>& out) {
  // Nonnegative orthant only; a branch with s sign-flippable coordinates
  // stands for 2^s lattice points of equal form value.
  if (level == diag.size()) {
    const double v = prefix.value();
    if (v > 0.0) out.insert(out.end(), weight, v);
    return;
  }
  const std::int64_t m = coord_max(prefix, diag[level], cutoff);
  for (std::int64_t u = 0; u <= m; ++u) {
    const double uu = static_cast<double>(u);
    enumerate_values(diag, cutoff, level + 1, prefix.add(diag[level] * uu * uu),
                     weight * (u > 0 ? 2 : 1), out);
  }
}

}  // namespace

Spectrum spectrum(const DiagonalForm& form, double cutoff,
                  std::uint64_t point_budget) {
  check_form(form);
  if (!std::isfinite(cutoff) || cutoff <= 0.0)
    throw std::invalid_argument("spectrum: cutoff must be > 0");

  CountOptions gate;
  gate.node_budget = std::max<std::uint64_t>(point_budget, 1'000'000);
  const CountResult total = count_points(form, cutoff, false, gate);
  if (total.count > BigInt(point_budget))
    throw BudgetExceeded("spectrum: point budget exceeded (" +
                         total.count.str() + " values)");

  Spectrum s;
  s.dimension = form.dimension();
  s.cutoff = cutoff;
  s.values.reserve(total.count.convert_to<std::size_t>());
  enumerate_values(form.diag, cutoff, 0, PrefixSum{}, 1, s.values);
  std::sort(s.values.begin(), s.values.end());
  // Collapse fp noise: neighbors within 1e-12 (relative) share one key.
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    if (s.values[i] - s.values[i - 1] <= 1e-12 * std::max(1.0, s.values[i])) {
      s.values[i] = s.values[i - 1];
    }
  }
  return s;
}

double smoothed_count(const Spectrum& s, double x, int rho) {
  if (rho < 0) throw std::invalid_argument("smoothed_count: rho must be >= 0");
  if (rho > 170) throw std::invalid_argument("smoothed_count: rho too large");
  if (x > s.cutoff + detail::tie_tolerance(s.cutoff))
    throw std::invalid_argument("smoothed_count: x exceeds the spectrum cutoff");
  const std::size_t n = s.count_at(x);
  detail::NeumaierSum sum;
  for (std::size_t i = 0; i < n; ++i) {
    const double gap = std::max(0.0, x - s.values[i]);
    sum.add(rho == 0 ? 1.0 : std::pow(gap, rho));
  }
  return sum.value() / std::tgamma(rho + 1.0);
}

double log_big(const BigInt& n) {
  if (n < 0) throw std::invalid_argument("log_big: negative value");
  if (n == 0) return -std::numeric_limits<double>::infinity();
  const double d = n.convert_to<double>();
  if (std::isfinite(d)) return std::log(d);
  const auto bits = boost::multiprecision::msb(n);
  const BigInt top = n >> (bits - 52);
  return std::log(top.convert_to<double>()) +
         static_cast<double>(bits - 52) * std::log(2.0);
}

}  // namespace ellipsoid_entropy::lattice
