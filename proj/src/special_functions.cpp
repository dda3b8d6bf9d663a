#include "ellipsoid_entropy/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ellipsoid_entropy/detail/numeric.hpp"

namespace ellipsoid_entropy::specfun {

namespace {

// Series terms t_m = (-1)^m (x/2)^{nu+2m} / (m! Gamma(nu+m+1)) alternate; the
// summation loses ~log10(maxterm) digits to cancellation, so the series path
// is taken only while the largest term stays below this cap.
constexpr double kSeriesTermCap = 1.0e4;

double series_peak_log(double nu, double x) {
  // |t_m| peaks where the ratio (x/2)^2 / ((m+1)(nu+m+1)) crosses 1.
  const double q = 0.25 * x * x;
  const double disc = nu * nu + 4.0 * q;
  const double m_hat = std::max(0.0, 0.5 * (-(nu + 2.0) + std::sqrt(disc)));
  const double lh = std::log(0.5 * x);
  double peak = -std::numeric_limits<double>::infinity();
  for (double m : {0.0, std::floor(m_hat), std::ceil(m_hat)}) {
    if (m < 0.0) continue;
    peak = std::max(peak, (nu + 2.0 * m) * lh - std::lgamma(m + 1.0) -
                              std::lgamma(nu + m + 1.0));
  }
  return peak;
}

double bessel_series(double nu, double x) {
  const double half = 0.5 * x;
  const double lt0 = nu * std::log(half) - std::lgamma(nu + 1.0);
  double term = std::exp(lt0);
  if (term == 0.0) return 0.0;  // (x/2)^nu underflows; J is below double range
  detail::NeumaierSum sum;
  sum.add(term);
  double scale = std::fabs(term);
  for (int m = 1; m < 1000; ++m) {
    term *= -(half * half) / (m * (nu + m));
    sum.add(term);
    scale = std::max(scale, std::fabs(sum.value()));
    if (std::fabs(term) < 1e-18 * scale) break;
  }
  return sum.value();
}

}  // namespace

double bessel_j(double nu, double x) {
  if (!std::isfinite(nu) || nu < 0.0)
    throw std::domain_error("bessel_j: order must be finite and >= 0");
  if (!std::isfinite(x) || x < 0.0)
    throw std::domain_error("bessel_j: argument must be finite and >= 0");
  if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
  if (series_peak_log(nu, x) <= std::log(kSeriesTermCap)) return bessel_series(nu, x);
  return std::cyl_bessel_j(nu, x);
}

double olenko_rhs(double nu) {
  if (!std::isfinite(nu) || nu <= 0.0)
    throw std::domain_error("olenko_rhs: order must be > 0");
  const double c = std::cbrt(nu);
  return kOlenkoB *
         std::sqrt(c + kOlenkoAlpha1 / c +
                   3.0 * kOlenkoAlpha1 * kOlenkoAlpha1 / (10.0 * nu));
}

double envelope_plateau() {
  static const double plateau = [] {
    double m = 0.0;
    constexpr int n = 4096;
    for (int i = 0; i <= n; ++i) {
      m = std::max(m, olenko_rhs(3.0 + 2.0 * i / n));
    }
    return m;
  }();
  return plateau;
}

double envelope_f(double nu) {
  if (!(nu >= 3.0)) throw std::domain_error("envelope_f: order must be >= 3");
  return std::max(envelope_plateau(), olenko_rhs(nu));
}

double envelope_ratio(int k) {
  if (k < 2) throw std::invalid_argument("envelope_ratio: k must be >= 2");
  const int rho = k / 2 + 1;
  const double f_rho = envelope_f(std::max(3.0, static_cast<double>(rho)));
  const double f_hi = envelope_f(0.5 * k + rho);
  return std::pow(f_rho / f_hi, 2.0 / rho);
}

double log_gamma(double x) {
  if (!std::isfinite(x) || x <= 0.0)
    throw std::domain_error("log_gamma: argument must be > 0");
  return std::lgamma(x);
}

}  // namespace ellipsoid_entropy::specfun
