#include "ellipsoid_entropy/bound.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ellipsoid_entropy/detail/numeric.hpp"
#include "ellipsoid_entropy/special_functions.hpp"

namespace ellipsoid_entropy::bound {

using detail::NeumaierSum;
using std::numbers::pi;

double ConstantsLedger::effective_sigma_c() const {
  return sigma_c.value_or(1.5 * balance_c);
}
double ConstantsLedger::effective_c3() const {
  return c3 > 0.0 ? c3 : 4.0 / (pi * pi);
}
double ConstantsLedger::effective_c4() const {
  return c4 > 0.0 ? c4 : c5 * 4.0 / (pi * pi);
}

const std::vector<std::pair<std::string, std::string>>& ledger_notes() {
  static const std::vector<std::pair<std::string, std::string>> notes = {
      {"c0_regime", "coupling k <= c0 R^{1+1/k} under which the volume terms dominate"},
      {"balance_c", "Condition-1 balance constant C of the precision profile"},
      {"sigma_c", "sigma = sigma_c max(1, eps_total/k); default 1.5 C from the box-bound chain 2 sqrt(u) eps_i + 1 <= 2 sigma sqrt(u)"},
      {"c5", "x + rho z <= c5 x; default 2, checked per instance"},
      {"c3", "lower y-bracket: y >= c3 x^{1-2/(k+1)}; default 4/pi^2"},
      {"c4", "upper y-bracket: y <= c4 x^{1-2/(k+1)}; default c5 4/pi^2"},
      {"c10", "alternate-regime lower edge c10 R^{1+1/k} <= k"},
      {"c11", "alternate-regime upper edge k <= c11 R^2 (labeling only)"},
  };
  return notes;
}

BoundParameters compute_parameters(int k, double R,
                                   const codec::PrecisionProfile& profile,
                                   const ConstantsLedger& ledger) {
  if (k < 2) throw std::invalid_argument("compute_parameters: k must be >= 2");
  if (!(R >= 2.0)) throw std::invalid_argument("compute_parameters: R must be >= 2");
  if (profile.dimension() != k)
    throw std::invalid_argument("compute_parameters: profile dimension != k");

  BoundParameters p;
  p.k = k;
  p.R = R;
  p.x = R * R;
  p.rho = k / 2 + 1;  // floor(k/2 + 1)
  p.z = std::pow(p.x, 1.0 / (k + 1));
  p.y = 4.0 * (p.x + p.rho * p.z) / (pi * pi * p.z * p.z);
  p.eps_total = profile.total();
  p.eps_geom = profile.geom();
  p.sigma = ledger.effective_sigma_c() * std::max(1.0, p.eps_total / k);
  p.gamma_coef = 1.0;
  p.eta = -1.0 / std::tgamma(p.rho + 1.0);
  p.c_landau = std::exp(-k * std::log(p.eps_geom) - 0.5 * k * std::log(pi));
  p.zeta_zero = -1.0;
  return p;
}

RegimeReport regime_check(int k, double R, const ConstantsLedger& ledger) {
  RegimeReport r;
  const double coupling = std::pow(R, 1.0 + 1.0 / k);
  r.primary = std::isinf(ledger.c0_regime) || k <= ledger.c0_regime * coupling;
  r.alternate = ledger.c10 * coupling <= k && k <= ledger.c11 * R * R;
  r.label = r.primary ? "primary" : (r.alternate ? "alternate" : "outside");
  return r;
}

double delta_apply(const std::function<double(double)>& F, double x, double z,
                   int rho) {
  if (rho < 0) throw std::invalid_argument("delta_apply: rho must be >= 0");
  const auto binom = detail::binomial_row(rho);
  NeumaierSum sum;
  for (int v = 0; v <= rho; ++v) {
    const double fv = F(x + v * z);
    if (!std::isfinite(fv))
      throw std::domain_error("delta_apply: F returned a non-finite value");
    sum.add(((rho - v) % 2 == 0 ? 1.0 : -1.0) * binom[v] * fv);
  }
  return sum.value();
}

double delta_bessel_bound(const BoundParameters& p, double lambda_n) {
  if (!(lambda_n > 0.0))
    throw std::invalid_argument("delta_bessel_bound: lambda must be > 0");
  const double f = specfun::envelope_f(0.5 * p.k + p.rho);
  const double shifted = p.x + p.rho * p.z;
  const double first = std::pow(2.0, p.rho) * std::pow(shifted, 0.5 * p.rho) * f;
  const double second =
      std::pow(pi, p.rho) * std::pow(lambda_n, 0.5 * p.rho) * std::pow(p.z, p.rho) * f;
  return (1.0 / std::sqrt(2.0 * pi)) * std::pow(shifted, 0.25 * p.k - 0.25) *
         std::pow(lambda_n, -0.25) * std::min(first, second);
}

namespace {

/// Exact integral of G(u) u^{-w-1} over [a, b] within the spectrum range,
/// times w:  w * int = sum over constancy intervals of G (a^-w - b^-w).
/// Assumes 0 < a <= b <= cutoff and w > 0.
double abel_integral_times_w(const lattice::Spectrum& spec, double a, double b,
                             double w) {
  if (b <= a) return 0.0;
  NeumaierSum sum;
  double left = a;
  std::size_t g = spec.count_at(a);
  for (std::size_t i = g; i < spec.values.size(); ++i) {
    const double v = spec.values[i];
    if (v <= left) continue;  // multiplicity group already handled
    if (v >= b) break;
    if (g > 0) sum.add(static_cast<double>(g) * (std::pow(left, -w) - std::pow(v, -w)));
    left = v;
    g = spec.count_at(v);
  }
  if (g > 0) sum.add(static_cast<double>(g) * (std::pow(left, -w) - std::pow(b, -w)));
  return sum.value();
}

void require_complete(const lattice::Spectrum& spec, double upto,
                      const char* who) {
  if (upto > spec.cutoff + detail::tie_tolerance(spec.cutoff))
    throw std::invalid_argument(std::string(who) + ": spectrum incomplete (cutoff " +
                                std::to_string(spec.cutoff) + " < " +
                                std::to_string(upto) + ")");
}

}  // namespace

AbelPair abel_lower(const lattice::Spectrum& spec, double y, double w) {
  const double half_k = 0.5 * spec.dimension;
  if (!(w < half_k)) throw std::invalid_argument("abel_lower: requires w < k/2");
  if (w < 0.0) throw std::invalid_argument("abel_lower: requires w >= 0");
  require_complete(spec, y, "abel_lower");

  AbelPair out;
  const std::size_t gy = spec.count_at(y);
  NeumaierSum lhs;
  for (std::size_t i = 0; i < gy; ++i) lhs.add(std::pow(spec.values[i], -w));
  out.lhs = lhs.value();
  if (gy > 0) {
    out.lambda_gy = spec.value_at(gy);
    out.stau_ok = out.lambda_gy <= y + detail::tie_tolerance(y);
    const double boundary = static_cast<double>(gy) * std::pow(out.lambda_gy, -w);
    const double integral_w =
        (w > 0.0) ? abel_integral_times_w(spec, spec.values.front(), y, w) : 0.0;
    out.rhs = integral_w + boundary;
  } else {
    out.lambda_gy = 0.0;
    out.stau_ok = true;
    out.rhs = 0.0;
  }
  return out;
}

AbelPair abel_upper(const lattice::Spectrum& spec, double y, double w,
                    const BoundParameters& params) {
  const double half_k = 0.5 * spec.dimension;
  if (!(w > half_k)) throw std::invalid_argument("abel_upper: requires w > k/2");

  const int k = spec.dimension;
  const double env_coef = std::pow(2.0 * params.sigma, k);
  const double cutoff = spec.cutoff;
  // w int_T^inf env(u) u^{-w-1} du with env(u) = (2 sigma)^k u^{k/2}
  auto env_tail_w = [&](double t) {
    return w * env_coef * std::pow(t, half_k - w) / (w - half_k);
  };

  AbelPair out;
  if (y >= cutoff) {
    // Nothing observed beyond y: both sides reduce to the envelope tail.
    out.lhs = env_tail_w(y);
    out.rhs = env_tail_w(y);
    return out;
  }
  NeumaierSum head;
  const std::size_t gy = spec.count_at(y);
  for (std::size_t i = gy; i < spec.values.size(); ++i)
    head.add(std::pow(spec.values[i], -w));
  const double g_cut = static_cast<double>(spec.values.size());
  // Certified remainder for the unseen tail: w int_T^inf env - G(T) T^{-w}
  // (>= the true Stieltjes tail, and >= 0 since the envelope dominates G).
  const double remainder =
      std::max(0.0, env_tail_w(cutoff) - g_cut * std::pow(cutoff, -w));
  out.lhs = head.value() + remainder;
  out.rhs = abel_integral_times_w(spec, y, cutoff, w) + env_tail_w(cutoff);
  const std::size_t n = spec.count_at(y);
  out.lambda_gy = n > 0 ? spec.value_at(n) : 0.0;
  out.stau_ok = out.lambda_gy <= y + detail::tie_tolerance(y);
  return out;
}

Integrals integrals_I(const BoundParameters& p, BoundMode mode,
                      const lattice::Spectrum* dual_spectrum) {
  Integrals out;
  out.mode = mode;
  const double k = p.k;
  const double rho = p.rho;
  // Integrability at the I3 tail needs k/4 - rho/2 - 5/4 < -1, i.e.
  // 2 rho + 1 > k; rho = floor(k/2 + 1) always satisfies it.
  if (!(2 * p.rho + 1 > p.k))
    throw std::logic_error("integrals_I: non-integrable exponent configuration");

  if (mode == BoundMode::certified_envelope) {
    const double ln_env = k * std::log(2.0 * p.sigma);
    const double ln_y = std::log(p.y);
    out.ln_i1 = ln_env + (0.25 * k - 0.25) * ln_y + std::log(4.0 / (k - 1.0));
    out.ln_i2 = ln_env + (0.25 * k - 0.25) * ln_y;
    out.ln_i3 = ln_env + (0.25 * k - 0.5 * rho - 0.25) * ln_y +
                std::log(4.0 / (2.0 * rho + 1.0 - k));
    out.i1 = std::exp(out.ln_i1);
    out.i2 = std::exp(out.ln_i2);
    out.i3 = std::exp(out.ln_i3);
    return out;
  }

  if (dual_spectrum == nullptr)
    throw std::invalid_argument("integrals_I: empirical mode needs a dual spectrum");
  const lattice::Spectrum& spec = *dual_spectrum;
  require_complete(spec, p.y, "integrals_I");
  const double w1 = 0.25 * k + 0.25;  // I1 integrand exponent is w1 + 1
  const double w3 = 0.25 * k + 0.5 * rho + 0.25;
  out.i1 = spec.values.empty()
               ? 0.0
               : abel_integral_times_w(spec, spec.values.front(), p.y, w1) / w1;
  const std::size_t gy = spec.count_at(p.y);
  out.i2 = gy > 0 ? static_cast<double>(gy) * std::pow(spec.value_at(gy), -w1) : 0.0;
  const double env_coef = std::pow(2.0 * p.sigma, k);
  double i3 = abel_integral_times_w(spec, std::min(p.y, spec.cutoff), spec.cutoff, w3) / w3;
  i3 += env_coef * std::pow(spec.cutoff, 0.5 * k - w3) / (w3 - 0.5 * k);
  out.i3 = i3;
  out.ln_i1 = std::log(out.i1);
  out.ln_i2 = std::log(out.i2);
  out.ln_i3 = std::log(out.i3);
  return out;
}

I4Value package_I4(const BoundParameters& p, const Integrals& ints) {
  if (ints.i1 < 0.0 || ints.i2 < 0.0 || ints.i3 < 0.0)
    throw std::invalid_argument("package_I4: integrals must be nonnegative");
  I4Value out;
  const double k = p.k;
  const double rho = p.rho;
  const double ln_f = std::log(specfun::envelope_f(0.5 * k + rho));
  const std::array<double, 2> head = {std::log(0.25 * k + 0.25) + ints.ln_i1,
                                      ints.ln_i2};
  const double term1 = rho * std::log(pi * p.z) + ln_f + detail::logsumexp(head);
  const double term2 = rho * std::log(2.0) + 0.5 * rho * std::log(p.x + rho * p.z) +
                       ln_f + std::log(0.25 * k + 0.5 * rho + 0.25) + ints.ln_i3;
  if (ints.i1 == 0.0 && ints.i2 == 0.0 && ints.i3 == 0.0) {
    out.value = 0.0;
    out.ln_value = -std::numeric_limits<double>::infinity();
    out.normalized_gap = -std::numeric_limits<double>::infinity();
    return out;
  }
  const std::array<double, 2> terms = {term1, term2};
  out.ln_value = detail::logsumexp(terms);
  out.value = std::exp(out.ln_value);
  out.normalized_gap = out.ln_value / k - std::log(p.sigma) -
                       rho * std::log(p.x) / ((k + 1.0) * k);
  return out;
}

BoundReport bound_terms(const BoundParameters& p,
                        const codec::PrecisionProfile& profile,
                        const I4Value& i4, const ConstantsLedger& ledger,
                        BoundMode mode, const Integrals& ints) {
  BoundReport rep;
  rep.params = p;
  rep.ledger = ledger;
  rep.mode = mode;
  rep.integrals = ints;
  rep.i4 = i4;
  rep.f_order = specfun::envelope_f(0.5 * p.k + p.rho);

  const double k = p.k;
  const double rho = p.rho;
  const double ln_eg = std::log(p.eps_geom);
  rep.c5_ok = p.x + rho * p.z <= ledger.c5 * p.x * (1.0 + 1e-12);

  rep.ln_j1 = 0.5 * k * std::log(pi) + k * std::log(p.R) - k * ln_eg -
              specfun::log_gamma(0.5 * k + 1.0);
  rep.volume_log = rep.ln_j1;
  rep.ln_j2 = rep.ln_j1 + std::log(rho) + std::log(p.z) + std::log(0.5 * k) +
              (0.5 * k - 1.0) * std::log(ledger.c5) - std::log(p.x);
  rep.ln_j3 = 0.25 * (k - 1.0) * (std::log(ledger.c5) + std::log(p.x)) +
              i4.ln_value - 0.5 * std::log(2.0 * pi) - k * ln_eg -
              rho * std::log(pi) - rho * std::log(p.z);

  const std::array<double, 4> terms = {rep.ln_j1, rep.ln_j2, 0.0, rep.ln_j3};
  rep.total_log_bound = detail::logsumexp(terms);
  rep.normalized = rep.total_log_bound / k;
  rep.c_eff = (rep.total_log_bound - rep.volume_log) / k;

  const RegimeReport regime = regime_check(p.k, p.R, ledger);
  rep.regime_label = regime.label;
  rep.regime_ok = regime.primary && rep.c5_ok;

  // Estimate-level comparison; actual ln J's are all reported above.
  const double est_j1 = std::log(p.R) - ln_eg - 0.5 * std::log(k);
  const double est_j3 = (k - 1.0) / (2.0 * k) * std::log(p.R) - ln_eg;
  rep.dominant_term = est_j1 >= est_j3 ? "J1J2" : "J3";
  (void)profile;
  return rep;
}

BoundReport evaluate_bound(int k, double R, const codec::PrecisionProfile& profile,
                           const ConstantsLedger& ledger, BoundMode mode,
                           const lattice::Spectrum* dual_spectrum) {
  const BoundParameters p = compute_parameters(k, R, profile, ledger);
  const Integrals ints = integrals_I(p, mode, dual_spectrum);
  const I4Value i4 = package_I4(p, ints);
  return bound_terms(p, profile, i4, ledger, mode, ints);
}

SandwichReport verify_sandwich(const lattice::Spectrum& spec,
                               const BoundParameters& p) {
  require_complete(spec, p.x + p.rho * p.z, "verify_sandwich");
  SandwichReport rep;
  const double bx = static_cast<double>(spec.count_at(p.x));
  rep.lhs = std::pow(p.z, p.rho) * bx;
  rep.rhs = delta_apply(
      [&](double t) { return lattice::smoothed_count(spec, t, p.rho); }, p.x,
      p.z, p.rho);
  rep.ok = rep.lhs <= rep.rhs + 1e-9 * std::max(1.0, std::fabs(rep.rhs));

  rep.delta_rho = delta_apply([&](double t) { return std::pow(t, p.rho); }, p.x,
                              p.z, p.rho);
  rep.delta_rho_expected = std::tgamma(p.rho + 1.0) * std::pow(p.z, p.rho);
  rep.delta_rho_ok = std::fabs(rep.delta_rho - rep.delta_rho_expected) <=
                     1e-9 * rep.delta_rho_expected;

  const double gamma_ratio = std::exp(specfun::log_gamma(0.5 * p.k + p.rho + 1.0) -
                                      specfun::log_gamma(0.5 * p.k + 1.0));
  const double raw = delta_apply(
      [&](double t) { return std::pow(t, 0.5 * p.k + p.rho); }, p.x, p.z, p.rho);
  rep.delta_power = raw / (std::pow(p.z, p.rho) * gamma_ratio);
  rep.bracket_lo = std::pow(p.x, 0.5 * p.k);
  rep.bracket_hi = std::pow(p.x + p.rho * p.z, 0.5 * p.k);
  rep.bracket_ok = rep.delta_power >= rep.bracket_lo * (1.0 - 1e-9) &&
                   rep.delta_power <= rep.bracket_hi * (1.0 + 1e-9);
  return rep;
}

}  // namespace ellipsoid_entropy::bound
