#pragma once

#include <functional>
#include <optional>
#include <string>

#include "ellipsoid_entropy/codec.hpp"
#include "ellipsoid_entropy/lattice.hpp"

namespace ellipsoid_entropy::bound {

/// The artifact's explicit commitments for every constant the estimates leave
/// implicit. Each entry's provenance is documented in ledger_notes().
struct ConstantsLedger {
  double c0_regime = 1.0;   // coupling k <= c0 R^{1+1/k}
  double balance_c = 1.0;   // Condition-1 balance constant C of the profile
  std::optional<double> sigma_c{};  // sigma = sigma_c max(1, eps_total/k);
                                    // unset -> 1.5 C (box-bound chain)
  double c5 = 2.0;          // x + rho z <= c5 x, checked per instance
  double c3 = 0.0;          // y lower bracket; 0 -> 4/pi^2
  double c4 = 0.0;          // y upper bracket; 0 -> c5 * 4/pi^2
  double c10 = 1.0;         // alternate regime: c10 R^{1+1/k} <= k <= c11 R^2
  double c11 = 100.0;

  double effective_sigma_c() const;
  double effective_c3() const;
  double effective_c4() const;
};

/// One-line provenance note per ledger constant (for report serialization).
const std::vector<std::pair<std::string, std::string>>& ledger_notes();

struct BoundParameters {
  int k = 0;
  double R = 0.0;
  double x = 0.0;       // R^2
  int rho = 0;          // floor(k/2 + 1)
  double z = 0.0;       // x^{1/(k+1)}
  double y = 0.0;       // 4 (x + rho z) / (pi^2 z^2)
  double sigma = 0.0;   // sigma_c max(1, eps_total/k)
  double gamma_coef = 1.0;
  double eta = 0.0;       // -1/rho!
  double c_landau = 0.0;  // D^{-1/2} pi^{-k/2}
  double zeta_zero = -1.0;
  double eps_geom = 1.0;
  double eps_total = 0.0;
};

/// Theorem hypotheses k >= 2, R >= 2 are enforced here.
BoundParameters compute_parameters(int k, double R,
                                   const codec::PrecisionProfile& profile,
                                   const ConstantsLedger& ledger);

struct RegimeReport {
  bool primary = false;    // k <= c0 R^{1+1/k}
  bool alternate = false;  // c10 R^{1+1/k} <= k <= c11 R^2
  std::string label;       // "primary" | "alternate" | "outside"
};

RegimeReport regime_check(int k, double R, const ConstantsLedger& ledger);

/// Difference operator of order rho with step z:
///   sum_{v=0}^{rho} (-1)^{rho-v} C(rho,v) F(x + v z),
/// accumulated with compensated summation.
double delta_apply(const std::function<double(double)>& F, double x, double z,
                   int rho);

/// Certified majorant of |Delta(t^{k/4+rho/2} J_{k/2+rho}(2 pi sqrt(lambda t)))|:
///   (2 pi)^{-1/2} (x+rho z)^{k/4-1/4} lambda^{-1/4}
///     min[ 2^rho (x+rho z)^{rho/2} f(k/2+rho), pi^rho lambda^{rho/2} z^rho f(k/2+rho) ].
/// The two branches meet exactly at lambda = y.
double delta_bessel_bound(const BoundParameters& params, double lambda_n);

struct AbelPair {
  double lhs = 0.0;
  double rhs = 0.0;
  double lambda_gy = 0.0;  // lambda_{G(y)} (0 when G(y) = 0)
  bool stau_ok = true;     // lambda_{G(y)} <= y
};

/// Head sum sum_{lambda_n <= y} lambda_n^{-w} (w < k/2) against the quantified
/// Abel majorant w int_{lambda_1}^{y} G(u) u^{-w-1} du + G(lambda_{G(y)}) lambda_{G(y)}^{-w},
/// both evaluated exactly on the piecewise-constant G of the spectrum.
AbelPair abel_lower(const lattice::Spectrum& spec, double y, double w);

/// Tail sum sum_{lambda_n > y} lambda_n^{-w} (w > k/2) against
/// w int_y^inf G(u) u^{-w-1} du. Beyond the spectrum cutoff both sides use the
/// envelope G(u) <= 2^k sigma^k u^{k/2}; the lhs carries a certified remainder
/// bound for the unseen tail.
AbelPair abel_upper(const lattice::Spectrum& spec, double y, double w,
                    const BoundParameters& params);

enum class BoundMode { certified_envelope, empirical_spectrum };

struct Integrals {
  BoundMode mode = BoundMode::certified_envelope;
  double i1 = 0.0, i2 = 0.0, i3 = 0.0;
  double ln_i1 = 0.0, ln_i2 = 0.0, ln_i3 = 0.0;
};

/// The three Abel-summation integrals behind the oscillatory term.
/// Certified mode: closed-form power integrals of the G-envelope
/// (I1 exponent k/4-5/4 integrates from 0; I3 exponent k/4-rho/2-5/4 < -1).
/// Empirical mode: exact sums over the piecewise-constant G of dual_spectrum
/// (cutoff >= y required), envelope tail beyond the cutoff for I3.
Integrals integrals_I(const BoundParameters& params, BoundMode mode,
                      const lattice::Spectrum* dual_spectrum = nullptr);

struct I4Value {
  double value = 0.0;
  double ln_value = 0.0;
  /// ln(I4)/k - ln sigma - rho ln x / ((k+1)k): the empirical residue that the
  /// packaging estimate only bounds by a constant plus o(1).
  double normalized_gap = 0.0;
};

/// I4 = pi^rho z^rho f(k/2+rho) [(k/4+1/4) I1 + I2]
///    + 2^rho (x+rho z)^{rho/2} f(k/2+rho) (k/4+rho/2+1/4) I3,
/// assembled in the log domain.
I4Value package_I4(const BoundParameters& params, const Integrals& ints);

struct BoundReport {
  BoundParameters params;
  ConstantsLedger ledger;
  BoundMode mode = BoundMode::certified_envelope;
  Integrals integrals;
  I4Value i4;
  double f_order = 0.0;  // envelope value f(k/2 + rho)
  double ln_j1 = 0.0, ln_j2 = 0.0, ln_j3 = 0.0;
  double total_log_bound = 0.0;  // ln(J1 + J2 + 1 + J3)
  double volume_log = 0.0;       // ln of the ellipsoid volume; equals ln J1
  double normalized = 0.0;       // total_log_bound / k
  double c_eff = 0.0;            // (total_log_bound - volume_log) / k
  bool c5_ok = true;             // x + rho z <= c5 x held
  bool regime_ok = true;         // primary regime and c5 check both hold
  std::string regime_label;
  /// Dominant side of the estimate comparison
  ///   ln R - ln eps_geom - (1/2) ln k   vs   (k-1)/(2k) ln R - ln eps_geom;
  /// the flip coincides with the regime boundary k = R^{1+1/k}.
  std::string dominant_term;  // "J1J2" | "J3"
  std::optional<double> residual_vs_exact;  // normalized - ln(tau)/k when known
};

/// J1 + J2 + 1 + J3 assembled in the log domain:
///   J1 = pi^{k/2} R^k / (eps_geom^k Gamma(k/2+1))
///   J2 = J1 rho z (k/2) c5^{k/2-1} / x
///   J3 = c5^{(k-1)/4} x^{(k-1)/4} I4 / (sqrt(2 pi) eps_geom^k pi^rho z^rho)
/// A c5 violation is reported (regime_ok = false), not thrown.
BoundReport bound_terms(const BoundParameters& params,
                        const codec::PrecisionProfile& profile,
                        const I4Value& i4, const ConstantsLedger& ledger,
                        BoundMode mode, const Integrals& ints);

/// Convenience pipeline: parameters -> integrals -> I4 -> report.
BoundReport evaluate_bound(int k, double R, const codec::PrecisionProfile& profile,
                           const ConstantsLedger& ledger,
                           BoundMode mode = BoundMode::certified_envelope,
                           const lattice::Spectrum* dual_spectrum = nullptr);

struct SandwichReport {
  double lhs = 0.0;          // z^rho B(x)
  double rhs = 0.0;          // Delta[B_rho](x)
  bool ok = false;           // lhs <= rhs (1e-9 scale tolerance)
  double delta_rho = 0.0;    // Delta(t^rho)
  double delta_rho_expected = 0.0;  // rho! z^rho
  bool delta_rho_ok = false;
  double delta_power = 0.0;  // Delta(t^{k/2+rho}) / (z^rho Gamma ratio)
  double bracket_lo = 0.0;   // x^{k/2}
  double bracket_hi = 0.0;   // (x + rho z)^{k/2}
  bool bracket_ok = false;
};

/// Averaging inequality z^rho B(x) <= Delta[B_rho](x) on an exact spectrum
/// (complete to x + rho z), plus the two difference-operator identities.
SandwichReport verify_sandwich(const lattice::Spectrum& spec,
                               const BoundParameters& params);

}  // namespace ellipsoid_entropy::bound
