#pragma once

namespace ellipsoid_entropy::specfun {

// Constants of the uniform Bessel estimate
//   sup_{x>=0} sqrt(x)|J_nu(x)| <= b sqrt(nu^{1/3} + a1/nu^{1/3} + 3 a1^2/(10 nu)).
inline constexpr double kOlenkoB = 0.674885;
inline constexpr double kOlenkoAlpha1 = 1.855757;

/// Bessel function of the first kind J_nu(x), nu >= 0, x >= 0.
///
/// Uses the defining power series while its largest term stays small enough
/// for full double accuracy, and the standard library evaluation beyond.
/// Accuracy target: |err| <= 1e-10 (1 + |J_nu(x)|).
double bessel_j(double nu, double x);

/// Right-hand side of the uniform estimate above, nu > 0.
double olenko_rhs(double nu);

/// Largest value of olenko_rhs on [3,5]; the plateau of the monotone envelope.
double envelope_plateau();

/// Monotone upper envelope f(nu) >= sup_x sqrt(x)|J_nu(x)| for nu >= 3:
/// max of the [3,5] plateau and olenko_rhs(nu). Non-decreasing by construction.
double envelope_f(double nu);

/// Diagnostic ratio [f(rho)/f(k/2+rho)]^{2/rho} with rho = floor(k/2+1).
/// Orders below 3 are clamped to f(3).
double envelope_ratio(int k);

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

}  // namespace ellipsoid_entropy::specfun
