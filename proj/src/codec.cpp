#include "ellipsoid_entropy/codec.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ellipsoid_entropy/detail/numeric.hpp"

namespace ellipsoid_entropy::codec {

PrecisionProfile::PrecisionProfile(std::vector<double> eps,
                                   std::optional<double> balance_c)
    : eps_(std::move(eps)), balance_c_(balance_c) {
  if (eps_.empty()) throw std::invalid_argument("PrecisionProfile: empty eps");
  for (double e : eps_) {
    if (!std::isfinite(e) || e <= 0.0)
      throw std::invalid_argument("PrecisionProfile: eps_i must be finite and > 0");
  }
  if (balance_c_) {
    if (!std::isfinite(*balance_c_) || *balance_c_ < 1.0)
      throw std::invalid_argument("PrecisionProfile: balance C must be >= 1");
    const double m = total() / dimension();
    for (double e : eps_) {
      if (e < m / *balance_c_ * (1.0 - 1e-12) || e > m * *balance_c_ * (1.0 + 1e-12))
        throw std::invalid_argument(
            "PrecisionProfile: eps violates the declared balance constant C=" +
            std::to_string(*balance_c_));
    }
  }
}

double PrecisionProfile::total() const {
  detail::NeumaierSum s;
  for (double e : eps_) s.add(e);
  return s.value();
}

double PrecisionProfile::geom() const {
  detail::NeumaierSum s;
  for (double e : eps_) s.add(std::log(e));
  return std::exp(s.value() / dimension());
}

double PrecisionProfile::min_balance_constant() const {
  const double m = total() / dimension();
  double c = 1.0;
  for (double e : eps_) c = std::max({c, e / m, m / e});
  return c;
}

bool RecoveryBox::contains(std::span<const double> f) const {
  if (f.size() != lo.size()) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (lo[i] >= 0.0) {
      if (!(f[i] >= lo[i] && f[i] < hi[i])) return false;
    } else {
      if (!(f[i] > lo[i] && f[i] <= hi[i])) return false;
    }
  }
  return true;
}

std::vector<double> forward_difference(std::span<const double> g) {
  if (g.empty()) throw std::invalid_argument("forward_difference: empty input");
  if (!(g[0] == 0.0))
    throw std::invalid_argument("forward_difference: g(0) must be 0");
  std::vector<double> f(g.size() - 1);
  for (std::size_t i = 0; i + 1 < g.size(); ++i) f[i] = g[i + 1] - g[i];
  return f;
}

double energy(std::span<const double> f) {
  detail::NeumaierSum s;
  for (double v : f) s.add(v * v);
  return s.value();
}

CodeVector quantize(std::span<const double> f, const PrecisionProfile& p) {
  if (static_cast<int>(f.size()) != p.dimension())
    throw std::invalid_argument("quantize: dimension mismatch");
  CodeVector code;
  code.profile = p;
  code.u.resize(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double q = detail::snap_to_integer(f[i] / p.eps()[i]);
    const double ui = (f[i] < 0.0) ? std::ceil(q) : std::floor(q);
    if (std::fabs(ui) > 4.5e15)
      throw std::overflow_error("quantize: code magnitude exceeds int64 range");
    code.u[i] = static_cast<std::int64_t>(ui);
  }
  return code;
}

RecoveryBox recovery_box(const CodeVector& code) {
  if (code.u.size() != static_cast<std::size_t>(code.profile.dimension()))
    throw std::invalid_argument("recovery_box: dimension mismatch");
  RecoveryBox box;
  box.lo.resize(code.u.size());
  box.hi.resize(code.u.size());
  for (std::size_t i = 0; i < code.u.size(); ++i) {
    const double e = code.profile.eps()[i];
    const auto u = static_cast<double>(code.u[i]);
    if (code.u[i] >= 0) {
      box.lo[i] = u * e;
      box.hi[i] = (u + 1.0) * e;
    } else {
      box.lo[i] = (u - 1.0) * e;
      box.hi[i] = u * e;
    }
  }
  return box;
}

}  // namespace ellipsoid_entropy::codec
