#pragma once

// Spinon dispersion of the massive XXZ chain (Delta < -1) in its two
// equivalent forms: the theta-function quotient tau(xi) with
// xi = i e^{i alpha}, and the Jacobi-elliptic parameterisation
//
//   p(alpha) = am(2K alpha / pi) - pi/2,
//   e(alpha) = (2K/pi) sinh(pi K'/K) dn(2K alpha / pi),
//
// with nome exp(-pi K'/K) = -q and Delta = (q + 1/q)/2.
//
// The quotient reproduces the elliptic momentum up to a constant phase:
// tau(xi) = exp(-i (p(alpha) + pi)). At alpha = 0 one has tau(i) = -i exactly
// while p(0) = -pi/2. The offset is exported as tau_momentum_offset.

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "spinon/errors.hpp"
#include "spinon/specfun.hpp"

namespace spinon {

inline constexpr double tau_momentum_offset = std::numbers::pi;

struct Anisotropy {
  double delta_param = 0.0; ///< Delta < -1
  double q = 0.0;           ///< in (-1, 0)
  double nome = 0.0;        ///< -q
  EllipticPair elliptic;    ///< nome() == -q
};

inline Anisotropy anisotropy_from_delta(double delta_param) {
  if (!(delta_param < -1.0))
    throw DomainError("anisotropy_from_delta: need Delta < -1, got " + std::to_string(delta_param));
  // q is the root of q^2 - 2 Delta q + 1 = 0 inside (-1, 0); taking the
  // reciprocal of the other root avoids cancellation
  const double q = 1.0 / (delta_param - std::sqrt(delta_param * delta_param - 1.0));
  return {delta_param, q, -q, elliptic_from_nome(-q)};
}

inline complex xi_from_alpha(double alpha) {
  return complex{0.0, 1.0} * std::exp(complex{0.0, alpha});
}

/// tau(xi) = xi^{-1} theta_{q^4}(q xi^2) / theta_{q^4}(q xi^{-2}), |xi| = 1.
inline complex tau_fn(const Anisotropy &a, complex xi) {
  if (std::abs(std::abs(xi) - 1.0) > 1e-10)
    throw DomainError("tau_fn: xi must lie on the unit circle");
  const double q = a.q;
  const complex x{q * q * q * q, 0.0};
  const complex xi2 = xi * xi;
  return theta_fn(x, q * xi2) / (theta_fn(x, q / xi2) * xi);
}

/// Elliptic-form spinon momentum am(2K alpha/pi) - pi/2.
inline double xxz_momentum(const Anisotropy &a, double alpha) {
  const double u = 2.0 * a.elliptic.K * alpha / std::numbers::pi;
  return jacobi_am(u, a.elliptic) - std::numbers::pi / 2.0;
}

/// Momentum read off the theta quotient, -arg(tau) - offset, wrapped to
/// [-pi, pi). Agrees with xxz_momentum modulo 2 pi.
inline double xxz_momentum_theta(const Anisotropy &a, double alpha) {
  const complex t = tau_fn(a, xi_from_alpha(alpha));
  return -std::arg(t * std::exp(complex{0.0, tau_momentum_offset}));
}

/// Elliptic-form spinon energy (2K/pi) sinh(pi K'/K) dn(2K alpha/pi).
inline double xxz_energy(const Anisotropy &a, double alpha) {
  const auto &el = a.elliptic;
  const double u = 2.0 * el.K * alpha / std::numbers::pi;
  return 2.0 * el.K / std::numbers::pi * std::sinh(std::numbers::pi * el.Kprime / el.K) *
         jacobi_dn(u, el);
}

/// Energy as ((1 - q^2) / 2q) xi d/dxi log tau(xi), by a central difference
/// of log tau along the circle (d/dalpha = i xi d/dxi).
inline double xxz_energy_log_derivative(const Anisotropy &a, double alpha, double step = 1e-5) {
  const complex up = tau_fn(a, xi_from_alpha(alpha + step));
  const complex down = tau_fn(a, xi_from_alpha(alpha - step));
  const complex dlog_dalpha = std::log(up / down) / (2.0 * step);
  const complex xi_dlog_dxi = complex{0.0, -1.0} * dlog_dalpha;
  const double q = a.q;
  return ((1.0 - q * q) / (2.0 * q) * xi_dlog_dxi).real();
}

/// Lowest spinon energy, reached where dn takes its minimum sqrt(m').
inline double xxz_energy_gap(const Anisotropy &a) {
  const auto &el = a.elliptic;
  return 2.0 * el.K / std::numbers::pi * std::sinh(std::numbers::pi * el.Kprime / el.K) *
         std::sqrt(el.mc);
}

} // namespace spinon
