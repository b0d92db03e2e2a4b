#pragma once

// Squared two-spinon form-factor amplitudes |A_{+/-}(gamma + i delta)|^2 of
// the isotropic chain, and the constant prefactor of the two-spinon DCF.
//
//   |A_s|^2 = exp(-I_s),
//   I_s = int_0^inf dx (cosh(a x) cos(b x) - 1) e^{-s x} / (x sinh(2x) cosh(x)),
//   a = 2 (1 - delta/pi),  b = 2 gamma / pi,  s = +1 (plus) or -1 (minus).
//
// For large x the integrand behaves like 2 e^{(a-3-s) x} cos(b x) / x. It
// decays exponentially except for (minus, delta = 0), where it tends to
// 2 cos(b x) / x and the tail is only conditionally convergent. That tail is
// taken in closed form through the cosine integral and the remainder, which
// decays like e^{-2x}, is integrated numerically.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <tuple>
#include <vector>

#include "spinon/errors.hpp"
#include "spinon/quadrature.hpp"
#include "spinon/specfun.hpp"

namespace spinon {

enum class FormFactorSign { plus, minus };

enum class ConvergenceRegime { absolute, conditional };

enum class FormFactorStatus {
  finite,             ///< ordinary converged value
  boundary_divergent, ///< integral diverges to +inf, amplitude is its limit 0
  lower_edge_capped   ///< |gamma| exceeded the cap; value taken at the cap
};

/// |gamma| beyond which a_sq evaluates at the cap and flags the result.
inline constexpr double form_factor_gamma_cap = 50.0;

/// Below this x the integrand is replaced by its quadratic Taylor polynomial.
inline constexpr double form_factor_series_threshold = 1e-3;

struct FormFactorArg {
  double gamma = 0.0; ///< real part of alpha
  double delta = 0.0; ///< imaginary part of alpha, in [0, pi]

  ConvergenceRegime regime(FormFactorSign sign) const {
    return (sign == FormFactorSign::minus && delta == 0.0) ? ConvergenceRegime::conditional
                                                           : ConvergenceRegime::absolute;
  }
};

struct FormFactorValue {
  double value = 0.0; ///< |A|^2
  double error = 0.0; ///< absolute error estimate on value
  double exponent = 0.0; ///< the integral I, so value = exp(-I)
  FormFactorStatus status = FormFactorStatus::finite;
};

namespace detail {

inline double sign_factor(FormFactorSign s) { return s == FormFactorSign::plus ? 1.0 : -1.0; }

// x sinh(2x) cosh(x) expressed through e^{-x}, valid for all x > 0:
// x e^{3x} (1 - e^{-4x})(1 + e^{-2x}) / 4
inline double denominator_scaled(double x) {
  const double e2 = std::exp(-2.0 * x);
  return x * (1.0 - e2 * e2) * (1.0 + e2) / 4.0;
}

} // namespace detail

/// Integrand of the exponent I for given sign and argument, at x > 0.
inline double form_factor_integrand(double x, FormFactorSign sign, FormFactorArg arg) {
  constexpr double pi = std::numbers::pi;
  const double a = 2.0 * (1.0 - arg.delta / pi);
  const double b = 2.0 * arg.gamma / pi;
  const double s = detail::sign_factor(sign);

  if (x < form_factor_series_threshold) {
    // numerator c2 x^2 + c4 x^4, denominator 2 x^2 + (7/3) x^4
    const double a2 = a * a, b2 = b * b;
    const double c2 = 0.5 * (a2 - b2);
    const double c4 = (a2 * a2 + b2 * b2) / 24.0 - 0.25 * a2 * b2;
    const double r0 = 0.5 * c2;
    const double r2 = 0.5 * c4 - 7.0 / 12.0 * c2;
    return r0 - s * r0 * x + (0.5 * r0 + r2) * x * x - s * (r0 / 6.0 + r2) * x * x * x;
  }
  if (x < 18.0) {
    // cosh(ax) cos(bx) - 1 without cancellation
    const double sh = std::sinh(0.5 * a * x);
    const double sn = std::sin(0.5 * b * x);
    const double num = 2.0 * sh * sh * std::cos(b * x) - 2.0 * sn * sn;
    return num * std::exp(-s * x) / (x * std::sinh(2.0 * x) * std::cosh(x));
  }
  // scaled by e^{3x} to stay finite for any x
  const double num = 0.5 * std::exp((a - 3.0 - s) * x) * (1.0 + std::exp(-2.0 * a * x)) *
                         std::cos(b * x) -
                     std::exp(-(3.0 + s) * x);
  return num / detail::denominator_scaled(x);
}

namespace detail {

// integrand minus its asymptote 2 cos(bx)/x for (minus, delta = 0):
// [2 cos(bx) (2E4 - E2 + E6) - 4 E2] / (x (1 - E4)(1 + E2)),  En = e^{-n x}
inline double conditional_residual(double x, double b) {
  const double e2 = std::exp(-2.0 * x);
  const double e4 = e2 * e2;
  const double num = 2.0 * std::cos(b * x) * (2.0 * e4 - e2 + e4 * e2) - 4.0 * e2;
  return num / (x * (1.0 - e4) * (1.0 + e2));
}

// panels of at most one oscillation period, and never wider than 2
inline double panel_width(double gamma) {
  const double b = 2.0 * std::abs(gamma) / std::numbers::pi;
  return b > 0.0 ? std::min(2.0, 2.0 * std::numbers::pi / b) : 2.0;
}

} // namespace detail

/// |A_sign(gamma + i delta)|^2.
///
/// The finite segment [0, split_point] is integrated adaptively. Beyond it,
/// absolutely convergent tails are integrated panel by panel until an
/// exponential bound on the remainder drops below tolerance; the conditional
/// case (minus, delta = 0) uses -2 Ci(b X0) for the oscillatory asymptote.
/// (minus, gamma = 0, delta = 0) diverges and is returned as status
/// boundary_divergent with value 0.
inline FormFactorValue a_sq(FormFactorSign sign, FormFactorArg arg, const QuadratureSpec &spec) {
  spec.validate();
  constexpr double pi = std::numbers::pi;
  if (!(arg.delta >= 0.0 && arg.delta <= pi))
    throw DomainError("a_sq: delta must lie in [0, pi], got " + std::to_string(arg.delta));
  if (!std::isfinite(arg.gamma))
    throw DomainError("a_sq: gamma must be finite");

  FormFactorValue out;
  if (std::abs(arg.gamma) > form_factor_gamma_cap) {
    arg.gamma = std::copysign(form_factor_gamma_cap, arg.gamma);
    out.status = FormFactorStatus::lower_edge_capped;
  }
  const ConvergenceRegime regime = arg.regime(sign);
  if (regime == ConvergenceRegime::conditional && arg.gamma == 0.0) {
    out.status = FormFactorStatus::boundary_divergent;
    out.exponent = std::numeric_limits<double>::infinity();
    return out;
  }

  auto f = [&](double x) { return form_factor_integrand(x, sign, arg); };
  const double x0 = spec.split_point;
  const double width = detail::panel_width(arg.gamma);
  const auto finite_pts = uniform_breakpoints(0.0, x0, width);
  const QuadratureResult finite = integrate_adaptive(f, finite_pts, spec);

  double exponent = finite.value;
  double error = finite.error;
  const double tail_target = 0.1 * spec.abs_tol;
  constexpr int max_tail_panels = 100000;

  if (regime == ConvergenceRegime::conditional) {
    const double b = 2.0 * std::abs(arg.gamma) / pi;
    exponent += -2.0 * cosine_integral(b * x0);
    // |residual| <= 12 e^{-2x} / (x (1 - e^{-4x})), integrated from x
    auto bound = [](double x) { return 6.0 * std::exp(-2.0 * x) / (x * (1.0 - std::exp(-4.0 * x))); };
    double x = x0;
    int panels = 0;
    while (bound(x) > tail_target) {
      if (++panels > max_tail_panels)
        throw ConvergenceError("a_sq: residual tail did not converge", std::exp(-exponent), error);
      const double next = x + 4.0 * width;
      const auto pts = uniform_breakpoints(x, next, width);
      const auto r = integrate_adaptive([b](double t) { return detail::conditional_residual(t, b); },
                                        pts, spec);
      exponent += r.value;
      error += r.error;
      x = next;
    }
    error += bound(x);
  } else {
    const double a = 2.0 * (1.0 - arg.delta / pi);
    const double s = detail::sign_factor(sign);
    const double rate_osc = 3.0 + s - a; // decay rate of the cos term
    const double rate_const = 3.0 + s;   // decay rate of the -1 term
    auto bound = [=](double x) {
      const double scale = x * (1.0 - std::exp(-4.0 * x));
      return 4.0 * (std::exp(-rate_osc * x) / rate_osc + std::exp(-rate_const * x) / rate_const) /
             scale;
    };
    double x = x0;
    int panels = 0;
    while (bound(x) > tail_target) {
      if (++panels > max_tail_panels)
        throw ConvergenceError("a_sq: tail did not converge", std::exp(-exponent), error);
      const double next = x + 4.0 * width;
      const auto pts = uniform_breakpoints(x, next, width);
      const auto r = integrate_adaptive(f, pts, spec);
      exponent += r.value;
      error += r.error;
      x = next;
    }
    error += bound(x);
  }

  out.exponent = exponent;
  out.value = std::exp(-exponent);
  out.error = out.value * error;
  return out;
}

// ---------------------------------------------------------------------------
// DCF prefactor

struct DcfConstants {
  double gamma_ratio = 0.0;     ///< Gamma(3/4)^2 / Gamma(1/4)^2
  double a_plus_sq_half = 0.0;  ///< |A_+(i pi/2)|^2
  double a_minus_sq_half = 0.0; ///< |A_-(i pi/2)|^2
  double prefactor = 0.0;       ///< pi^2 gamma_ratio / (4 |A_+|^2 |A_-|^2)
  double a_plus_error = 0.0;
  double a_minus_error = 0.0;
  double prefactor_error = 0.0;
};

/// Computes the prefactor ingredients without caching.
inline DcfConstants compute_constants(const QuadratureSpec &spec) {
  constexpr double pi = std::numbers::pi;
  DcfConstants c;
  const double g = gamma_fn(0.75) / gamma_fn(0.25);
  c.gamma_ratio = g * g;
  const FormFactorArg half{0.0, pi / 2.0};
  const auto ap = a_sq(FormFactorSign::plus, half, spec);
  const auto am = a_sq(FormFactorSign::minus, half, spec);
  c.a_plus_sq_half = ap.value;
  c.a_minus_sq_half = am.value;
  c.a_plus_error = ap.error;
  c.a_minus_error = am.error;
  c.prefactor = pi * pi * c.gamma_ratio / (4.0 * ap.value * am.value);
  c.prefactor_error = c.prefactor * (ap.error / ap.value + am.error / am.value);
  return c;
}

/// Cached per quadrature spec; concurrent first calls compute exactly once.
inline const DcfConstants &constants(const QuadratureSpec &spec) {
  using Key = std::tuple<double, double, double, int>;
  static std::mutex mutex;
  static std::map<Key, DcfConstants> cache;
  spec.validate();
  const Key key{spec.abs_tol, spec.rel_tol, spec.split_point, spec.max_subdivisions};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, compute_constants(spec)).first;
  return it->second;
}

} // namespace spinon
