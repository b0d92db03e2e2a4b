#pragma once

// Special functions used by the form-factor, dispersion and XXZ code:
// Gamma, q-Pochhammer products and theta functions, complete elliptic
// integrals (AGM), Jacobi am/dn, and the cosine integral.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "spinon/errors.hpp"

namespace spinon {

using complex = std::complex<double>;

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

// ---------------------------------------------------------------------------
// Gamma

/// Gamma function for positive real arguments (Lanczos, g = 7, 9 terms).
inline double gamma_fn(double x) {
  if (!(x > 0.0))
    throw DomainError("gamma_fn: argument must be positive, got " + std::to_string(x));
  static constexpr std::array<double, 9> coeff = {
      0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
      771.32342877765313,      -176.61502916214060,   12.507343278686905,
      -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};
  constexpr double pi = std::numbers::pi;
  if (x < 0.5) {
    // reflection keeps the series in its accurate half-plane
    return pi / (std::sin(pi * x) * gamma_fn(1.0 - x));
  }
  const double z = x - 1.0;
  double sum = coeff[0];
  for (std::size_t i = 1; i < coeff.size(); ++i)
    sum += coeff[i] / (z + static_cast<double>(i));
  const double t = z + 7.5;
  return std::sqrt(2.0 * pi) * std::pow(t, z + 0.5) * std::exp(-t) * sum;
}

// ---------------------------------------------------------------------------
// q-Pochhammer and theta

struct ProductResult {
  complex value;
  std::size_t terms = 0; ///< number of factors multiplied in
  double error = 0.0;    ///< bound on |value - infinite product|
};

/// Infinite product (y; x)_inf = prod_{n>=0} (1 - y x^n), truncated once the
/// remaining factors change the value by less than `tol` relative.
inline ProductResult q_pochhammer_detail(complex y, complex x,
                                         double tol = std::numeric_limits<double>::epsilon()) {
  const double ax = std::abs(x);
  if (!(ax < 1.0))
    throw DomainError("q_pochhammer: |x| must be < 1, got " + std::to_string(ax));
  if (!(tol > 0.0))
    throw DomainError("q_pochhammer: tolerance must be positive");

  ProductResult r{complex{1.0, 0.0}, 0, 0.0};
  complex power{1.0, 0.0};
  constexpr std::size_t max_terms = 1000000;
  for (;;) {
    const double tail = std::abs(y) * std::abs(power) / (1.0 - ax);
    // prod (1 + e_n) with sum |e_n| <= tail differs from 1 by <= e^tail - 1
    if (tail < tol) {
      r.error = std::abs(r.value) * std::expm1(tail);
      return r;
    }
    if (r.terms >= max_terms)
      throw ConvergenceError("q_pochhammer: product did not converge", r.value.real(), tail);
    r.value *= (1.0 - y * power);
    power *= x;
    ++r.terms;
  }
}

inline complex q_pochhammer(complex y, complex x) { return q_pochhammer_detail(y, x).value; }

/// theta_x(y) = (x; x)_inf (y; x)_inf (x/y; x)_inf.
inline complex theta_fn(complex x, complex y) {
  if (y == complex{0.0, 0.0})
    throw DomainError("theta_fn: y must be nonzero");
  return q_pochhammer(x, x) * q_pochhammer(y, x) * q_pochhammer(x / y, x);
}

// ---------------------------------------------------------------------------
// Complete elliptic integrals and Jacobi functions (parameter m = k^2)

struct EllipticPair {
  double m = 0.0;      ///< parameter in (0, 1)
  double K = 0.0;      ///< K(m)
  double Kprime = 0.0; ///< K(1 - m)
  double mc = 0.0;     ///< 1 - m, kept separately since m may round to 1

  double nome() const { return std::exp(-std::numbers::pi * Kprime / K); }
};

/// Arithmetic-geometric mean of two positive numbers.
inline double agm(double a, double b) {
  for (int i = 0; i < 64; ++i) {
    const double an = 0.5 * (a + b);
    const double bn = std::sqrt(a * b);
    a = an;
    b = bn;
    if (std::abs(a - b) <= 4.0 * std::numeric_limits<double>::epsilon() * a)
      break;
  }
  return 0.5 * (a + b);
}

namespace detail {
inline void check_parameter(double m, const char *who) {
  if (!(m > 0.0 && m < 1.0))
    throw DomainError(std::string(who) + ": parameter m must lie in (0, 1), got " +
                      std::to_string(m));
}
} // namespace detail

/// K(m) = pi / (2 agm(1, sqrt(1-m))) and its complement K'(m) = K(1-m).
inline EllipticPair elliptic_complete(double m) {
  detail::check_parameter(m, "elliptic_complete");
  constexpr double half_pi = std::numbers::pi / 2.0;
  return {m, half_pi / agm(1.0, std::sqrt(1.0 - m)), half_pi / agm(1.0, std::sqrt(m)), 1.0 - m};
}

namespace detail {

struct ThetaNulls {
  double t2, t3, t4;
};

// theta2(0,n) = 2 n^{1/4} sum n^{j(j+1)}, theta3 = 1 + 2 sum n^{j^2},
// theta4 = 1 + 2 sum (-1)^j n^{j^2}; called with n <= e^{-pi} only
inline ThetaNulls theta_nulls(double nome) {
  double t2 = 0.0, t3 = 1.0, t4 = 1.0;
  for (int j = 0; j < 64; ++j) {
    const double dj = j;
    const double a = std::pow(nome, dj * (dj + 1.0));
    t2 += a;
    if (j > 0) {
      const double b = std::pow(nome, dj * dj);
      t3 += 2.0 * b;
      t4 += (j % 2 ? -2.0 : 2.0) * b;
      if (b < 1e-18 * t3 && a < 1e-18 * t2)
        break;
    }
  }
  return {2.0 * std::pow(nome, 0.25) * t2, t3, t4};
}

} // namespace detail

/// Recover the elliptic pair whose nome exp(-pi K'/K) equals `nome`, via the
/// theta quotients m = (theta2/theta3)^4, m' = (theta4/theta3)^4. Above
/// e^{-pi} the complementary nome exp(pi^2 / ln nome) is used, which swaps
/// the roles of m and m'.
inline EllipticPair elliptic_from_nome(double nome) {
  if (!(nome > 0.0 && nome < 1.0))
    throw DomainError("elliptic_from_nome: nome must lie in (0, 1), got " + std::to_string(nome));
  constexpr double pi = std::numbers::pi;
  const bool direct = nome <= std::exp(-pi);
  const auto th = detail::theta_nulls(direct ? nome : std::exp(pi * pi / std::log(nome)));
  const double r2 = std::pow(th.t2 / th.t3, 4);
  const double r4 = std::pow(th.t4 / th.t3, 4);
  const double m = direct ? r2 : r4;
  const double mc = direct ? r4 : r2;
  return {m, 0.5 * pi / agm(1.0, std::sqrt(mc)), 0.5 * pi / agm(1.0, std::sqrt(m)), mc};
}

namespace detail {

// descending AGM (Landen) scheme with b_0 = sqrt(mc), c_0 = sqrt(m)
inline double amplitude(double u, double m, double mc) {
  std::array<double, 64> a{}, c{};
  a[0] = 1.0;
  double b = std::sqrt(mc);
  c[0] = std::sqrt(m);
  std::size_t n = 0;
  while (std::abs(c[n]) > std::numeric_limits<double>::epsilon() && n + 1 < a.size()) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, static_cast<int>(n));
  for (std::size_t i = n; i > 0; --i)
    phi = 0.5 * (phi + std::asin(c[i] * std::sin(phi) / a[i]));
  return phi;
}

} // namespace detail

/// Jacobi amplitude am(u | m).
inline double jacobi_am(double u, double m) {
  detail::check_parameter(m, "jacobi_am");
  return detail::amplitude(u, m, 1.0 - m);
}

/// am(u | m) for the pair's parameter, accurate as m' -> 0.
inline double jacobi_am(double u, const EllipticPair &el) { return detail::amplitude(u, el.m, el.mc); }

inline double jacobi_sn(double u, double m) { return std::sin(jacobi_am(u, m)); }

inline double jacobi_dn(double u, double m) {
  const double s = jacobi_sn(u, m);
  return std::sqrt(std::max(1.0 - m * s * s, 0.0));
}

/// dn = sqrt(m' + m cn^2), free of cancellation as m -> 1.
inline double jacobi_dn(double u, const EllipticPair &el) {
  const double c = std::cos(jacobi_am(u, el));
  return std::sqrt(el.mc + el.m * c * c);
}

// ---------------------------------------------------------------------------
// Cosine integral

/// Ci(z) = -int_z^inf cos t / t dt for z > 0.
inline double cosine_integral(double z) {
  if (!(z > 0.0))
    throw DomainError("cosine_integral: argument must be positive, got " + std::to_string(z));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (z <= 2.0) {
    // gamma + ln z + sum_{k>=1} (-1)^k z^{2k} / (2k (2k)!)
    const double z2 = z * z;
    double term = 1.0, sum = 0.0;
    for (int k = 1; k < 100; ++k) {
      term *= -z2 / ((2.0 * k - 1.0) * (2.0 * k));
      const double add = term / (2.0 * k);
      sum += add;
      if (std::abs(add) < eps * std::abs(sum))
        break;
    }
    return euler_gamma + std::log(z) + sum;
  }
  // continued fraction for E1(iz), modified Lentz
  constexpr double tiny = 1e-300;
  complex bcf{1.0, z};
  complex c{1.0 / tiny, 0.0};
  complex d = 1.0 / bcf;
  complex h = d;
  for (int i = 2; i < 100000; ++i) {
    const double a = -static_cast<double>((i - 1) * (i - 1));
    bcf += 2.0;
    d = 1.0 / (a * d + bcf);
    c = bcf + a / c;
    const complex del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < eps)
      break;
  }
  h *= complex{std::cos(z), -std::sin(z)};
  return -h.real();
}

// ---------------------------------------------------------------------------
// Gauss-Legendre rule on [-1, 1]

struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(std::size_t n) {
  if (n == 0)
    throw DomainError("gauss_legendre: order must be positive");
  if (n == 1)
    return {{0.0}, {2.0}};
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  const double dn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (dn + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t j = 2; j <= n; ++j) {
        const double dj = static_cast<double>(j);
        const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
        p0 = p1;
        p1 = p2;
      }
      dp = dn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = x;
    for (std::size_t j = 2; j <= n; ++j) {
      const double dj = static_cast<double>(j);
      const double p2 = ((2.0 * dj - 1.0) * x * p1 - (dj - 1.0) * p0) / dj;
      p0 = p1;
      p1 = p2;
    }
    dp = dn * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

} // namespace spinon
