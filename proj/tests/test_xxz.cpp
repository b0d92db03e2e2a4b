#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/ellint_1.hpp>
#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include "spinon/xxz.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
constexpr double pi = std::numbers::pi;

namespace {

double wrap(double x) { return std::remainder(x, 2.0 * pi); }

// K = (pi/2) theta3(0, nome)^2 by plain summation in extended precision
double theta3_sq_half_pi(double nome) {
  long double t3 = 1.0L;
  for (long double j = 1.0L;; j += 1.0L) {
    const long double term = std::pow(static_cast<long double>(nome), j * j);
    t3 += 2.0L * term;
    if (term < 1e-22L * t3)
      break;
  }
  return static_cast<double>(0.5L * std::numbers::pi_v<long double> * t3 * t3);
}

} // namespace

TEST_CASE("anisotropy parameterisation") {
  const auto a = spinon::anisotropy_from_delta(-1.25);
  CHECK_THAT(a.q, WithinAbs(-0.5, 1e-12));
  CHECK(a.nome == -a.q);

  const auto b = spinon::anisotropy_from_delta(-2.0);
  CHECK_THAT(b.q, WithinAbs(-2.0 + std::sqrt(3.0), 1e-14));

  for (double delta : {-1.01, -1.1, -1.5, -2.0, -5.0, -40.0}) {
    const auto x = spinon::anisotropy_from_delta(delta);
    CHECK(x.q > -1.0);
    CHECK(x.q < 0.0);
    CHECK_THAT(0.5 * (x.q + 1.0 / x.q), WithinRel(delta, 1e-12));
    CHECK_THAT(x.elliptic.nome(), WithinRel(x.nome, 1e-10));
    // K and K' from nome inversion agree with independent complete integrals
    const double m = x.elliptic.m;
    CHECK(x.elliptic.mc > 0.0);
    CHECK_THAT(x.elliptic.K, WithinRel(theta3_sq_half_pi(x.nome), 1e-11));
    if (x.elliptic.mc > 1e-6) {
      CHECK_THAT(x.elliptic.K, WithinRel(boost::math::ellint_1(std::sqrt(m)), 1e-11));
      CHECK_THAT(x.elliptic.Kprime, WithinRel(boost::math::ellint_1(std::sqrt(x.elliptic.mc)), 1e-11));
      const auto direct = spinon::elliptic_complete(m);
      CHECK_THAT(direct.nome(), WithinRel(x.nome, 1e-10));
    }
  }
}

TEST_CASE("isotropic limit structure") {
  double last_q = 0.0, last_ratio = INFINITY;
  for (double eps : {1.0, 0.1, 1e-2, 1e-3, 1e-4}) {
    const auto a = spinon::anisotropy_from_delta(-1.0 - eps);
    CHECK(a.q < last_q);
    const double ratio = a.elliptic.Kprime / a.elliptic.K;
    CHECK_THAT(ratio, WithinRel(std::acosh(1.0 + eps) / pi, 1e-10));
    CHECK(ratio < last_ratio);
    last_q = a.q;
    last_ratio = ratio;
  }
  CHECK(last_q < -0.97);
  CHECK(last_ratio < 0.01);
  CHECK_THROWS_AS(spinon::anisotropy_from_delta(-1.0), spinon::DomainError);
  CHECK_THROWS_AS(spinon::anisotropy_from_delta(0.5), spinon::DomainError);
}

TEST_CASE("tau is unimodular on the circle") {
  for (double delta : {-1.1, -2.0, -5.0}) {
    const auto a = spinon::anisotropy_from_delta(delta);
    for (double alpha = -3.0; alpha <= 3.0; alpha += 0.1)
      CHECK_THAT(std::abs(spinon::tau_fn(a, spinon::xi_from_alpha(alpha))), WithinAbs(1.0, 1e-10));
  }
  const auto a = spinon::anisotropy_from_delta(-2.0);
  CHECK_THROWS_AS(spinon::tau_fn(a, {1.1, 0.0}), spinon::DomainError);
}

TEST_CASE("theta quotient and elliptic momentum") {
  const auto a = spinon::anisotropy_from_delta(-2.0);
  CHECK_THAT(spinon::xxz_momentum(a, 0.0), WithinAbs(-pi / 2.0, 1e-15));
  const auto t0 = spinon::tau_fn(a, spinon::xi_from_alpha(0.0));
  CHECK_THAT(t0.real(), WithinAbs(0.0, 1e-14));
  CHECK_THAT(t0.imag(), WithinAbs(-1.0, 1e-14));

  for (double delta : {-1.1, -1.5, -2.0, -5.0}) {
    const auto x = spinon::anisotropy_from_delta(delta);
    for (double alpha = -3.0; alpha <= 3.0; alpha += 0.25) {
      const double p = spinon::xxz_momentum(x, alpha);
      const auto expected = std::exp(spinon::complex{0.0, -(p + spinon::tau_momentum_offset)});
      CHECK(std::abs(spinon::tau_fn(x, spinon::xi_from_alpha(alpha)) - expected) < 1e-8);
      CHECK_THAT(wrap(spinon::xxz_momentum_theta(x, alpha) - p), WithinAbs(0.0, 1e-8));
    }
  }
}

TEST_CASE("elliptic momentum against an independent amplitude") {
  const auto a = spinon::anisotropy_from_delta(-1.5);
  const double m = a.elliptic.m;
  for (double alpha = 0.05; alpha < 1.5; alpha += 0.1) {
    const double u = 2.0 * a.elliptic.K * alpha / pi;
    double cn = 0.0, dn = 0.0;
    const double sn = boost::math::jacobi_elliptic(std::sqrt(m), u, &cn, &dn);
    // am = atan2(sn, cn) on the first sheet
    CHECK_THAT(spinon::xxz_momentum(a, alpha), WithinAbs(std::atan2(sn, cn) - pi / 2.0, 1e-12));
  }
}

TEST_CASE("energy in both forms") {
  const auto a = spinon::anisotropy_from_delta(-2.0);
  const auto &el = a.elliptic;
  const double top = 2.0 * el.K / pi * std::sinh(pi * el.Kprime / el.K);
  CHECK_THAT(spinon::xxz_energy(a, 0.0), WithinRel(top, 1e-15));
  for (double alpha : {0.3, 1.0, 2.0})
    CHECK_THAT(spinon::xxz_energy_log_derivative(a, alpha), WithinAbs(spinon::xxz_energy(a, alpha), 1e-6));

  const double m = el.m;
  for (double alpha = -2.0; alpha <= 2.0; alpha += 0.2) {
    double cn = 0.0, dn = 0.0;
    boost::math::jacobi_elliptic(std::sqrt(m), 2.0 * el.K * alpha / pi, &cn, &dn);
    CHECK_THAT(spinon::xxz_energy(a, alpha), WithinRel(top * dn, 1e-12));
    // dn has period 2K in its argument, which is pi in alpha
    CHECK_THAT(spinon::xxz_energy(a, alpha + pi), WithinRel(spinon::xxz_energy(a, alpha), 1e-12));
  }
}

TEST_CASE("energy is gapped with the predicted minimum") {
  for (double delta : {-1.1, -1.5, -2.0, -5.0}) {
    const auto a = spinon::anisotropy_from_delta(delta);
    const double gap = spinon::xxz_energy_gap(a);
    double lowest = INFINITY;
    for (int i = 0; i <= 400; ++i) {
      const double e = spinon::xxz_energy(a, -pi + 2.0 * pi * i / 400.0);
      CHECK(e > 0.0);
      lowest = std::min(lowest, e);
    }
    CHECK(lowest >= gap * (1.0 - 1e-12));
    CHECK_THAT(spinon::xxz_energy(a, pi / 2.0), WithinRel(gap, 1e-10));
  }
}
