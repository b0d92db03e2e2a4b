#pragma once

// Globally adaptive Gauss-Kronrod (10/21) quadrature with optional initial
// breakpoints. The error model follows QUADPACK's qk21.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "spinon/errors.hpp"

namespace spinon {

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double split_point = 40.0; ///< end of the finite segment of semi-infinite integrals
  int max_subdivisions = 60; ///< bisections allowed beyond the initial partition

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
      throw DomainError("QuadratureSpec: tolerances must be positive");
    if (!(split_point > 0.0))
      throw DomainError("QuadratureSpec: split_point must be positive");
    if (max_subdivisions < 1)
      throw DomainError("QuadratureSpec: max_subdivisions must be >= 1");
  }

  double target(double value) const { return std::max(abs_tol, rel_tol * std::abs(value)); }

  friend bool operator==(const QuadratureSpec &, const QuadratureSpec &) = default;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int subdivisions = 0;
  int evaluations = 0;
};

namespace detail {

struct Panel {
  double a, b, value, error;
  friend bool operator<(const Panel &l, const Panel &r) { return l.error < r.error; }
};

template <class F> Panel gauss_kronrod_21(F &f, double a, double b, int &evaluations) {
  static constexpr std::array<double, 5> wg = {
      0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
      0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
      0.295524224714752870173892994651338};
  static constexpr std::array<double, 11> xgk = {
      0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
      0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
      0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
      0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
      0.294392862701460198131126603103866, 0.14887433898163121088482600112972,
      0.0};
  static constexpr std::array<double, 11> wgk = {
      0.011694638867371874278064396062192, 0.03255816230796472747881897245939,
      0.05475589657435199603138130024458,  0.07503967481091995276704314091619,
      0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
      0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
      0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
      0.149445554002916905664936468389821};

  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  std::array<double, 10> fv1{}, fv2{};
  const double fc = f(centr);
  double resg = 0.0;
  double resk = wgk[10] * fc;
  double resabs = std::abs(resk);
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t jtw = 2 * j + 1;
    const double absc = hlgth * xgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += wg[j] * (f1 + f2);
    resk += wgk[jtw] * (f1 + f2);
    resabs += wgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (std::size_t j = 0; j < 5; ++j) {
    const std::size_t jtwm1 = 2 * j;
    const double absc = hlgth * xgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += wgk[jtwm1] * (f1 + f2);
    resabs += wgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  evaluations += 21;

  const double reskh = 0.5 * resk;
  double resasc = wgk[10] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 10; ++j)
    resasc += wgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0)
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double epmach = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * epmach))
    err = std::max(epmach * 50.0 * resabs, err);
  return {a, b, result, err};
}

} // namespace detail

/// Integrate f over the partition given by `breakpoints` (strictly
/// increasing, at least two entries), bisecting the worst panel until the
/// summed error estimate is below spec.target(value).
template <class F>
QuadratureResult integrate_adaptive(F &&f, std::span<const double> breakpoints,
                                    const QuadratureSpec &spec) {
  spec.validate();
  if (breakpoints.size() < 2)
    throw DomainError("integrate_adaptive: need at least two breakpoints");
  for (std::size_t i = 1; i < breakpoints.size(); ++i)
    if (!(breakpoints[i] > breakpoints[i - 1]))
      throw DomainError("integrate_adaptive: breakpoints must be strictly increasing");

  QuadratureResult out;
  std::priority_queue<detail::Panel> heap;
  double value = 0.0, error = 0.0;
  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    auto p = detail::gauss_kronrod_21(f, breakpoints[i - 1], breakpoints[i], out.evaluations);
    value += p.value;
    error += p.error;
    heap.push(p);
  }

  while (error > spec.target(value)) {
    if (out.subdivisions >= spec.max_subdivisions)
      throw ConvergenceError("integrate_adaptive: no convergence after " +
                                 std::to_string(spec.max_subdivisions) + " subdivisions",
                             value, error);
    const detail::Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b))
      throw ConvergenceError("integrate_adaptive: panel too narrow to bisect", value, error);
    auto left = detail::gauss_kronrod_21(f, worst.a, mid, out.evaluations);
    auto right = detail::gauss_kronrod_21(f, mid, worst.b, out.evaluations);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++out.subdivisions;
  }

  // re-sum to shed the drift of the running updates
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  out.value = value;
  out.error = error;
  return out;
}

template <class F>
QuadratureResult integrate_adaptive(F &&f, double a, double b, const QuadratureSpec &spec) {
  if (!(a < b))
    throw DomainError("integrate_adaptive: need a < b");
  const std::array<double, 2> ends{a, b};
  return integrate_adaptive(std::forward<F>(f), std::span<const double>(ends), spec);
}

/// Uniform partition of [a, b] into panels no wider than `width`.
inline std::vector<double> uniform_breakpoints(double a, double b, double width) {
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / width)));
  std::vector<double> pts(n + 1);
  for (std::size_t i = 0; i <= n; ++i)
    pts[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
  pts[n] = b;
  return pts;
}

} // namespace spinon
