#pragma once

// Exact two-spinon dynamical correlation function of the isotropic chain,
//
//   S2^{+-}(k, w) = C |A_-(beta1 - beta2)|^2 / sqrt(w_u^2 - w^2)   inside the band,
//
// with C the constant of DcfConstants::prefactor and (beta1, beta2) the
// rapidities carrying (k, w). The convention is
// S(w, k) = int dt sum_n e^{i(wt + kn)} <sigma^+(t, n) sigma^-(0, 0)>, taken
// literally without extra factors of 2 pi. S vanishes outside the open band
// and is defined as 0 on its edges.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string_view>
#include <vector>

#include "spinon/errors.hpp"
#include "spinon/formfactor.hpp"
#include "spinon/kinematics.hpp"
#include "spinon/parallel.hpp"
#include "spinon/quadrature.hpp"
#include "spinon/specfun.hpp"

namespace spinon {

enum class EdgeFlag { none, near_lower, near_upper };

inline std::string_view to_string(EdgeFlag f) {
  switch (f) {
  case EdgeFlag::none: return "NONE";
  case EdgeFlag::near_lower: return "NEAR_LOWER";
  case EdgeFlag::near_upper: return "NEAR_UPPER";
  }
  return "UNKNOWN";
}

struct DcfValue {
  double k = 0.0; ///< folded to [0, 2 pi)
  double omega = 0.0;
  double s_pm = 0.0;
  double s_zz = 0.0; ///< always 4 s_pm
  Region region = Region::inside;
  double gamma_arg = std::numeric_limits<double>::quiet_NaN(); ///< beta1 - beta2, NaN off-band
  EdgeFlag edge_flag = EdgeFlag::none;
};

inline DcfValue s2_pm(double k, double omega, const QuadratureSpec &spec) {
  const BandPoint pt = classify(k, omega);
  DcfValue v;
  v.k = pt.k;
  v.omega = omega;
  v.region = pt.region;
  if (pt.region != Region::inside)
    return v;

  double gamma;
  try {
    gamma = invert_kinematics(k, omega).difference();
  } catch (const NumericError &) {
    // rounding pushed a spinon momentum onto 0 or -pi: the lower edge limit
    gamma = -2.0 * form_factor_gamma_cap;
  }
  v.gamma_arg = gamma;

  const DcfConstants &c = constants(spec);
  const FormFactorValue ff = a_sq(FormFactorSign::minus, {gamma, 0.0}, spec);
  if (ff.status == FormFactorStatus::boundary_divergent) {
    v.edge_flag = EdgeFlag::near_upper;
    return v;
  }
  if (ff.status == FormFactorStatus::lower_edge_capped)
    v.edge_flag = EdgeFlag::near_lower;

  const double wu = pt.edges.upper;
  v.s_pm = c.prefactor * ff.value / std::sqrt((wu - omega) * (wu + omega));
  v.s_zz = 4.0 * v.s_pm;
  return v;
}

enum class Component { xx, yy, zz, pm };

/// S2^{xx} = S2^{yy} = S2^{zz} = 4 S2^{+-}.
inline double s2_component(Component c, double k, double omega, const QuadratureSpec &spec) {
  const DcfValue v = s2_pm(k, omega, spec);
  return c == Component::pm ? v.s_pm : v.s_zz;
}

// ---------------------------------------------------------------------------
// Line shapes

struct Lineshape {
  double k = 0.0;
  std::vector<double> omega_grid;
  std::vector<double> values; ///< s_zz on omega_grid
  BandEdges edges;
};

/// Frequency grid on [0, 1.05 w_u(k)]: a quarter of the points approach each
/// band edge geometrically (gaps halving toward the edge), the rest are
/// uniform. The grid is strictly increasing with exactly `count` points.
/// For an empty band (k = 0) the span is [0, 1].
inline std::vector<double> lineshape_grid(double k, std::size_t count) {
  if (count < 2)
    throw DomainError("lineshape: need at least two frequencies");
  const BandEdges e = band_boundaries(k);
  const double top = e.upper > 0.0 ? 1.05 * e.upper : 1.0;
  const double width = e.upper - e.lower;
  const std::size_t n_edge = count / 4;
  const std::size_t n_uniform = count - 2 * n_edge; // >= 2

  std::vector<double> grid;
  grid.reserve(count);
  for (std::size_t i = 0; i < n_uniform; ++i)
    grid.push_back(top * static_cast<double>(i) / static_cast<double>(n_uniform - 1));
  double step = 0.5 * width;
  for (std::size_t j = 0; j < n_edge; ++j) {
    step *= 0.5;
    grid.push_back(e.lower + step);
    grid.push_back(e.upper - step);
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  // refill coincident points by splitting the widest gaps
  while (grid.size() < count) {
    std::size_t widest = 1;
    for (std::size_t i = 1; i < grid.size(); ++i)
      if (grid[i] - grid[i - 1] > grid[widest] - grid[widest - 1])
        widest = i;
    grid.insert(grid.begin() + static_cast<std::ptrdiff_t>(widest),
                0.5 * (grid[widest - 1] + grid[widest]));
  }
  return grid;
}

inline Lineshape lineshape(double k, std::size_t omega_count, const QuadratureSpec &spec,
                           int threads = 1) {
  Lineshape ls;
  ls.k = fold_momentum(k);
  ls.edges = band_boundaries(k);
  ls.omega_grid = lineshape_grid(k, omega_count);
  ls.values = parallel_map<double>(ls.omega_grid.size(), threads, [&](std::size_t i) {
    return s2_pm(k, ls.omega_grid[i], spec).s_zz;
  });
  return ls;
}

// ---------------------------------------------------------------------------
// Frequency integrals and the static sum rule

/// int_{w_l + lower_offset}^{w_u} S2^{+-}(k, w) dw, using w = lo + (w_u - lo) u^2
/// and an `points`-node Gauss-Legendre rule in u. The substitution absorbs
/// the inverse-square-root growth at the lower edge.
inline double band_integral(double k, const QuadratureSpec &spec, std::size_t points,
                            double lower_offset = 0.0) {
  const BandEdges e = band_boundaries(k);
  const double lo = e.lower + lower_offset;
  const double span = e.upper - lo;
  if (!(span > 0.0))
    return 0.0;
  const GaussRule rule = gauss_legendre(points);
  double sum = 0.0;
  for (std::size_t i = 0; i < points; ++i) {
    const double u = 0.5 * (rule.nodes[i] + 1.0);
    const double w = lo + span * u * u;
    sum += 0.5 * rule.weights[i] * s2_pm(k, w, spec).s_pm * 2.0 * span * u;
  }
  return sum;
}

struct SumRuleResult {
  double value = 0.0;        ///< I2 at the requested resolution
  double coarse_value = 0.0; ///< I2 at half the resolution
  double error = 0.0;        ///< |value - coarse_value|
};

namespace detail {

// (1/2pi)^2 int_0^{2pi} dk int dw S2^{zz}, folded onto [0, pi] by k -> 2pi - k
// symmetry, with k = pi (1 - t^2) to tame the logarithmic growth of the
// frequency integral as k -> pi.
inline double intensity_at(const QuadratureSpec &spec, std::size_t k_points,
                           std::size_t omega_points, int threads) {
  constexpr double pi = std::numbers::pi;
  const GaussRule rule = gauss_legendre(k_points);
  const auto inner = parallel_map<double>(k_points, threads, [&](std::size_t i) {
    const double t = 0.5 * (rule.nodes[i] + 1.0);
    const double k = pi * (1.0 - t * t);
    return 0.5 * rule.weights[i] * 2.0 * pi * t * band_integral(k, spec, omega_points);
  });
  double sum = 0.0;
  for (double x : inner)
    sum += x;
  return 2.0 * 4.0 * sum / (4.0 * pi * pi);
}

} // namespace detail

/// Two-spinon share I2 of the static structure-factor sum rule.
inline SumRuleResult intensity_sumrule(const QuadratureSpec &spec, std::size_t k_points,
                                       std::size_t omega_points, int threads = 1) {
  if (k_points < 16 || omega_points < 16)
    throw DomainError("intensity_sumrule: resolutions must be >= 16");
  SumRuleResult r;
  r.value = detail::intensity_at(spec, k_points, omega_points, threads);
  r.coarse_value = detail::intensity_at(spec, k_points / 2, omega_points / 2, threads);
  r.error = std::abs(r.value - r.coarse_value);
  return r;
}

} // namespace spinon
