#pragma once

// Isotropic spinon dispersion and two-spinon band geometry.
//
// A spinon of rapidity beta has cot p = sinh beta with p in [-pi, 0] and
// energy e = pi / cosh beta = -pi sin p. On this branch p = -pi/2 - atan(sinh beta):
// p(0) = -pi/2, p -> -pi as beta -> +inf and p -> 0 as beta -> -inf.
// Two spinons with total momentum k = -(p1 + p2) fill the band
// pi |sin k| < omega < 2 pi sin(k/2).

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <string_view>

#include "spinon/errors.hpp"

namespace spinon {

struct SpinonState {
  double beta = 0.0;
  double p = -std::numbers::pi / 2.0;
  double e = std::numbers::pi;
};

inline double spinon_momentum(double beta) {
  return -std::numbers::pi / 2.0 - std::atan(std::sinh(beta));
}

inline double spinon_energy(double beta) { return std::numbers::pi / std::cosh(beta); }

inline SpinonState make_spinon(double beta) {
  return {beta, spinon_momentum(beta), spinon_energy(beta)};
}

/// Fold k into [0, 2 pi).
inline double fold_momentum(double k) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(k, two_pi);
  if (r < 0.0)
    r += two_pi;
  if (r >= two_pi)
    r = 0.0;
  return r;
}

struct BandEdges {
  double lower = 0.0; ///< pi |sin k|, the des Cloizeaux-Pearson line
  double upper = 0.0; ///< 2 pi sin(k/2)
};

inline BandEdges band_boundaries(double k) {
  const double kf = fold_momentum(k);
  return {std::numbers::pi * std::abs(std::sin(kf)), 2.0 * std::numbers::pi * std::sin(0.5 * kf)};
}

enum class Region { inside, below, above, on_lower, on_upper };

inline std::string_view to_string(Region r) {
  switch (r) {
  case Region::inside: return "INSIDE";
  case Region::below: return "BELOW";
  case Region::above: return "ABOVE";
  case Region::on_lower: return "ON_LOWER";
  case Region::on_upper: return "ON_UPPER";
  }
  return "UNKNOWN";
}

inline constexpr double band_edge_tolerance = 1e-12;

struct BandPoint {
  double k = 0.0; ///< folded to [0, 2 pi)
  double omega = 0.0;
  Region region = Region::inside;
  BandEdges edges;
};

inline BandPoint classify(double k, double omega) {
  if (!(omega >= 0.0) || !std::isfinite(omega))
    throw DomainError("classify: omega must be finite and >= 0");
  if (!std::isfinite(k))
    throw DomainError("classify: k must be finite");
  BandPoint pt{fold_momentum(k), omega, Region::inside, band_boundaries(k)};
  if (std::abs(omega - pt.edges.lower) <= band_edge_tolerance)
    pt.region = Region::on_lower;
  else if (std::abs(omega - pt.edges.upper) <= band_edge_tolerance)
    pt.region = Region::on_upper;
  else if (omega < pt.edges.lower)
    pt.region = Region::below;
  else if (omega > pt.edges.upper)
    pt.region = Region::above;
  return pt;
}

class OutOfBandError : public DomainError {
public:
  explicit OutOfBandError(Region region)
      : DomainError("invert_kinematics: point is " + std::string(to_string(region)) +
                    ", not inside the two-spinon band"),
        region_(region) {}

  Region region() const noexcept { return region_; }

private:
  Region region_;
};

/// Unordered rapidity pair, stored with beta1 <= beta2.
struct RapidityPair {
  double beta1 = 0.0;
  double beta2 = 0.0;

  RapidityPair() = default;
  RapidityPair(double a, double b) : beta1(std::min(a, b)), beta2(std::max(a, b)) {}

  double difference() const { return beta1 - beta2; }
  double total_energy() const { return spinon_energy(beta1) + spinon_energy(beta2); }
  double total_momentum() const { return -spinon_momentum(beta1) - spinon_momentum(beta2); }

  friend bool operator==(const RapidityPair &, const RapidityPair &) = default;
};

/// Solve omega = e(b1) + e(b2), k = -p(b1) - p(b2) in closed form.
///
/// With p1 + p2 = -k the energy condition reads
/// cos((p1 - p2)/2) = omega / (2 pi sin(k/2)), so p_{1,2} = -k/2 +/- arccos(.)
/// and beta_i = asinh(cot p_i).
inline RapidityPair invert_kinematics(double k, double omega) {
  const BandPoint pt = classify(k, omega);
  if (pt.region != Region::inside)
    throw OutOfBandError(pt.region);
  const double half_k = 0.5 * pt.k;
  const double theta = std::acos(std::min(omega / pt.edges.upper, 1.0));
  const double p1 = -half_k + theta;
  const double p2 = -half_k - theta;
  if (!(p1 < 0.0) || !(p2 > -std::numbers::pi))
    throw NumericError("invert_kinematics: spinon momentum reached the branch endpoint");
  return {std::asinh(std::cos(p1) / std::sin(p1)), std::asinh(std::cos(p2) / std::sin(p2))};
}

} // namespace spinon
