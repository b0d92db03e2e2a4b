#pragma once

// Side-by-side view of finite-chain spectral weight and the two-spinon
// continuum at each lattice momentum.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "spinon/dcf.hpp"
#include "spinon/ed.hpp"

namespace spinon {

struct CompareRow {
  ed::BandCheckEntry band;
  double two_spinon_weight = 0.0; ///< (1/2pi) int dw S2^{+-}(k, w)
  double ratio = std::numeric_limits<double>::quiet_NaN(); ///< windowed ED / two-spinon
};

struct CompareReport {
  ed::BandCheckReport band;
  std::vector<CompareRow> rows; ///< under the selected labeling

  /// Mean ratio over momenta strictly inside (0, pi) and (pi, 2 pi).
  double interior_mean_ratio() const {
    double sum = 0.0;
    int count = 0;
    for (const auto &r : rows)
      if (is_interior(r.band.k) && std::isfinite(r.ratio)) {
        sum += r.ratio;
        ++count;
      }
    return count ? sum / count : std::numeric_limits<double>::quiet_NaN();
  }

  static bool is_interior(double k) {
    constexpr double eps = 1e-9;
    return std::abs(std::sin(k)) > eps;
  }
};

inline CompareReport compare_with_continuum(const ed::ChainSpec &spec, const QuadratureSpec &quad,
                                            std::size_t omega_points = 64, int threads = 1) {
  CompareReport rep;
  rep.band = ed::band_check(spec);
  const auto &entries = rep.band.labeling().entries;
  const auto weights = parallel_map<double>(entries.size(), threads, [&](std::size_t i) {
    return band_integral(entries[i].k, quad, omega_points) / (2.0 * std::numbers::pi);
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    CompareRow row{entries[i], weights[i], std::numeric_limits<double>::quiet_NaN()};
    if (weights[i] > 0.0)
      row.ratio = entries[i].windowed_weight / weights[i];
    rep.rows.push_back(row);
  }
  return rep;
}

} // namespace spinon
