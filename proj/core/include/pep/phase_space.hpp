#pragma once

// Husimi Q function and quadrature statistics of truncated density matrices.

#include <cstddef>
#include <vector>

#include "pep/fock.hpp"

namespace pep {

struct GridSpec {
  double re_min = -4.0;
  double re_max = 4.0;
  double im_min = -4.0;
  double im_max = 4.0;
  std::size_t re_points = 201;
  std::size_t im_points = 201;
  /// Widen the window (same spacing) while the normalisation is more than 1e-3 short of one.
  bool auto_extend = true;
  int max_extensions = 4;
};

/// Square window centred on the state's mean covering six standard deviations of Q, limited to
/// a half-width of sqrt(N) and never narrower than [-4, 4]; spacing 0.04.
GridSpec auto_grid(const QuantumState& rho);

struct HusimiGrid {
  std::vector<double> re_alpha;
  std::vector<double> im_alpha;
  /// Row-major in im_alpha: values[i * re_alpha.size() + j] = Q(re_alpha[j] + i im_alpha[i]).
  std::vector<double> values;
  /// Smallest value before clipping.
  double min_raw = 0.0;
  /// Riemann sum of Q over the grid.
  double normalization = 0.0;
  /// Grid points where the truncated coherent state was renormalised (|alpha|^2 / N > 0.1).
  std::size_t renormalized_points = 0;
  int extensions = 0;

  double at(std::size_t im_index, std::size_t re_index) const {
    return values[im_index * re_alpha.size() + re_index];
  }
};

/// Q(alpha) = <alpha|rho|alpha>/pi with the coherent amplitudes built by the recursion
/// c_n = c_{n-1} alpha / sqrt(n). Negative round-off is clipped to zero. ResolutionError when
/// the normalisation is off by more than 1e-2 after any extensions.
HusimiGrid husimi(const QuantumState& rho, const GridSpec& spec = {});

/// Q at a single point.
double husimi_point(const QuantumState& rho, Complex alpha);

struct HusimiMoments {
  double mean_re = 0.0;
  double mean_im = 0.0;
  /// Principal variances of Q over the grid, major >= minor.
  double major_variance = 0.0;
  double minor_variance = 0.0;
  /// Orientation of the major axis in radians, in (-pi/2, pi/2].
  double major_angle = 0.0;
  double max_value = 0.0;

  double anisotropy() const { return major_variance / minor_variance; }
};

HusimiMoments husimi_moments(const HusimiGrid& grid);

struct QuadratureStats {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.0;
  double var_p = 0.0;
  /// sigma_X sigma_P.
  double uncertainty = 0.0;
};

QuadratureStats quadrature_stats(const QuantumState& rho, double theta);

}  // namespace pep
