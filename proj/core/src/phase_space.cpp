#include "pep/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "pep/errors.hpp"

namespace pep {

namespace {

constexpr double kRenormalizeThreshold = 0.1;
constexpr double kNormTolerance = 1e-3;
constexpr double kNormFailure = 1e-2;

std::vector<double> axis(double lo, double hi, std::size_t count) {
  if (count < 2 || !(hi > lo)) throw DomainError("husimi: grid axes need hi > lo and >= 2 points");
  return linspace(lo, hi, count);
}

// Coherent amplitudes <k|alpha> on the truncated space.
void coherent_amplitudes(Complex alpha, ComplexVector& c, bool& renormalized) {
  const Eigen::Index n = c.size();
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (Eigen::Index k = 1; k < n; ++k) c[k] = c[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  renormalized = std::norm(alpha) / static_cast<double>(n) > kRenormalizeThreshold;
  if (renormalized) {
    const double norm = c.norm();
    if (norm > 0.0) c /= norm;
  }
}

HusimiGrid evaluate(const QuantumState& rho, const GridSpec& spec) {
  HusimiGrid g;
  g.re_alpha = axis(spec.re_min, spec.re_max, spec.re_points);
  g.im_alpha = axis(spec.im_min, spec.im_max, spec.im_points);
  g.values.resize(spec.re_points * spec.im_points);
  const ComplexMatrix& r = rho.density();
  ComplexVector c(rho.dim());
  double sum = 0.0;
  g.min_raw = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.im_alpha.size(); ++i) {
    for (std::size_t j = 0; j < g.re_alpha.size(); ++j) {
      bool renormalized = false;
      coherent_amplitudes(Complex(g.re_alpha[j], g.im_alpha[i]), c, renormalized);
      if (renormalized) ++g.renormalized_points;
      const double raw = c.dot(r * c).real() / std::numbers::pi;
      g.min_raw = std::min(g.min_raw, raw);
      const double q = std::max(0.0, raw);
      g.values[i * g.re_alpha.size() + j] = q;
      sum += q;
    }
  }
  const double dre = g.re_alpha[1] - g.re_alpha[0];
  const double dim = g.im_alpha[1] - g.im_alpha[0];
  g.normalization = sum * dre * dim;
  return g;
}

}  // namespace

GridSpec auto_grid(const QuantumState& rho) {
  const QuadratureStats s = quadrature_stats(rho, 0.0);
  // Q adds vacuum noise: Var(Re alpha) = (var_x + 1/2)/2.
  const double sd = std::sqrt(0.5 * (std::max(s.var_x, s.var_p) + 0.5));
  const double cx = s.mean_x / std::numbers::sqrt2;
  const double cp = s.mean_p / std::numbers::sqrt2;
  // Coherent states much beyond |alpha|^2 ~ N are not representable; renormalising them there
  // inflates Q, so the window stops at sqrt(N) (never narrower than the default).
  const double reach = std::sqrt(static_cast<double>(rho.dim()));
  const double half = std::max(4.0, std::min(6.0 * sd, reach));
  constexpr double kSpacing = 0.04;
  const auto points = static_cast<std::size_t>(std::ceil(2.0 * half / kSpacing)) + 1;
  GridSpec spec;
  spec.re_min = cx - half;
  spec.re_max = cx + half;
  spec.im_min = cp - half;
  spec.im_max = cp + half;
  spec.re_points = points;
  spec.im_points = points;
  return spec;
}

HusimiGrid husimi(const QuantumState& rho, const GridSpec& spec) {
  GridSpec current = spec;
  HusimiGrid g = evaluate(rho, current);
  // Only missing mass is fixed by widening; excess comes from renormalised edge points.
  while (current.auto_extend && g.normalization < 1.0 - kNormTolerance &&
         g.extensions < current.max_extensions) {
    // Grow each axis by half its width, keeping the spacing.
    const double dre = (current.re_max - current.re_min) / static_cast<double>(current.re_points - 1);
    const double dim = (current.im_max - current.im_min) / static_cast<double>(current.im_points - 1);
    const auto grow_re = static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(current.re_points - 1)));
    const auto grow_im = static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(current.im_points - 1)));
    current.re_min -= static_cast<double>(grow_re) * dre;
    current.re_max += static_cast<double>(grow_re) * dre;
    current.im_min -= static_cast<double>(grow_im) * dim;
    current.im_max += static_cast<double>(grow_im) * dim;
    current.re_points += 2 * grow_re;
    current.im_points += 2 * grow_im;
    const int done = g.extensions + 1;
    g = evaluate(rho, current);
    g.extensions = done;
  }
  if (std::abs(g.normalization - 1.0) > kNormFailure) {
    throw ResolutionError("husimi: grid normalisation " + std::to_string(g.normalization) +
                          " is off by more than 1e-2");
  }
  return g;
}

double husimi_point(const QuantumState& rho, Complex alpha) {
  ComplexVector c(rho.dim());
  bool renormalized = false;
  coherent_amplitudes(alpha, c, renormalized);
  return std::max(0.0, c.dot(rho.density() * c).real() / std::numbers::pi);
}

HusimiMoments husimi_moments(const HusimiGrid& grid) {
  HusimiMoments m;
  double w = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < grid.im_alpha.size(); ++i) {
    for (std::size_t j = 0; j < grid.re_alpha.size(); ++j) {
      const double q = grid.at(i, j);
      w += q;
      sx += q * grid.re_alpha[j];
      sy += q * grid.im_alpha[i];
      m.max_value = std::max(m.max_value, q);
    }
  }
  if (!(w > 0.0)) throw ResolutionError("husimi_moments: grid carries no weight");
  m.mean_re = sx / w;
  m.mean_im = sy / w;
  double cxx = 0.0, cyy = 0.0, cxy = 0.0;
  for (std::size_t i = 0; i < grid.im_alpha.size(); ++i) {
    const double dy = grid.im_alpha[i] - m.mean_im;
    for (std::size_t j = 0; j < grid.re_alpha.size(); ++j) {
      const double q = grid.at(i, j);
      const double dx = grid.re_alpha[j] - m.mean_re;
      cxx += q * dx * dx;
      cyy += q * dy * dy;
      cxy += q * dx * dy;
    }
  }
  cxx /= w;
  cyy /= w;
  cxy /= w;
  const double mid = 0.5 * (cxx + cyy);
  const double rad = std::hypot(0.5 * (cxx - cyy), cxy);
  m.major_variance = mid + rad;
  m.minor_variance = mid - rad;
  m.major_angle = 0.5 * std::atan2(2.0 * cxy, cxx - cyy);
  return m;
}

QuadratureStats quadrature_stats(const QuantumState& rho, double theta) {
  const Quadratures q = quadrature_ops(theta, rho.space());
  QuadratureStats s;
  s.mean_x = rho.expect(q.x).real();
  s.mean_p = rho.expect(q.p).real();
  s.var_x = rho.expect(q.x * q.x).real() - s.mean_x * s.mean_x;
  s.var_p = rho.expect(q.p * q.p).real() - s.mean_p * s.mean_p;
  s.uncertainty = std::sqrt(std::max(0.0, s.var_x) * std::max(0.0, s.var_p));
  return s;
}

}  // namespace pep
