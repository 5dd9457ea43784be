#include "pep/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "pep/errors.hpp"
#include "pep/moments.hpp"

namespace pep {

ComplexVector liouvillian_eigenvalues(const Liouvillian& L, int max_levels) {
  if (L.space().n_levels() > max_levels) {
    throw CapacityError("Liouvillian spectrum with N=" + std::to_string(L.space().n_levels()) +
                        " exceeds the dense cap N <= " + std::to_string(max_levels));
  }
  const ParityBlock even = L.block(0);
  const ParityBlock odd = L.block(1);
  const EigenSystem a = eig_general(ComplexMatrix(even.matrix), false);
  const EigenSystem b = eig_general(ComplexMatrix(odd.matrix), false);

  // Merge through eig_general on the diagonal matrix so the ordering convention is shared.
  ComplexVector all(a.values.size() + b.values.size());
  all << a.values, b.values;
  return eig_general(ComplexMatrix(all.asDiagonal()), false).values;
}

GapResult gap_from_eigenvalues(const ComplexVector& eigenvalues) {
  GapResult out;
  out.gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
    const Complex lambda = eigenvalues[k];
    if (std::abs(lambda) <= kZeroEigenvalueTolerance) {
      ++out.zero_count;
      continue;
    }
    if (-lambda.real() < out.gap) {
      out.gap = -lambda.real();
      out.slowest = lambda;
    }
  }
  out.degenerate = out.zero_count != 1;
  if (!std::isfinite(out.gap)) throw DegeneracyError("gap: every eigenvalue is zero");
  return out;
}

GapResult gap(const Liouvillian& L, int max_levels) {
  return gap_from_eigenvalues(liouvillian_eigenvalues(L, max_levels));
}

LiouvillianReport liouvillian_report(const ModelParams& params, FockSpace space) {
  const Liouvillian L(params, space);
  LiouvillianReport r;
  r.params = params;
  r.n_levels = space.n_levels();
  r.eigenvalues = liouvillian_eigenvalues(L);
  r.gap = gap_from_eigenvalues(r.eigenvalues);
  const QuantumState rho = steady_state(L);
  r.steady_population = rho.population();
  r.purity = purity(rho);
  return r;
}

double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                       double* y_vertex) {
  const double d01 = (y1 - y0) / (x1 - x0);
  const double d12 = (y2 - y1) / (x2 - x1);
  const double curvature = (d12 - d01) / (x2 - x0);
  double x = x1;
  double y = y1;
  if (curvature > 0.0) {
    // About x1: y = y1 + s (x - x1) + curvature (x - x1)^2.
    const double slope_at_x1 = d01 + curvature * (x1 - x0);
    x = std::clamp(x1 - slope_at_x1 / (2.0 * curvature), x0, x2);
    y = y1 + slope_at_x1 * (x - x1) + curvature * (x - x1) * (x - x1);
  }
  if (y_vertex != nullptr) *y_vertex = y;
  return x;
}

namespace {

std::size_t argmin(const std::vector<double>& ys) {
  return static_cast<std::size_t>(std::min_element(ys.begin(), ys.end()) - ys.begin());
}

double gap_at(const ModelParams& base, double omega, int n, int max_levels) {
  const Liouvillian L(base.with_omega(omega), FockSpace(n), max_levels);
  return gap(L, max_levels).gap;
}

FitResult fit_dropping_outlier(FitModel model, const std::vector<double>& xs,
                               const std::vector<double>& ys, std::vector<bool>& used) {
  used.assign(xs.size(), true);
  FitResult fit = least_squares_fit(model, xs, ys);
  if (xs.size() < 4) return fit;
  double rest = 0.0;
  for (std::size_t k = 1; k < xs.size(); ++k) rest += fit.log_residuals[k] * fit.log_residuals[k];
  rest = std::sqrt(rest / static_cast<double>(xs.size() - 1));
  if (std::abs(fit.log_residuals[0]) > 3.0 * rest) {
    used[0] = false;
    const std::vector<double> xt(xs.begin() + 1, xs.end());
    const std::vector<double> yt(ys.begin() + 1, ys.end());
    fit = least_squares_fit(model, xt, yt);
  }
  return fit;
}

}  // namespace

ScalingStudy sweep_gap(const ModelParams& base, std::span<const double> omega_grid,
                       std::span<const int> n_values, const SweepOptions& options) {
  base.validate();
  if (omega_grid.size() < 3 || !strictly_increasing(omega_grid)) {
    throw DomainError("sweep_gap: need a strictly increasing grid of at least 3 drives");
  }
  if (n_values.empty()) throw DomainError("sweep_gap: no truncations given");
  for (std::size_t k = 1; k < n_values.size(); ++k) {
    if (n_values[k] <= n_values[k - 1]) throw DomainError("sweep_gap: N values must increase");
  }

  const std::size_t nw = omega_grid.size();
  const std::size_t nn = n_values.size();
  // Coarse scan: one job per (N, Omega) cell, merged by (N, Omega) order.
  const std::vector<double> coarse = parallel_map(nn * nw, options.jobs, [&](std::size_t cell) {
    return gap_at(base, omega_grid[cell % nw], n_values[cell / nw], options.max_levels);
  });

  ScalingStudy study;
  study.harmonic = base.u == 0.0;
  study.n_values.assign(n_values.begin(), n_values.end());
  study.curves.resize(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    GapCurve& c = study.curves[i];
    c.n_levels = n_values[i];
    c.omegas.assign(omega_grid.begin(), omega_grid.end());
    c.gaps.assign(coarse.begin() + static_cast<std::ptrdiff_t>(i * nw),
                  coarse.begin() + static_cast<std::ptrdiff_t>((i + 1) * nw));
    const std::size_t k = argmin(c.gaps);
    if (k == 0 || k + 1 == nw) {
      throw GridExtensionError("sweep_gap: gap minimum for N=" + std::to_string(c.n_levels) +
                               " lies on the grid boundary at Omega=" +
                               std::to_string(omega_grid[k]));
    }
  }

  // Zoom passes: refine every curve on an 11-point grid across its current bracket.
  std::vector<std::array<double, 3>> bx(nn), by(nn);
  for (std::size_t i = 0; i < nn; ++i) {
    const GapCurve& c = study.curves[i];
    const std::size_t k = argmin(c.gaps);
    bx[i] = {c.omegas[k - 1], c.omegas[k], c.omegas[k + 1]};
    by[i] = {c.gaps[k - 1], c.gaps[k], c.gaps[k + 1]};
  }
  constexpr std::size_t kZoomPoints = 11;
  for (int pass = 0; pass < options.zoom_passes; ++pass) {
    const std::vector<double> fine = parallel_map(nn * (kZoomPoints - 2), options.jobs, [&](std::size_t cell) {
      const std::size_t i = cell / (kZoomPoints - 2);
      const std::size_t j = cell % (kZoomPoints - 2) + 1;
      const double w = bx[i][0] + (bx[i][2] - bx[i][0]) * static_cast<double>(j) /
                                      static_cast<double>(kZoomPoints - 1);
      return gap_at(base, w, n_values[i], options.max_levels);
    });
    for (std::size_t i = 0; i < nn; ++i) {
      std::vector<double> xs(kZoomPoints), ys(kZoomPoints);
      for (std::size_t j = 0; j < kZoomPoints; ++j) {
        xs[j] = bx[i][0] + (bx[i][2] - bx[i][0]) * static_cast<double>(j) /
                               static_cast<double>(kZoomPoints - 1);
      }
      ys.front() = by[i][0];
      ys.back() = by[i][2];
      for (std::size_t j = 1; j + 1 < kZoomPoints; ++j) ys[j] = fine[i * (kZoomPoints - 2) + j - 1];
      std::size_t k = argmin(ys);
      k = std::clamp<std::size_t>(k, 1, kZoomPoints - 2);
      bx[i] = {xs[k - 1], xs[k], xs[k + 1]};
      by[i] = {ys[k - 1], ys[k], ys[k + 1]};
    }
  }

  std::vector<double> ns, minima, offsets;
  const double omega_c = derived_scales(base).omega_c;
  bool offsets_positive = true;
  for (std::size_t i = 0; i < nn; ++i) {
    GapCurve& c = study.curves[i];
    double y = 0.0;
    c.omega_at_min = parabola_vertex(bx[i][0], by[i][0], bx[i][1], by[i][1], bx[i][2], by[i][2], &y);
    c.gap_min = std::min(y, by[i][1]);
    if (!(c.gap_min > 0.0)) {
      throw NumericalFailure("sweep_gap: non-positive gap minimum for N=" + std::to_string(c.n_levels));
    }
    ns.push_back(static_cast<double>(c.n_levels));
    minima.push_back(c.gap_min);
    offsets.push_back(c.omega_at_min - omega_c);
    offsets_positive = offsets_positive && offsets.back() > 0.0;
  }

  if (nn >= 3) {
    const FitModel model = study.harmonic ? FitModel::power : FitModel::exponential;
    study.gap_fit = fit_dropping_outlier(model, ns, minima, study.used_in_fit);
    if (study.harmonic && offsets_positive) {
      std::vector<double> xs, ys;
      for (std::size_t i = 0; i < nn; ++i) {
        if (study.used_in_fit[i]) {
          xs.push_back(ns[i]);
          ys.push_back(offsets[i]);
        }
      }
      if (xs.size() >= 3) study.location_fit = least_squares_fit(FitModel::power, xs, ys);
    }
  } else {
    study.used_in_fit.assign(nn, false);
  }
  return study;
}

std::vector<PopulationRow> steady_population_vs_omega(const ModelParams& base,
                                                      std::span<const double> omega_grid,
                                                      std::span<const int> n_values,
                                                      std::size_t jobs, int max_levels) {
  base.validate();
  if (omega_grid.empty() || !strictly_increasing(omega_grid)) {
    throw DomainError("steady_population_vs_omega: grid must be non-empty and increasing");
  }
  const std::size_t nw = omega_grid.size();
  return parallel_map(nw * n_values.size(), jobs, [&](std::size_t cell) {
    const ModelParams p = base.with_omega(omega_grid[cell % nw]);
    const int n = n_values[cell / nw];
    PopulationRow row;
    row.omega = p.omega;
    row.n_levels = n;
    row.population = steady_state(Liouvillian(p, FockSpace(n), max_levels)).population();
    try {
      if (p.u == 0.0) {
        row.reference = population_steady(p);
      } else {
        row.reference = semiclassical_kerr_population(p);
      }
    } catch (const PhysicsRegimeError&) {
      row.reference.reset();
    }
    return row;
  });
}

}  // namespace pep
