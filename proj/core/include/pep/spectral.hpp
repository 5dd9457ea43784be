#pragma once

// Liouvillian spectra: gap extraction, drive sweeps and finite-size scaling of the gap minimum.

#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "pep/lindblad.hpp"
#include "pep/numerics.hpp"

namespace pep {

/// All Liouvillian eigenvalues (values only), computed block by block over the two parity
/// sectors and merged in eig_general order. Dense work is capped at N <= max_levels.
ComplexVector liouvillian_eigenvalues(const Liouvillian& L, int max_levels = kDefaultDenseLevels);

struct GapResult {
  double gap = 0.0;
  /// Eigenvalues with |lambda| <= 1e-9.
  int zero_count = 0;
  /// The eigenvalue realising the gap.
  Complex slowest{};
  /// Set when zero_count != 1; the gap is then taken over the complement.
  bool degenerate = false;
};

GapResult gap_from_eigenvalues(const ComplexVector& eigenvalues);
GapResult gap(const Liouvillian& L, int max_levels = kDefaultDenseLevels);

struct LiouvillianReport {
  ModelParams params;
  int n_levels = 0;
  ComplexVector eigenvalues;
  GapResult gap;
  double steady_population = 0.0;
  double purity = 0.0;
};

LiouvillianReport liouvillian_report(const ModelParams& params, FockSpace space);

// ---------------------------------------------------------------------------
// Sweeps

struct GapCurve {
  int n_levels = 0;
  std::vector<double> omegas;
  std::vector<double> gaps;
  double omega_at_min = 0.0;
  double gap_min = 0.0;
};

struct SweepOptions {
  std::size_t jobs = 1;
  /// Extra passes on an 11-point grid spanning the bracket of the current minimum.
  int zoom_passes = 2;
  int max_levels = kDefaultDenseLevels;
};

struct ScalingStudy {
  bool harmonic = true;
  std::vector<int> n_values;
  std::vector<GapCurve> curves;
  /// gap_min versus N: power law for U = 0, exponential decay otherwise.
  FitResult gap_fit;
  /// Omega_at_min - Omega_c versus N as a power law, when every offset is positive.
  std::optional<FitResult> location_fit;
  /// Whether each N entered the fits (the smallest N is dropped when it is an outlier).
  std::vector<bool> used_in_fit;
};

/// Grid scan of the gap at each N, then quadratic refinement through the three points bracketing
/// the minimum. GridExtensionError when the minimum sits on the grid boundary.
ScalingStudy sweep_gap(const ModelParams& base, std::span<const double> omega_grid,
                       std::span<const int> n_values, const SweepOptions& options = {});

/// Vertex of the parabola through three points, clamped to [x0, x2].
double parabola_vertex(double x0, double y0, double x1, double y1, double x2, double y2,
                       double* y_vertex = nullptr);

struct PopulationRow {
  double omega = 0.0;
  int n_levels = 0;
  double population = 0.0;
  /// Closed-form harmonic steady state below Omega_c, or the semiclassical Kerr branch above.
  std::optional<double> reference;
};

/// Steady <b^dag b> on every (N, Omega) cell, ordered by N then Omega.
std::vector<PopulationRow> steady_population_vs_omega(const ModelParams& base,
                                                      std::span<const double> omega_grid,
                                                      std::span<const int> n_values,
                                                      std::size_t jobs = 1,
                                                      int max_levels = kDefaultMaxLevels);

// ---------------------------------------------------------------------------

/// Runs fn(0), ..., fn(count - 1) on up to `jobs` threads and returns the results by index.
/// The first exception by index is rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<std::optional<Result>> slots(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) {
      try {
        slots[k].emplace(fn(k));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, count));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace pep
