#pragma once

// Lindblad dynamics on the truncated Fock space
//   d rho/dt = -i[H, rho] + gamma (b rho b^dag - {b^dag b, rho}/2)
// with rho column-stacked: vec(rho)[i + N j] = rho(i, j).

#include <span>
#include <vector>

#include "pep/fock.hpp"
#include "pep/numerics.hpp"

namespace pep {

/// Default memory guard on the truncation used to build a Liouvillian.
inline constexpr int kDefaultMaxLevels = 80;

/// Largest truncation for which dense() is allowed (1600 x 1600).
inline constexpr int kDefaultDenseLevels = 40;

ComplexVector vectorize(const ComplexMatrix& rho);
ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index n);

/// One parity sector of the Liouvillian. H and the jump operator both conserve (i + j) mod 2,
/// so the superoperator splits into an even block (holding every density matrix) and an odd
/// block (holding b rho and the like).
struct ParityBlock {
  int parity = 0;
  std::vector<Eigen::Index> indices;  // positions in the full vec(rho)
  SparseComplexMatrix matrix;
};

class Liouvillian {
 public:
  Liouvillian(const ModelParams& params, FockSpace space, int max_levels = kDefaultMaxLevels);

  const ModelParams& params() const { return params_; }
  FockSpace space() const { return space_; }
  Eigen::Index dim() const { return matrix_.rows(); }
  const SparseComplexMatrix& matrix() const { return matrix_; }

  /// Dense copy; CapacityError above max_levels (default 40).
  ComplexMatrix dense(int max_levels = kDefaultDenseLevels) const;

  /// Restriction to the (i + j) mod 2 == parity sector.
  ParityBlock block(int parity) const;

  /// max|L| over stored entries.
  double max_entry() const;

 private:
  ModelParams params_;
  FockSpace space_;
  SparseComplexMatrix matrix_;
};

Liouvillian build_liouvillian(const ModelParams& params, FockSpace space,
                              int max_levels = kDefaultMaxLevels);

// ---------------------------------------------------------------------------
// Time evolution

struct EvolveOptions {
  OdeOptions ode{};
  /// Evolution stops with TruncationBreachError once <n> exceeds this fraction of N.
  double breach_fraction = 0.5;
  StateTolerance tolerance = kEvolvedStateTolerance;
};

/// Snapshots of rho(t) at each time in t_grid (the first entry is the initial time).
std::vector<QuantumState> evolve(const QuantumState& rho0, const Liouvillian& L,
                                 std::span<const double> t_grid, const EvolveOptions& options = {});

// ---------------------------------------------------------------------------
// Steady state

struct SteadyState {
  QuantumState state;
  /// max|L vec(rho)|.
  double residual = 0.0;
  /// Estimate of the eigenvalue of L next closest to zero, from deflated inverse iteration.
  Complex next_eigenvalue{};
};

inline constexpr double kSteadyResidualTolerance = 1e-9;
inline constexpr double kZeroEigenvalueTolerance = 1e-9;

/// Null vector of L by shifted inverse iteration on the even parity block, normalised to
/// unit trace. Throws DegeneracyError when a second eigenvalue sits within 1e-9 of zero and
/// ConvergenceError when the residual exceeds 1e-9.
SteadyState steady_state_report(const Liouvillian& L);

QuantumState steady_state(const Liouvillian& L);

/// Tr(rho^2).
double purity(const QuantumState& rho);

// ---------------------------------------------------------------------------
// Two-time correlators (quantum regression)

enum class CorrelatorKind {
  g1_unnormalized,  // <b^dag(t) b(t + tau)>
  g2_unnormalized   // <b^dag(t) b^dag(t + tau) b(t + tau) b(t)>
};

struct CorrelatorTrace {
  CorrelatorKind kind = CorrelatorKind::g1_unnormalized;
  std::vector<double> taus;
  std::vector<Complex> values;
  /// values divided by <n>_ss (g1) or <n>_ss^2 (g2).
  std::vector<Complex> normalized;
  double steady_population = 0.0;
};

CorrelatorTrace regression_correlator(const Liouvillian& L, CorrelatorKind kind,
                                      std::span<const double> tau_grid,
                                      const OdeOptions& options = {});

/// Same, reusing an already computed steady state.
CorrelatorTrace regression_correlator(const Liouvillian& L, const QuantumState& steady,
                                      CorrelatorKind kind, std::span<const double> tau_grid,
                                      const OdeOptions& options = {});

// ---------------------------------------------------------------------------
// Emission spectrum

inline constexpr double kDefaultTauStep = 0.01;
inline constexpr double kMinTauMax = 40.0;

struct FrequencyTrace {
  std::vector<double> omegas;
  std::vector<double> values;
  double tau_max = 0.0;
  double tau_step = 0.0;
  /// Trapezoid integral of the numeric spectrum over the grid plus the 1/omega^4 tail beyond it.
  double integral = 0.0;
  /// |g1(tau_max)| relative to g1(0).
  double tail = 0.0;
};

/// Slowest decay rate of the first-moment dynamics, gamma/2 - Gamma above the EP and gamma/2
/// otherwise (the harmonic rates; U only shifts them).
double slowest_coherence_rate(const ModelParams& params);

/// tau window used when the caller passes tau_max <= 0: max(40, 20 / slowest rate).
double default_tau_max(const ModelParams& params);

/// S(omega) = Re int_0^inf <b^dag(0) b(tau)> e^{i omega tau} d tau / (pi <n>), by Filon
/// quadrature of the regression correlator sampled every tau_step. WindowingError when
/// |g1(tau_max)| > 1e-8.
FrequencyTrace spectrum_numeric(const Liouvillian& L, std::span<const double> omega_grid,
                                double tau_max = 0.0, double tau_step = kDefaultTauStep,
                                const OdeOptions& options = {});

/// Spectrum from an already sampled normalised g1 trace on a uniform grid from 0.
FrequencyTrace spectrum_from_correlator(const CorrelatorTrace& g1,
                                        std::span<const double> omega_grid);

}  // namespace pep
