#pragma once

// Dense complex linear algebra, adaptive ODE integration and log-space
// fitting. Everything here is a pure function of its arguments.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace pep {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using SparseComplexMatrix = Eigen::SparseMatrix<Complex>;

inline constexpr Complex kI{0.0, 1.0};

/// Largest entry modulus, max|A|.
double max_abs(const ComplexMatrix& a);

/// max|A - A^dagger|.
double hermiticity_defect(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// Eigen decomposition

struct EigenSystem {
  ComplexVector values;
  /// Column k is the unit eigenvector for values[k]; empty when vectors were not requested.
  ComplexMatrix vectors;
  /// coalescing[k] is set when values[k] sits within the degeneracy tolerance of another
  /// eigenvalue, or its eigenvector is numerically parallel to another one.
  std::vector<bool> coalescing;

  bool any_coalescing() const;
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
};

inline constexpr double kCoalescenceTolerance = 1e-8;

/// Full eigen decomposition of a general square complex matrix (Hessenberg reduction
/// followed by shifted QR on the Schur form).
///
/// Values are sorted by descending real part, ties broken by descending imaginary part.
/// Each eigenvector has unit norm and its first non-negligible component is real positive.
EigenSystem eig_general(const ComplexMatrix& a, bool compute_vectors = true);

/// Largest |v_i^dagger v_j| over distinct pairs of unit columns.
double max_eigenvector_overlap(const ComplexMatrix& unit_columns);

/// Rank of `a` counting singular values above rel_tol * sigma_max.
int numeric_rank(const ComplexMatrix& a, double rel_tol);

// ---------------------------------------------------------------------------
// Linear solve

inline constexpr double kMaxConditionNumber = 1e12;

/// Solves A x = b with partial-pivot LU. Throws SingularityError when the reciprocal
/// condition estimate drops below 1/kMaxConditionNumber.
ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b);

// ---------------------------------------------------------------------------
// ODE integration (Dormand-Prince 5(4), PI step control, 4th-order dense output)

using VectorField = std::function<void(double t, const ComplexVector& y, ComplexVector& dydt)>;
using SampleObserver = std::function<void(std::size_t index, double t, const ComplexVector& y)>;

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 picks a step from the local derivative scale
  double max_step = 0.0;      // 0 means unbounded
  std::size_t max_steps = 5'000'000;
};

struct OdeSolution {
  std::vector<double> times;
  std::vector<ComplexVector> states;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

struct OdeStats {
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
  std::size_t rhs_evaluations = 0;
};

/// Integrates y' = f(t, y) from sample_times.front() and reports the state at every sample
/// time through `observe`. sample_times must be finite and strictly increasing.
OdeStats integrate_ode(const VectorField& f, const ComplexVector& y0,
                       std::span<const double> sample_times, const OdeOptions& options,
                       const SampleObserver& observe);

/// Convenience overload that stores every sampled state.
OdeSolution integrate_ode(const VectorField& f, const ComplexVector& y0,
                          std::span<const double> sample_times, const OdeOptions& options = {});

// ---------------------------------------------------------------------------
// Log-space least squares

enum class FitModel {
  power,              // y = A / x^B
  exponential,        // y = A / B^x
  exponential_growth  // y = A * B^x
};

const char* to_string(FitModel model);

struct FitResult {
  FitModel model = FitModel::power;
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;  // RMS residual of log(y)
  std::vector<double> log_residuals;
};

FitResult least_squares_fit(FitModel model, std::span<const double> xs, std::span<const double> ys);

/// Model prediction for a fitted result.
double evaluate_fit(const FitResult& fit, double x);

// ---------------------------------------------------------------------------
// Grids

/// `count` evenly spaced points over [first, last] inclusive.
std::vector<double> linspace(double first, double last, std::size_t count);

bool strictly_increasing(std::span<const double> xs);

}  // namespace pep
