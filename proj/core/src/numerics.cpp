#include "pep/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

#include "pep/errors.hpp"

namespace pep {

double max_abs(const ComplexMatrix& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("hermiticity_defect: matrix is not square");
  return max_abs(a - a.adjoint());
}

bool EigenSystem::any_coalescing() const {
  return std::any_of(coalescing.begin(), coalescing.end(), [](bool c) { return c; });
}

namespace {

// Unit norm, first component above the noise floor made real positive.
void fix_phase(Eigen::Ref<ComplexVector> v) {
  const double norm = v.norm();
  if (norm == 0.0) return;
  v /= norm;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-10) {
      v *= std::conj(v[i]) / mag;
      v[i] = Complex(mag, 0.0);
      return;
    }
  }
}

extern "C" void zgeev_(const char* jobvl, const char* jobvr, const int* n, Complex* a,
                       const int* lda, Complex* w, Complex* vl, const int* ldvl, Complex* vr,
                       const int* ldvr, Complex* work, const int* lwork, double* rwork, int* info,
                       std::size_t jobvl_len, std::size_t jobvr_len);

// Hessenberg reduction and shifted QR (LAPACK zgeev).
void lapack_eig(const ComplexMatrix& a, bool compute_vectors, ComplexVector& values,
                ComplexMatrix& vectors) {
  const int n = static_cast<int>(a.rows());
  ComplexMatrix work_a = a;
  values.resize(n);
  if (compute_vectors) vectors.resize(n, n);
  const char jobvl = 'N';
  const char jobvr = compute_vectors ? 'V' : 'N';
  const int ldv = std::max(1, n);
  Complex dummy_vl;
  Complex* vr = compute_vectors ? vectors.data() : &dummy_vl;
  std::vector<double> rwork(static_cast<std::size_t>(2 * std::max(1, n)));
  int info = 0;
  int lwork = -1;
  Complex query;
  zgeev_(&jobvl, &jobvr, &n, work_a.data(), &ldv, values.data(), &dummy_vl, &ldv, vr, &ldv, &query,
         &lwork, rwork.data(), &info, 1, 1);
  lwork = std::max(1, static_cast<int>(query.real()));
  std::vector<Complex> work(static_cast<std::size_t>(lwork));
  zgeev_(&jobvl, &jobvr, &n, work_a.data(), &ldv, values.data(), &dummy_vl, &ldv, vr, &ldv,
         work.data(), &lwork, rwork.data(), &info, 1, 1);
  if (info != 0) {
    throw ConvergenceError("eig_general: shifted QR did not converge (info=" +
                               std::to_string(info) + ")",
                           max_abs(a));
  }
}

}  // namespace

EigenSystem eig_general(const ComplexMatrix& a, bool compute_vectors) {
  if (a.rows() != a.cols()) {
    throw DimensionError("eig_general: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()) + ", expected square");
  }
  if (!a.allFinite()) throw DomainError("eig_general: non-finite entries");

  const Eigen::Index n = a.rows();
  EigenSystem out;
  if (n == 0) return out;

  ComplexVector raw;
  ComplexMatrix raw_vectors;
  lapack_eig(a, compute_vectors, raw, raw_vectors);

  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  const double quantum = 1e-12 * scale;

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  auto key = [&](Eigen::Index k) { return std::round(raw[k].real() / quantum); };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index lhs, Eigen::Index rhs) {
    const double kl = key(lhs);
    const double kr = key(rhs);
    if (kl != kr) return kl > kr;
    return raw[lhs].imag() > raw[rhs].imag();
  });

  out.values.resize(n);
  if (compute_vectors) out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = raw[order[static_cast<std::size_t>(k)]];
    if (compute_vectors) {
      out.vectors.col(k) = raw_vectors.col(order[static_cast<std::size_t>(k)]);
      fix_phase(out.vectors.col(k));
    }
  }

  out.coalescing.assign(static_cast<std::size_t>(n), false);
  const double value_tol = kCoalescenceTolerance * scale;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      bool close = std::abs(out.values[i] - out.values[j]) < value_tol;
      if (!close && compute_vectors) {
        const double overlap = std::abs(out.vectors.col(i).dot(out.vectors.col(j)));
        close = overlap > 1.0 - kCoalescenceTolerance;
      }
      if (close) {
        out.coalescing[static_cast<std::size_t>(i)] = true;
        out.coalescing[static_cast<std::size_t>(j)] = true;
      }
    }
  }
  return out;
}

double max_eigenvector_overlap(const ComplexMatrix& unit_columns) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < unit_columns.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < unit_columns.cols(); ++j) {
      best = std::max(best, std::abs(unit_columns.col(i).dot(unit_columns.col(j))));
    }
  }
  return best;
}

int numeric_rank(const ComplexMatrix& a, double rel_tol) {
  if (a.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(a);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s[i] > rel_tol * s[0]) ++rank;
  }
  return rank;
}

ComplexVector solve_linear(const ComplexMatrix& a, const ComplexVector& b) {
  if (a.rows() != a.cols()) throw DimensionError("solve_linear: matrix is not square");
  if (a.rows() != b.size()) throw DimensionError("solve_linear: right-hand side has wrong length");
  if (!a.allFinite() || !b.allFinite()) throw DomainError("solve_linear: non-finite input");

  Eigen::PartialPivLU<ComplexMatrix> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond >= 1.0 / kMaxConditionNumber)) {
    throw SingularityError("solve_linear: matrix is singular or ill-conditioned (rcond=" +
                               std::to_string(rcond) + ")",
                           rcond);
  }
  ComplexVector x = lu.solve(b);
  const double residual = (a * x - b).norm();
  const double bound = 1e-10 * (a.norm() * x.norm() + b.norm());
  if (!(residual <= bound)) {
    throw ConvergenceError("solve_linear: residual above tolerance", residual);
  }
  return x;
}

const char* to_string(FitModel model) {
  switch (model) {
    case FitModel::power:
      return "power";
    case FitModel::exponential:
      return "exponential";
    case FitModel::exponential_growth:
      return "exponential_growth";
  }
  return "unknown";
}

FitResult least_squares_fit(FitModel model, std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw DimensionError("least_squares_fit: xs and ys differ in length");
  if (xs.size() < 3) throw DimensionError("least_squares_fit: need at least 3 points");
  for (double y : ys) {
    if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("least_squares_fit: ys must be positive");
  }

  // Every model is a straight line u = c0 + c1 * v in log space.
  const std::size_t n = xs.size();
  std::vector<double> v(n), u(n);
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = std::log(ys[i]);
    if (model == FitModel::power) {
      if (!(xs[i] > 0.0)) throw DomainError("least_squares_fit: power model needs xs > 0");
      v[i] = std::log(xs[i]);
    } else {
      v[i] = xs[i];
    }
  }
  const double mean_v = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  const double mean_u = std::accumulate(u.begin(), u.end(), 0.0) / static_cast<double>(n);
  double svv = 0.0, svu = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    svv += (v[i] - mean_v) * (v[i] - mean_v);
    svu += (v[i] - mean_v) * (u[i] - mean_u);
  }
  if (svv == 0.0) throw DomainError("least_squares_fit: xs are all equal");
  const double slope = svu / svv;
  const double intercept = mean_u - slope * mean_v;

  FitResult fit;
  fit.model = model;
  fit.a = std::exp(intercept);
  switch (model) {
    case FitModel::power:
      fit.b = -slope;
      break;
    case FitModel::exponential:
      fit.b = std::exp(-slope);
      break;
    case FitModel::exponential_growth:
      fit.b = std::exp(slope);
      break;
  }
  double ss = 0.0;
  fit.log_residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fit.log_residuals[i] = u[i] - (intercept + slope * v[i]);
    ss += fit.log_residuals[i] * fit.log_residuals[i];
  }
  fit.residual = std::sqrt(ss / static_cast<double>(n));
  return fit;
}

double evaluate_fit(const FitResult& fit, double x) {
  switch (fit.model) {
    case FitModel::power:
      return fit.a / std::pow(x, fit.b);
    case FitModel::exponential:
      return fit.a / std::pow(fit.b, x);
    case FitModel::exponential_growth:
      return fit.a * std::pow(fit.b, x);
  }
  return 0.0;
}

std::vector<double> linspace(double first, double last, std::size_t count) {
  std::vector<double> out(count);
  if (count == 1) {
    out[0] = first;
    return out;
  }
  const double step = (last - first) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out[i] = first + step * static_cast<double>(i);
  if (count > 1) out.back() = last;
  return out;
}

bool strictly_increasing(std::span<const double> xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) return false;
  }
  return true;
}

}  // namespace pep
