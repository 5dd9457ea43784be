#include "pep/fock.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "pep/errors.hpp"

namespace pep {

void ModelParams::validate() const {
  const bool finite = std::isfinite(delta) && std::isfinite(omega) && std::isfinite(theta) &&
                      std::isfinite(gamma) && std::isfinite(u);
  if (!finite) throw DomainError("model parameters must be finite");
  if (!(gamma > 0.0)) throw DomainError("gamma must be positive");
  if (delta < 0.0) throw DomainError("delta must be non-negative");
  if (omega < 0.0) throw DomainError("omega must be non-negative");
  if (u < 0.0) throw DomainError("u must be non-negative");
  if (std::abs(theta) > std::numbers::pi) throw DomainError("theta must lie in [-pi, pi]");
}

FockSpace::FockSpace(int n_levels) : n_levels_(n_levels) {
  if (n_levels < 2) {
    throw DimensionError("Fock truncation needs at least 2 levels, got " + std::to_string(n_levels));
  }
}

LadderOps ladder_ops(FockSpace space) {
  const Eigen::Index n = space.dim();
  LadderOps ops{ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)};
  for (Eigen::Index k = 1; k < n; ++k) ops.b(k - 1, k) = std::sqrt(static_cast<double>(k));
  ops.b_dagger = ops.b.adjoint();
  return ops;
}

ComplexMatrix number_op(FockSpace space) {
  const Eigen::Index n = space.dim();
  ComplexMatrix num = ComplexMatrix::Zero(n, n);
  for (Eigen::Index k = 0; k < n; ++k) num(k, k) = static_cast<double>(k);
  return num;
}

ComplexMatrix hamiltonian(const ModelParams& params, FockSpace space) {
  params.validate();
  const Eigen::Index n = space.dim();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  const Complex drive = 0.5 * params.omega * std::exp(kI * params.theta);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double kd = static_cast<double>(k);
    h(k, k) = params.delta * kd + 0.5 * params.u * kd * (kd - 1.0);
    if (k + 2 < n) {
      // <k+2| b^dag b^dag |k> = sqrt((k+1)(k+2))
      const double amp = std::sqrt((kd + 1.0) * (kd + 2.0));
      h(k + 2, k) = drive * amp;
      h(k, k + 2) = std::conj(drive) * amp;
    }
  }
  return h;
}

Quadratures quadrature_ops(double theta, FockSpace space) {
  const LadderOps ops = ladder_ops(space);
  const Complex up = std::exp(kI * (0.5 * theta));
  const Complex down = std::conj(up);
  const double s = 1.0 / std::numbers::sqrt2;
  Quadratures q;
  q.x = s * (up * ops.b_dagger + down * ops.b);
  q.p = (s * kI) * (up * ops.b_dagger - down * ops.b);
  return q;
}

ComplexMatrix expm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("expm: matrix is not square");
  return a.exp();
}

Physicality physicality(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols()) throw DimensionError("density matrix is not square");
  Physicality out;
  out.hermiticity_defect = hermiticity_defect(rho);
  out.trace_defect = std::abs(rho.trace() - 1.0);
  const ComplexMatrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

QuantumState::QuantumState(ComplexMatrix rho, StateTolerance tolerance)
    : rho_(std::move(rho)), checks_(physicality(rho_)) {
  if (!rho_.allFinite()) throw PhysicalityError("density matrix has non-finite entries");
  if (checks_.hermiticity_defect > tolerance.hermiticity) {
    throw PhysicalityError("density matrix is not Hermitian (defect " +
                           std::to_string(checks_.hermiticity_defect) + ")");
  }
  if (checks_.trace_defect > tolerance.trace) {
    throw PhysicalityError("density matrix trace differs from 1 by " +
                           std::to_string(checks_.trace_defect));
  }
  if (checks_.min_eigenvalue < -tolerance.min_eigenvalue) {
    throw PhysicalityError("density matrix has eigenvalue " +
                           std::to_string(checks_.min_eigenvalue));
  }
}

QuantumState QuantumState::from_ket(const ComplexVector& ket) {
  return QuantumState(ket * ket.adjoint());
}

Complex QuantumState::expect(const ComplexMatrix& op) const {
  if (op.rows() != rho_.rows() || op.cols() != rho_.cols()) {
    throw DimensionError("operator and state dimensions differ");
  }
  // Tr(O rho) = sum_ij O_ij rho_ji
  return (op.transpose().cwiseProduct(rho_)).sum();
}

double QuantumState::population() const {
  double n = 0.0;
  for (Eigen::Index k = 0; k < rho_.rows(); ++k) n += static_cast<double>(k) * rho_(k, k).real();
  return n;
}

QuantumState state_vacuum(FockSpace space) { return state_fock(space, 0); }

QuantumState state_fock(FockSpace space, int n) {
  if (n < 0 || n >= space.n_levels()) {
    throw RangeError("Fock state |" + std::to_string(n) + "> outside a space of " +
                     std::to_string(space.n_levels()) + " levels");
  }
  ComplexVector ket = ComplexVector::Zero(space.dim());
  ket[n] = 1.0;
  return QuantumState::from_ket(ket);
}

QuantumState state_coherent(FockSpace space, Complex alpha) {
  ComplexVector ket(space.dim());
  ket[0] = std::exp(-0.5 * std::norm(alpha));
  for (Eigen::Index k = 1; k < space.dim(); ++k) {
    ket[k] = ket[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  }
  const double lost = 1.0 - ket.squaredNorm();
  if (lost > 1e-8) {
    throw RangeError("coherent amplitude too large for the truncation (norm loss " +
                     std::to_string(lost) + ")");
  }
  return QuantumState::from_ket(ket);
}

QuantumState state_squeezed_number(FockSpace space, int n, double phi, double theta) {
  if (n < 0 || n >= space.n_levels()) {
    throw RangeError("squeezed number state index " + std::to_string(n) + " outside the space");
  }
  const LadderOps ops = ladder_ops(space);
  const ComplexMatrix bb = ops.b * ops.b;
  const ComplexMatrix bdbd = ops.b_dagger * ops.b_dagger;
  const ComplexMatrix generator =
      (0.5 * phi) * (std::exp(-kI * theta) * bb - std::exp(kI * theta) * bdbd);
  const ComplexMatrix squeeze = expm(generator);
  ComplexVector ket = squeeze.col(n);
  ket /= ket.norm();
  return QuantumState::from_ket(ket);
}

}  // namespace pep
