#pragma once

// Truncated Fock space of the parametrically driven Kerr oscillator
//   H = Delta b^dag b + (Omega/2) e^{i theta} b^dag b^dag + (Omega/2) e^{-i theta} b b
//       + (U/2) b^dag b^dag b b
// All rates are in units of the loss rate gamma.

#include "pep/numerics.hpp"

namespace pep {

struct ModelParams {
  double delta = 1.5;  // detuning, >= 0
  double omega = 0.0;  // two-photon drive amplitude, >= 0
  double theta = 0.0;  // drive phase in [-pi, pi]
  double gamma = 1.0;  // loss rate, > 0
  double u = 0.0;      // Kerr strength, >= 0

  /// Throws DomainError when any invariant is violated.
  void validate() const;

  ModelParams with_omega(double value) const {
    ModelParams copy = *this;
    copy.omega = value;
    return copy;
  }
};

inline constexpr int kDefaultLevels = 40;

/// Number states |0>, ..., |N-1>.
class FockSpace {
 public:
  explicit FockSpace(int n_levels = kDefaultLevels);
  int n_levels() const { return n_levels_; }
  Eigen::Index dim() const { return n_levels_; }

 private:
  int n_levels_;
};

struct LadderOps {
  ComplexMatrix b;
  ComplexMatrix b_dagger;
};

/// b carries sqrt(n) on the first superdiagonal. [b, b^dag] is the identity except for the
/// last diagonal entry, which equals 1 - N on the truncated space.
LadderOps ladder_ops(FockSpace space);

ComplexMatrix number_op(FockSpace space);

ComplexMatrix hamiltonian(const ModelParams& params, FockSpace space);

struct Quadratures {
  ComplexMatrix x;
  ComplexMatrix p;
};

/// X = (e^{i theta/2} b^dag + e^{-i theta/2} b)/sqrt2, P = i(e^{i theta/2} b^dag - e^{-i theta/2} b)/sqrt2.
Quadratures quadrature_ops(double theta, FockSpace space);

/// Dense matrix exponential (Pade approximant with scaling and squaring).
ComplexMatrix expm(const ComplexMatrix& a);

// ---------------------------------------------------------------------------
// States

struct StateTolerance {
  double hermiticity = 1e-10;
  double trace = 1e-8;
  double min_eigenvalue = 1e-8;
};

/// Tolerances used on time-evolved snapshots.
inline constexpr StateTolerance kEvolvedStateTolerance{1e-8, 1e-6, 1e-6};

struct Physicality {
  double hermiticity_defect = 0.0;
  double trace_defect = 0.0;
  double min_eigenvalue = 0.0;
};

Physicality physicality(const ComplexMatrix& rho);

/// A density matrix that passed the physicality checks at construction time.
class QuantumState {
 public:
  explicit QuantumState(ComplexMatrix rho, StateTolerance tolerance = {});

  static QuantumState from_ket(const ComplexVector& ket);

  const ComplexMatrix& density() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }
  FockSpace space() const { return FockSpace(static_cast<int>(rho_.rows())); }
  const Physicality& checks() const { return checks_; }

  /// Tr(O rho).
  Complex expect(const ComplexMatrix& op) const;
  /// <b^dag b>.
  double population() const;

 private:
  ComplexMatrix rho_;
  Physicality checks_;
};

QuantumState state_vacuum(FockSpace space);
QuantumState state_fock(FockSpace space, int n);
/// Truncated coherent state; throws RangeError when the truncation drops more than 1e-8 of
/// the norm.
QuantumState state_coherent(FockSpace space, Complex alpha);
/// S_phi |n> with S_phi = exp(phi e^{-i theta} b b / 2 - phi e^{i theta} b^dag b^dag / 2).
QuantumState state_squeezed_number(FockSpace space, int n, double phi, double theta);

}  // namespace pep
