#pragma once

// Closed-form results for the harmonic (U = 0) parametric oscillator: first and second
// moment systems, the exceptional point at Omega = Delta, the critical amplitude
// Omega_c = sqrt(Delta^2 + (gamma/2)^2), populations, coherence functions, spectra and
// quadrature variances. Rates in units of gamma, times in units of 1/gamma.

#include <array>
#include <optional>
#include <string_view>

#include "pep/fock.hpp"
#include "pep/numerics.hpp"

namespace pep {

/// Tolerance for treating Omega as exactly at the EP or at Omega_c (absolute, in gamma).
inline constexpr double kPointTolerance = 1e-12;

/// Analytic values above this magnitude raise UnboundedError.
inline constexpr double kDivergenceCap = 1e9;

struct DerivedScales {
  std::optional<double> omega_tilde;  // sqrt(Delta^2 - Omega^2), Omega <= Delta
  std::optional<double> big_gamma;    // sqrt(Omega^2 - Delta^2), Omega >= Delta
  double omega_ep = 0.0;
  double omega_c = 0.0;

  /// Squeezing parameter ln((Delta + Omega)/(Delta - Omega))/4; DomainError unless Omega < Delta.
  double phi() const;

  double delta = 0.0;
  double omega = 0.0;
};

DerivedScales derived_scales(const ModelParams& params);

enum class RegimeTag { below_ep, at_ep, above_ep, at_critical, unstable };

std::string_view to_string(RegimeTag tag);

struct Regime {
  RegimeTag tag = RegimeTag::below_ep;
  double distance_ep = 0.0;        // Omega - Omega_EP
  double distance_critical = 0.0;  // Omega - Omega_c
};

Regime classify_regime(const ModelParams& params);

// ---------------------------------------------------------------------------
// Moment systems

/// i d/dt (<b>, <b^dag>) = H2 (<b>, <b^dag>).
struct FirstMomentSystem {
  ComplexMatrix h2;
  /// Closed-form omega_+ and omega_-.
  std::array<Complex, 2> omega{};
  /// Closed-form eigenvectors alpha_+, alpha_- as unit columns.
  ComplexMatrix alpha;
  EigenSystem numeric;
  /// |<alpha_+|alpha_->| of the closed-form pair; 1 at the EP.
  double eigenvector_overlap = 0.0;
};

FirstMomentSystem first_moment_system(const ModelParams& params);

/// i d/dt (<b^dag b>, <b b>, <b^dag b^dag>) = M3 (...) + P3.
struct SecondMomentSystem {
  ComplexMatrix m3;
  ComplexVector p3;
  /// Closed-form lambda_3, lambda_+, lambda_-.
  std::array<Complex, 3> lambda{};
  /// Closed-form eigenvectors beta_3, beta_+, beta_- as unit columns.
  ComplexMatrix beta;
  EigenSystem numeric;
  /// Numeric rank of `beta` at relative tolerance 1e-6; drops to 1 at the EP.
  int eigenvector_rank = 3;
};

SecondMomentSystem second_moment_system(const ModelParams& params);

// ---------------------------------------------------------------------------
// Observables

double population_steady(const ModelParams& params);

/// n(t) from a state with population n0 and vanishing <b b>, e.g. a Fock state.
double population_transient(const ModelParams& params, double n0, double t);

/// Normalised first-order coherence g1(tau).
double g1(const ModelParams& params, double tau);

/// Normalised second-order coherence g2(tau).
double g2(const ModelParams& params, double tau);

/// g2(0) = 2 + (Omega_c/Omega)^2.
double g2_zero(const ModelParams& params);

struct SpectrumValue {
  double total = 0.0;
  /// Two-line decomposition S = S_+ + S_-; absent at the EP where the split is singular.
  /// S_+ continues into the narrow line with rate gamma/2 - Gamma above the EP; below the EP it
  /// is the line centred at -omega_tilde.
  std::optional<double> s_plus;
  std::optional<double> s_minus;
};

/// Normalised emission spectrum S(omega), integrating to one over the real line.
SpectrumValue spectrum(const ModelParams& params, double frequency);

struct QuadratureVariances {
  double var_x = 0.0;
  double var_p = 0.0;
};

QuadratureVariances quadrature_variances_steady(const ModelParams& params);

struct VarianceMinimum {
  double omega = 0.0;
  double var_x = 0.0;
};

/// Position-variance minimum over Omega at fixed Delta, gamma.
VarianceMinimum position_variance_minimum(const ModelParams& params);

/// Semiclassical Kerr steady state n_I = (sqrt(Delta^2 + Omega^2 - Omega_c^2) - Delta)/U.
double semiclassical_kerr_population(const ModelParams& params);

}  // namespace pep
