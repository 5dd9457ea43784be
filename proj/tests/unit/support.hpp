#pragma once

// Shared helpers: a seeded generator for property tests and a fixed-step RK4 used as an
// independent integrator for oracles.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>

#include "pep/fock.hpp"
#include "pep/numerics.hpp"

namespace testing_support {

using pep::Complex;
using pep::ComplexMatrix;
using pep::ComplexVector;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  Complex complex_normal() {
    std::normal_distribution<double> d;
    return {d(rng_), d(rng_)};
  }

  /// Random density matrix: a mixture of `rank` random kets with random weights.
  ComplexMatrix density(int n, int rank) {
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    double total = 0.0;
    for (int r = 0; r < rank; ++r) {
      ComplexVector v(n);
      for (int i = 0; i < n; ++i) v[i] = complex_normal() * std::exp(-0.15 * i);
      v.normalize();
      const double w = uniform(0.1, 1.0);
      rho += w * v * v.adjoint();
      total += w;
    }
    rho /= total;
    return 0.5 * (rho + rho.adjoint());
  }

  /// Harmonic model parameters strictly below the critical drive.
  pep::ModelParams stable_params() {
    pep::ModelParams p;
    p.delta = uniform(0.3, 3.0);
    const double omega_c = std::sqrt(p.delta * p.delta + 0.25);
    p.omega = uniform(0.05, 0.97) * omega_c;
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

/// Classical RK4 with a fixed step; returns y(t_end).
inline ComplexVector rk4(const std::function<ComplexVector(const ComplexVector&)>& f, ComplexVector y,
                         double t_end, double h) {
  const int steps = static_cast<int>(std::ceil(t_end / h - 1e-12));
  if (steps == 0) return y;
  const double dt = t_end / steps;
  for (int s = 0; s < steps; ++s) {
    const ComplexVector k1 = f(y);
    const ComplexVector k2 = f(y + 0.5 * dt * k1);
    const ComplexVector k3 = f(y + 0.5 * dt * k2);
    const ComplexVector k4 = f(y + dt * k3);
    y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return y;
}

}  // namespace testing_support
