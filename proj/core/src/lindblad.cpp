#include "pep/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/SparseLU>

#include "pep/errors.hpp"
#include "pep/moments.hpp"

namespace pep {

namespace {

using Triplet = Eigen::Triplet<Complex>;

Eigen::Index vec_index(Eigen::Index i, Eigen::Index j, Eigen::Index n) { return i + n * j; }

// Tr(op * X) with X column-stacked, touching only the nonzeros of op.
Complex trace_product(const ComplexMatrix& op, const ComplexVector& x, Eigen::Index n) {
  Complex acc = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Complex o = op(i, k);
      if (o != 0.0) acc += o * x[vec_index(k, i, n)];
    }
  }
  return acc;
}

ComplexMatrix hermitian_part(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

using RowSparse = Eigen::SparseMatrix<Complex, Eigen::RowMajor>;

// The parity sector holding `seed`, or the whole space when the seed mixes sectors.
struct Sector {
  std::vector<Eigen::Index> indices;
  RowSparse matrix;
};

Sector sector_for(const Liouvillian& L, const ComplexVector& seed) {
  const Eigen::Index n = L.space().dim();
  bool has[2] = {false, false};
  for (Eigen::Index k = 0; k < seed.size(); ++k) {
    if (seed[k] != 0.0) has[(k % n + k / n) % 2] = true;
  }
  Sector s;
  if (has[0] && has[1]) {
    s.indices.resize(static_cast<std::size_t>(seed.size()));
    for (Eigen::Index k = 0; k < seed.size(); ++k) s.indices[static_cast<std::size_t>(k)] = k;
    s.matrix = L.matrix();
    return s;
  }
  ParityBlock b = L.block(has[1] ? 1 : 0);
  s.indices = std::move(b.indices);
  s.matrix = b.matrix;
  return s;
}

// Integrates the seed inside its sector and hands the observer the full-space vector.
OdeStats propagate(const Liouvillian& L, const ComplexVector& seed, std::span<const double> times,
                   const OdeOptions& options, const SampleObserver& observe) {
  const Sector sector = sector_for(L, seed);
  const auto m = static_cast<Eigen::Index>(sector.indices.size());
  ComplexVector local(m);
  for (Eigen::Index k = 0; k < m; ++k) local[k] = seed[sector.indices[static_cast<std::size_t>(k)]];
  const RowSparse& a = sector.matrix;
  const VectorField f = [&a](double, const ComplexVector& y, ComplexVector& dy) { dy.noalias() = a * y; };
  ComplexVector full = ComplexVector::Zero(seed.size());
  return integrate_ode(f, local, times, options,
                       [&](std::size_t index, double t, const ComplexVector& y) {
                         for (Eigen::Index k = 0; k < m; ++k) {
                           full[sector.indices[static_cast<std::size_t>(k)]] = y[k];
                         }
                         observe(index, t, full);
                       });
}

}  // namespace

ComplexVector vectorize(const ComplexMatrix& rho) {
  return Eigen::Map<const ComplexVector>(rho.data(), rho.size());
}

ComplexMatrix unvectorize(const ComplexVector& v, Eigen::Index n) {
  if (v.size() != n * n) throw DimensionError("unvectorize: length is not N^2");
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

Liouvillian::Liouvillian(const ModelParams& params, FockSpace space, int max_levels)
    : params_(params), space_(space) {
  params.validate();
  const Eigen::Index n = space.dim();
  if (space.n_levels() > max_levels) {
    throw CapacityError("Liouvillian with N=" + std::to_string(space.n_levels()) +
                        " exceeds the capacity cap N <= " + std::to_string(max_levels));
  }
  const ComplexMatrix h = hamiltonian(params, space);
  const double g = params.gamma;

  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(n * n * 8));
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = vec_index(i, j, n);
      // -i H rho
      for (Eigen::Index k = std::max<Eigen::Index>(0, i - 2); k <= std::min(n - 1, i + 2); ++k) {
        if (h(i, k) != 0.0) triplets.emplace_back(row, vec_index(k, j, n), -kI * h(i, k));
      }
      // +i rho H
      for (Eigen::Index k = std::max<Eigen::Index>(0, j - 2); k <= std::min(n - 1, j + 2); ++k) {
        if (h(k, j) != 0.0) triplets.emplace_back(row, vec_index(i, k, n), kI * h(k, j));
      }
      // gamma b rho b^dag: b(i, i+1) = sqrt(i+1)
      if (i + 1 < n && j + 1 < n) {
        const double amp = std::sqrt(static_cast<double>((i + 1) * (j + 1)));
        triplets.emplace_back(row, vec_index(i + 1, j + 1, n), g * amp);
      }
      // -gamma/2 (n rho + rho n)
      const double loss = -0.5 * g * static_cast<double>(i + j);
      if (loss != 0.0) triplets.emplace_back(row, row, loss);
    }
  }
  matrix_.resize(n * n, n * n);
  matrix_.setFromTriplets(triplets.begin(), triplets.end());
  matrix_.makeCompressed();
}

ComplexMatrix Liouvillian::dense(int max_levels) const {
  if (space_.n_levels() > max_levels) {
    throw CapacityError("dense Liouvillian with N=" + std::to_string(space_.n_levels()) +
                        " exceeds the cap N <= " + std::to_string(max_levels));
  }
  return ComplexMatrix(matrix_);
}

ParityBlock Liouvillian::block(int parity) const {
  if (parity != 0 && parity != 1) throw DomainError("parity must be 0 or 1");
  const Eigen::Index n = space_.dim();
  ParityBlock out;
  out.parity = parity;
  std::vector<Eigen::Index> position(static_cast<std::size_t>(n * n), -1);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if ((i + j) % 2 == parity) {
        position[static_cast<std::size_t>(vec_index(i, j, n))] =
            static_cast<Eigen::Index>(out.indices.size());
        out.indices.push_back(vec_index(i, j, n));
      }
    }
  }
  std::vector<Triplet> triplets;
  triplets.reserve(static_cast<std::size_t>(matrix_.nonZeros() / 2 + 1));
  for (Eigen::Index col = 0; col < matrix_.outerSize(); ++col) {
    const Eigen::Index c = position[static_cast<std::size_t>(col)];
    if (c < 0) continue;
    for (SparseComplexMatrix::InnerIterator it(matrix_, col); it; ++it) {
      const Eigen::Index r = position[static_cast<std::size_t>(it.row())];
      if (r < 0) throw NumericalFailure("Liouvillian mixes parity sectors");
      triplets.emplace_back(r, c, it.value());
    }
  }
  const auto m = static_cast<Eigen::Index>(out.indices.size());
  out.matrix.resize(m, m);
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  out.matrix.makeCompressed();
  return out;
}

double Liouvillian::max_entry() const {
  double m = 0.0;
  for (Eigen::Index k = 0; k < matrix_.nonZeros(); ++k) {
    m = std::max(m, std::abs(matrix_.valuePtr()[k]));
  }
  return m;
}

Liouvillian build_liouvillian(const ModelParams& params, FockSpace space, int max_levels) {
  return Liouvillian(params, space, max_levels);
}

// ---------------------------------------------------------------------------

std::vector<QuantumState> evolve(const QuantumState& rho0, const Liouvillian& L,
                                 std::span<const double> t_grid, const EvolveOptions& options) {
  const Eigen::Index n = L.space().dim();
  if (rho0.dim() != n) throw DimensionError("evolve: state and Liouvillian dimensions differ");
  const double limit = options.breach_fraction * static_cast<double>(n);

  std::vector<QuantumState> out;
  out.reserve(t_grid.size());
  propagate(L, vectorize(rho0.density()), t_grid, options.ode,
                [&](std::size_t, double t, const ComplexVector& y) {
                  double pop = 0.0;
                  for (Eigen::Index k = 0; k < n; ++k) {
                    pop += static_cast<double>(k) * y[vec_index(k, k, n)].real();
                  }
                  if (pop > limit) {
                    throw TruncationBreachError("population " + std::to_string(pop) +
                                                    " exceeds half the truncation at t=" +
                                                    std::to_string(t),
                                                t);
                  }
                  out.emplace_back(unvectorize(y, n), options.tolerance);
                });
  return out;
}

// ---------------------------------------------------------------------------

SteadyState steady_state_report(const Liouvillian& L) {
  const Eigen::Index n = L.space().dim();
  const ParityBlock even = L.block(0);
  const Eigen::Index m = even.matrix.rows();
  const double scale = std::max(1.0, L.max_entry());

  // Shifted inverse iteration: the shift is far below every nonzero eigenvalue, so one or two
  // solves land on the null vector.
  const double shift = 1e-13 * scale;
  SparseComplexMatrix shifted = even.matrix;
  for (Eigen::Index k = 0; k < m; ++k) shifted.coeffRef(k, k) -= shift;
  shifted.makeCompressed();
  Eigen::SparseLU<SparseComplexMatrix> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success) {
    throw SingularityError("steady state: sparse LU failed: " + lu.lastErrorMessage(), 0.0);
  }

  // Positions of the diagonal entries rho(i, i) inside the even block.
  std::vector<Eigen::Index> diag;
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index full = even.indices[static_cast<std::size_t>(k)];
    if (full % n == full / n) diag.push_back(k);
  }
  const auto block_trace = [&diag](const ComplexVector& v) {
    Complex t = 0.0;
    for (Eigen::Index k : diag) t += v[k];
    return t;
  };

  ComplexVector x = ComplexVector::Zero(m);
  for (Eigen::Index k : diag) x[k] = 1.0 / static_cast<double>(n);
  double residual = 0.0;
  for (int iter = 0; iter < 6; ++iter) {
    ComplexVector next = lu.solve(x);
    if (!next.allFinite()) throw SingularityError("steady state: non-finite solve", 0.0);
    const Complex tr = block_trace(next);
    if (std::abs(tr) == 0.0) throw ConvergenceError("steady state: traceless null vector", 1.0);
    x = next / tr;
    residual = (even.matrix * x).cwiseAbs().maxCoeff();
    if (residual <= 1e-3 * kSteadyResidualTolerance && iter >= 1) break;
  }

  // Deflated inverse iteration for the next eigenvalue. The trace functional is a left null
  // vector, so y - tr(y) x stays in the complementary invariant subspace.
  ComplexVector y(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    y[k] = Complex(std::cos(0.7 * static_cast<double>(k) + 0.3), std::sin(1.3 * static_cast<double>(k)));
  }
  Complex next_eigenvalue = 0.0;
  for (int iter = 0; iter < 8; ++iter) {
    y -= block_trace(y) * x;
    const double norm = y.norm();
    if (norm == 0.0) break;
    y /= norm;
    const ComplexVector ly = even.matrix * y;
    next_eigenvalue = y.dot(ly);
    y = lu.solve(y);
    if (!y.allFinite()) break;
  }
  if (std::abs(next_eigenvalue) <= kZeroEigenvalueTolerance) {
    throw DegeneracyError("steady state is not unique: second eigenvalue " +
                          std::to_string(std::abs(next_eigenvalue)));
  }

  ComplexVector full = ComplexVector::Zero(n * n);
  for (Eigen::Index k = 0; k < m; ++k) full[even.indices[static_cast<std::size_t>(k)]] = x[k];
  ComplexMatrix rho = hermitian_part(unvectorize(full, n));
  rho /= rho.trace().real();
  full = vectorize(rho);
  residual = (L.matrix() * full).cwiseAbs().maxCoeff();
  if (residual > kSteadyResidualTolerance) {
    throw ConvergenceError("steady state residual " + std::to_string(residual) +
                               " above tolerance",
                           residual);
  }
  return SteadyState{QuantumState(std::move(rho)), residual, next_eigenvalue};
}

QuantumState steady_state(const Liouvillian& L) { return steady_state_report(L).state; }

double purity(const QuantumState& rho) { return rho.density().squaredNorm(); }

// ---------------------------------------------------------------------------

CorrelatorTrace regression_correlator(const Liouvillian& L, CorrelatorKind kind,
                                      std::span<const double> tau_grid,
                                      const OdeOptions& options) {
  return regression_correlator(L, steady_state(L), kind, tau_grid, options);
}

CorrelatorTrace regression_correlator(const Liouvillian& L, const QuantumState& steady,
                                      CorrelatorKind kind, std::span<const double> tau_grid,
                                      const OdeOptions& options) {
  if (tau_grid.empty() || tau_grid.front() != 0.0) {
    throw DomainError("regression_correlator: tau grid must start at 0");
  }
  const Eigen::Index n = L.space().dim();
  if (steady.dim() != n) throw DimensionError("regression_correlator: dimension mismatch");
  const LadderOps ops = ladder_ops(L.space());
  const ComplexMatrix& rho = steady.density();

  // g1: evolve b rho, read Tr(b^dag .). g2: evolve b rho b^dag, read Tr(b^dag b .).
  ComplexMatrix seed;
  ComplexMatrix probe;
  if (kind == CorrelatorKind::g1_unnormalized) {
    seed = ops.b * rho;
    probe = ops.b_dagger;
  } else {
    seed = ops.b * rho * ops.b_dagger;
    probe = number_op(L.space());
  }

  CorrelatorTrace out;
  out.kind = kind;
  out.taus.assign(tau_grid.begin(), tau_grid.end());
  out.values.resize(tau_grid.size());
  propagate(L, vectorize(seed), tau_grid, options,
                [&](std::size_t index, double, const ComplexVector& y) {
                  out.values[index] = trace_product(probe, y, n);
                });

  const double pop = steady.population();
  out.steady_population = pop;
  if (!(pop > 0.0)) {
    throw DomainError("regression_correlator: vanishing steady population, normalisation undefined");
  }
  // g1(0) is the population itself; dividing by the sampled value pins g1(0) = 1 exactly.
  const Complex norm = kind == CorrelatorKind::g1_unnormalized ? out.values.front() : Complex(pop * pop);
  out.normalized.resize(out.values.size());
  for (std::size_t k = 0; k < out.values.size(); ++k) out.normalized[k] = out.values[k] / norm;
  return out;
}

// ---------------------------------------------------------------------------

double slowest_coherence_rate(const ModelParams& params) {
  params.validate();
  const double a = 0.5 * params.gamma;
  const double d2 = (params.omega - params.delta) * (params.omega + params.delta);
  if (d2 <= 0.0) return a;
  const double rate = a - std::sqrt(d2);
  if (!(rate > 0.0)) throw NoSteadyStateError("no steady state for Omega >= Omega_c");
  return rate;
}

double default_tau_max(const ModelParams& params) {
  return std::max(kMinTauMax, 25.0 / slowest_coherence_rate(params));
}

namespace {

// int_0^1 e^{z u} du and int_0^1 u e^{z u} du for purely imaginary z.
void filon_moments(Complex z, Complex& m0, Complex& m1) {
  if (std::abs(z) < 0.5) {
    Complex term = 1.0;  // z^k / k!
    m0 = 0.0;
    m1 = 0.0;
    for (int k = 0; k < 20; ++k) {
      m0 += term / static_cast<double>(k + 1);
      m1 += term / static_cast<double>(k + 2);
      term *= z / static_cast<double>(k + 1);
    }
    return;
  }
  const Complex ez = std::exp(z);
  m0 = (ez - 1.0) / z;
  m1 = ez / z - (ez - 1.0) / (z * z);
}

}  // namespace

FrequencyTrace spectrum_from_correlator(const CorrelatorTrace& g1,
                                        std::span<const double> omega_grid) {
  if (g1.kind != CorrelatorKind::g1_unnormalized) {
    throw DomainError("spectrum needs the first-order correlator");
  }
  const std::size_t count = g1.taus.size();
  if (count < 3) throw DimensionError("spectrum: correlator has fewer than 3 samples");
  if (omega_grid.empty() || !strictly_increasing(omega_grid)) {
    throw DomainError("spectrum: frequency grid must be non-empty and strictly increasing");
  }
  const double h = g1.taus[1] - g1.taus[0];
  for (std::size_t k = 1; k < count; ++k) {
    if (std::abs(g1.taus[k] - g1.taus[k - 1] - h) > 1e-9 * h) {
      throw DomainError("spectrum: correlator must be sampled on a uniform grid");
    }
  }

  FrequencyTrace out;
  out.omegas.assign(omega_grid.begin(), omega_grid.end());
  out.values.resize(omega_grid.size());
  out.tau_step = h;
  out.tau_max = g1.taus.back();
  out.tail = std::abs(g1.normalized.back()) / std::abs(g1.normalized.front());

  const std::vector<Complex>& c = g1.normalized;
  for (std::size_t w = 0; w < omega_grid.size(); ++w) {
    const double omega = omega_grid[w];
    Complex m0, m1;
    filon_moments(kI * (omega * h), m0, m1);
    // Exact integral of the piecewise-linear interpolant times e^{i omega tau}.
    const Complex w_left = h * (m0 - m1);
    const Complex w_right = h * m1;
    const Complex step = std::exp(kI * (omega * h));
    Complex phase = 1.0;
    Complex acc = 0.0;
    for (std::size_t k = 0; k + 1 < count; ++k) {
      acc += phase * (w_left * c[k] + w_right * c[k + 1]);
      phase *= step;
      if ((k & 1023u) == 1023u) phase = std::exp(kI * (omega * g1.taus[k + 1]));
    }
    out.values[w] = acc.real() / std::numbers::pi;
  }

  double integral = 0.0;
  for (std::size_t w = 0; w + 1 < out.omegas.size(); ++w) {
    integral += 0.5 * (out.values[w] + out.values[w + 1]) * (out.omegas[w + 1] - out.omegas[w]);
  }
  // The line shapes fall off as 1/omega^4; add the two tails beyond the grid.
  const double lo = out.omegas.front();
  const double hi = out.omegas.back();
  if (lo < 0.0) integral += out.values.front() * std::abs(lo) / 3.0;
  if (hi > 0.0) integral += out.values.back() * hi / 3.0;
  out.integral = integral;
  return out;
}

FrequencyTrace spectrum_numeric(const Liouvillian& L, std::span<const double> omega_grid,
                                double tau_max, double tau_step, const OdeOptions& options) {
  const ModelParams& p = L.params();
  if (tau_max <= 0.0) tau_max = default_tau_max(p);
  if (!(tau_step > 0.0) || tau_step > 0.1 * tau_max) {
    throw DomainError("spectrum_numeric: tau step must be positive and well below tau_max");
  }
  const auto steps = static_cast<std::size_t>(std::ceil(tau_max / tau_step - 1e-9));
  std::vector<double> taus(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) taus[k] = static_cast<double>(k) * tau_step;

  const CorrelatorTrace g1 = regression_correlator(L, CorrelatorKind::g1_unnormalized, taus, options);
  FrequencyTrace out = spectrum_from_correlator(g1, omega_grid);
  if (out.tail > 1e-8) {
    throw WindowingError("spectrum_numeric: |g1(tau_max)| = " + std::to_string(out.tail) +
                         " exceeds 1e-8; increase tau_max");
  }
  return out;
}

}  // namespace pep
