#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pep/errors.hpp"
#include "pep/lindblad.hpp"
#include "pep/moments.hpp"
#include "pep/spectral.hpp"
#include "support.hpp"

using namespace pep;
using testing_support::Gen;

namespace {

ModelParams make(double delta, double omega, double u = 0.0, double theta = 0.0) {
  ModelParams p;
  p.delta = delta;
  p.omega = omega;
  p.u = u;
  p.theta = theta;
  return p;
}

// -i[H, rho] + gamma (b rho b^dag - {n, rho}/2), written out directly.
ComplexMatrix lindblad_rhs(const ModelParams& p, FockSpace s, const ComplexMatrix& rho) {
  const ComplexMatrix h = hamiltonian(p, s);
  const LadderOps ops = ladder_ops(s);
  const ComplexMatrix n = ops.b_dagger * ops.b;
  return -kI * (h * rho - rho * h) + p.gamma * (ops.b * rho * ops.b_dagger - 0.5 * (n * rho + rho * n));
}

}  // namespace

TEST_SUITE("lindblad_engine") {
  TEST_CASE("vectorize stacks columns") {
    ComplexMatrix m(2, 2);
    m << 1.0, 2.0, 3.0, 4.0;
    const ComplexVector v = vectorize(m);
    CHECK(v[1] == Complex(3.0));
    CHECK(v[2] == Complex(2.0));
    CHECK((unvectorize(v, 2) - m).norm() == 0.0);
  }

  TEST_CASE("property: L vec(rho) equals the master equation applied to rho") {
    Gen g(31);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = g.integer(2, 12);
      const ModelParams p = make(g.uniform(0.0, 3.0), g.uniform(0.0, 3.0), g.uniform(0.0, 0.5), g.uniform(-3.0, 3.0));
      const FockSpace s(n);
      const Liouvillian L(p, s);
      const ComplexMatrix rho = g.density(n, 2);
      const ComplexVector lhs = L.matrix() * vectorize(rho);
      CHECK((unvectorize(lhs, n) - lindblad_rhs(p, s, rho)).norm() < 1e-12);
    }
  }

  TEST_CASE("two-level spectrum is {0, -gamma, -gamma/2 +- i Delta}") {
    const Liouvillian L(make(1.5, 0.8, 0.3), FockSpace(2));
    ComplexVector ev = liouvillian_eigenvalues(L);
    std::vector<Complex> got(ev.data(), ev.data() + ev.size());
    std::vector<Complex> want = {0.0, -1.0, Complex(-0.5, 1.5), Complex(-0.5, -1.5)};
    for (const Complex& w : want) {
      const auto hit = std::find_if(got.begin(), got.end(), [&](Complex z) { return std::abs(z - w) < 1e-12; });
      CHECK(hit != got.end());
    }
  }

  TEST_CASE("parity blocks carry the dense spectrum") {
    const Liouvillian L(make(1.5, 1.2, 0.1), FockSpace(6));
    const ComplexVector dense = eig_general(L.dense(), false).values;
    const ComplexVector split = liouvillian_eigenvalues(L);
    REQUIRE(split.size() == dense.size());
    for (Eigen::Index i = 0; i < dense.size(); ++i) {
      double best = 1e9;
      for (Eigen::Index j = 0; j < split.size(); ++j) best = std::min(best, std::abs(dense[i] - split[j]));
      CHECK(best < 1e-9);
    }
    const ParityBlock even = L.block(0);
    const ParityBlock odd = L.block(1);
    CHECK(even.indices.size() + odd.indices.size() == 36);
    for (Eigen::Index idx : even.indices) CHECK((idx % 6 + idx / 6) % 2 == 0);
  }

  TEST_CASE("capacity guards") {
    CHECK_THROWS_AS(Liouvillian(make(1.5, 1.0), FockSpace(90)), CapacityError);
    const Liouvillian L(make(1.5, 1.0), FockSpace(45));
    CHECK_THROWS_AS(L.dense(), CapacityError);
  }

  TEST_CASE("steady state matches the closed form below Omega_c") {
    for (double omega : {0.0, 0.5, 1.0, 1.2}) {
      const Liouvillian L(make(1.5, omega), FockSpace(60));
      const SteadyState ss = steady_state_report(L);
      CAPTURE(omega);
      CHECK(ss.residual <= kSteadyResidualTolerance);
      CHECK(ss.state.population() == doctest::Approx(population_steady(make(1.5, omega))).epsilon(1e-8));
      CHECK(std::abs(ss.next_eigenvalue) > kZeroEigenvalueTolerance);
    }
    CHECK(purity(steady_state(Liouvillian(make(1.5, 0.0), FockSpace(10)))) == doctest::Approx(1.0));
  }

  TEST_CASE("evolution tracks the closed-form population and stays physical") {
    const ModelParams p = make(1.5, 1.0);
    const FockSpace s(40);
    const std::vector<double> ts = linspace(0.0, 6.0, 25);
    const auto states = evolve(state_fock(s, 1), Liouvillian(p, s), ts);
    REQUIRE(states.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
      CHECK(states[i].population() == doctest::Approx(population_transient(p, 1.0, ts[i])).epsilon(1e-7));
      CHECK(states[i].checks().trace_defect < 1e-6);
      CHECK(states[i].checks().hermiticity_defect < 1e-8);
      CHECK(states[i].checks().min_eigenvalue > -1e-6);
    }
  }

  TEST_CASE("evolution matches the matrix exponential at small N") {
    Gen g(41);
    const ModelParams p = make(0.9, 0.6, 0.2, 0.5);
    const FockSpace s(6);
    const Liouvillian L(p, s);
    const ComplexMatrix rho0 = g.density(6, 3);
    const std::vector<double> ts = {0.0, 0.7, 2.0};
    const auto states = evolve(QuantumState(rho0), L, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const ComplexVector oracle = expm(L.dense() * ts[i]) * vectorize(rho0);
      CHECK((vectorize(states[i].density()) - oracle).norm() < 1e-8);
    }
  }

  TEST_CASE("unbounded growth is reported as a truncation breach") {
    // The truncated dynamics saturate near 0.47 N here, so the default half-N limit is not
    // reached; a tighter fraction exercises the check.
    const FockSpace s(20);
    const std::vector<double> ts = linspace(0.0, 20.0, 5);
    EvolveOptions opt;
    opt.breach_fraction = 0.3;
    CHECK_THROWS_AS(evolve(state_vacuum(s), Liouvillian(make(1.5, 2.0), s), ts, opt), TruncationBreachError);
    CHECK_NOTHROW(evolve(state_vacuum(s), Liouvillian(make(1.5, 2.0), s), ts));
  }

  TEST_CASE("regression correlators reproduce g1 and g2") {
    const ModelParams p = make(1.5, 1.0);
    const Liouvillian L(p, FockSpace(40));
    const std::vector<double> taus = linspace(0.0, 5.0, 21);
    const CorrelatorTrace c1 = regression_correlator(L, CorrelatorKind::g1_unnormalized, taus);
    const CorrelatorTrace c2 = regression_correlator(L, CorrelatorKind::g2_unnormalized, taus);
    CHECK(c1.steady_population == doctest::Approx(1.0 / 3.0));
    for (std::size_t i = 0; i < taus.size(); ++i) {
      CHECK(c1.normalized[i].real() == doctest::Approx(g1(p, taus[i])).epsilon(1e-7));
      CHECK(std::abs(c1.normalized[i].imag()) < 1e-7);
      CHECK(c2.normalized[i].real() == doctest::Approx(g2(p, taus[i])).epsilon(1e-7));
    }
  }

  TEST_CASE("numeric spectrum follows the closed form") {
    const ModelParams p = make(1.5, 0.5);
    const Liouvillian L(p, FockSpace(30));
    const std::vector<double> ws = linspace(-4.0, 4.0, 81);
    const FrequencyTrace t = spectrum_numeric(L, ws);
    double peak = 0.0, err = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      peak = std::max(peak, spectrum(p, ws[i]).total);
      err = std::max(err, std::abs(t.values[i] - spectrum(p, ws[i]).total));
    }
    CHECK(err / peak < 1e-4);
    CHECK(t.tau_max >= kMinTauMax);
  }

  TEST_CASE("a short lag window is refused") {
    const Liouvillian L(make(1.5, 0.5), FockSpace(20));
    const std::vector<double> ws = {0.0, 1.0};
    CHECK_THROWS_AS(spectrum_numeric(L, ws, 5.0, 0.01), WindowingError);
  }

  TEST_CASE("default tau window follows the slowest coherence rate") {
    CHECK(slowest_coherence_rate(make(1.5, 1.0)) == doctest::Approx(0.5));
    const double big_gamma = std::sqrt(1.55 * 1.55 - 2.25);
    CHECK(slowest_coherence_rate(make(1.5, 1.55)) == doctest::Approx(0.5 - big_gamma));
    CHECK(default_tau_max(make(1.5, 1.0)) == doctest::Approx(50.0));
    CHECK(default_tau_max(make(1.5, 0.2)) >= kMinTauMax);
  }
}
