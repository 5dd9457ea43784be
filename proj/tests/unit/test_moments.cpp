#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pep/errors.hpp"
#include "pep/moments.hpp"
#include "support.hpp"

using namespace pep;
using testing_support::Gen;
using testing_support::rk4;

namespace {

ModelParams make(double delta, double omega) {
  ModelParams p;
  p.delta = delta;
  p.omega = omega;
  return p;
}

// (<b^dag b>, <b b>, <b^dag b^dag>) in the steady state, straight from the moment equations.
ComplexVector steady_second_moments(const ModelParams& p) {
  const SecondMomentSystem m = second_moment_system(p);
  return solve_linear(m.m3, -m.p3);
}

// n(t) by integrating i dm/dt = M3 m + P3 from (n0, 0, 0).
double population_by_rk4(const ModelParams& p, double n0, double t) {
  const SecondMomentSystem m = second_moment_system(p);
  ComplexVector y = ComplexVector::Zero(3);
  y[0] = n0;
  const ComplexVector out = rk4([&](const ComplexVector& v) -> ComplexVector { return -kI * (m.m3 * v + m.p3); }, y, t, 1e-3);
  return out[0].real();
}

// g1 by regression on the first-moment equations: u = (<b^dag(0) b(tau)>, <b^dag(0) b^dag(tau)>).
double g1_by_regression(const ModelParams& p, double tau) {
  const ComplexVector s = steady_second_moments(p);
  const ComplexMatrix h2 = first_moment_system(p).h2;
  ComplexVector u(2);
  u << s[0], s[2];
  const ComplexVector out = rk4([&](const ComplexVector& v) -> ComplexVector { return -kI * (h2 * v); }, u, tau, 1e-3);
  return out[0].real() / s[0].real();
}

// g2 by regression of b rho b^dag through the second-moment equations; the initial moments
// follow from Wick factorisation of the Gaussian steady state.
double g2_by_regression(const ModelParams& p, double tau) {
  const ComplexVector s = steady_second_moments(p);
  const Complex n = s[0], bb = s[1], bdbd = s[2];
  const SecondMomentSystem m = second_moment_system(p);
  ComplexVector y(3);
  y << 2.0 * n * n + bb * bdbd, 3.0 * n * bb, 3.0 * n * bdbd;
  const ComplexVector out =
      rk4([&](const ComplexVector& v) -> ComplexVector { return -kI * (m.m3 * v + m.p3 * n); }, y, tau, 1e-3);
  return out[0].real() / std::norm(n);
}

}  // namespace

TEST_SUITE("moments_analytic") {
  TEST_CASE("derived scales and regimes at Delta = 1.5") {
    const DerivedScales d = derived_scales(make(1.5, 1.0));
    CHECK(d.omega_ep == 1.5);
    CHECK(d.omega_c == doctest::Approx(std::sqrt(2.5)));
    CHECK(*d.omega_tilde == doctest::Approx(std::sqrt(1.25)));
    CHECK_FALSE(d.big_gamma.has_value());
    CHECK(d.phi() == doctest::Approx(0.25 * std::log(2.5 / 0.5)));
    CHECK(classify_regime(make(1.5, 1.0)).tag == RegimeTag::below_ep);
    CHECK(classify_regime(make(1.5, 1.5)).tag == RegimeTag::at_ep);
    CHECK(classify_regime(make(1.5, 1.55)).tag == RegimeTag::above_ep);
    CHECK(classify_regime(make(1.5, std::sqrt(2.5))).tag == RegimeTag::at_critical);
    CHECK(classify_regime(make(1.5, 1.6)).tag == RegimeTag::unstable);
    CHECK_THROWS_AS(derived_scales(make(1.5, 1.5)).phi(), DomainError);
  }

  TEST_CASE("first-moment eigenvalues at Omega = 0 and at the EP") {
    const FirstMomentSystem f0 = first_moment_system(make(1.5, 0.0));
    CHECK(std::abs(f0.omega[0] - Complex(1.5, -0.5)) < 1e-14);
    CHECK(std::abs(f0.omega[1] - Complex(-1.5, -0.5)) < 1e-14);
    CHECK(f0.eigenvector_overlap < 1e-14);
    const FirstMomentSystem ep = first_moment_system(make(1.5, 1.5));
    CHECK(std::abs(ep.omega[0] - ep.omega[1]) < 1e-14);
    CHECK(ep.eigenvector_overlap == doctest::Approx(1.0));
    const SecondMomentSystem s = second_moment_system(make(1.5, 1.5));
    for (const Complex& l : s.lambda) CHECK(l.imag() == doctest::Approx(-1.0));
    CHECK(s.eigenvector_rank == 1);
  }

  TEST_CASE("property: closed-form eigenpairs solve the moment matrices") {
    Gen g(21);
    for (int trial = 0; trial < 50; ++trial) {
      ModelParams p = make(g.uniform(0.2, 3.0), 0.0);
      p.omega = g.uniform(0.01, 2.0) * p.delta;
      p.theta = g.uniform(-3.0, 3.0);
      if (classify_regime(p).tag == RegimeTag::at_ep) continue;
      const FirstMomentSystem f = first_moment_system(p);
      for (int k = 0; k < 2; ++k) {
        const ComplexVector v = f.alpha.col(k);
        CHECK((f.h2 * v - f.omega[k] * v).norm() < 1e-10 * (1.0 + f.h2.norm()));
      }
      const SecondMomentSystem s = second_moment_system(p);
      for (int k = 0; k < 3; ++k) {
        const ComplexVector v = s.beta.col(k);
        CHECK((s.m3 * v - s.lambda[k] * v).norm() < 1e-10 * (1.0 + s.m3.norm()));
      }
    }
  }

  TEST_CASE("steady population is 1/3 at Delta = 1.5, Omega = 1") {
    CHECK(population_steady(make(1.5, 1.0)) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(population_steady(make(1.5, std::sqrt(2.5))), NoSteadyStateError);
    CHECK_THROWS_AS(population_steady(make(1.5, 2.0)), NoSteadyStateError);
  }

  TEST_CASE("property: steady population agrees with the linear moment solve") {
    Gen g(5);
    for (int trial = 0; trial < 100; ++trial) {
      const ModelParams p = g.stable_params();
      CHECK(population_steady(p) == doctest::Approx(steady_second_moments(p)[0].real()).epsilon(1e-9));
    }
  }

  TEST_CASE("transient population against the integrated moment equations in every regime") {
    for (double omega : {0.0, 0.5, 1.0, 1.5, 1.54, std::sqrt(2.5), 1.7}) {
      const ModelParams p = make(1.5, omega);
      for (double n0 : {0.0, 1.0, 2.5}) {
        for (double t : {0.0, 0.3, 1.0, 2.5, 6.0}) {
          CAPTURE(omega);
          CAPTURE(n0);
          CAPTURE(t);
          const double oracle = population_by_rk4(p, n0, t);
          CHECK(population_transient(p, n0, t) == doctest::Approx(oracle).epsilon(1e-9));
        }
      }
    }
  }

  TEST_CASE("property: n(t) relaxes to the steady value") {
    Gen g(9);
    for (int trial = 0; trial < 30; ++trial) {
      const ModelParams p = g.stable_params();
      const Regime r = classify_regime(p);
      const double rate = 0.5 - (r.tag == RegimeTag::above_ep ? *derived_scales(p).big_gamma : 0.0);
      const double t = 40.0 / rate;
      CHECK(population_transient(p, 1.0, t) == doctest::Approx(population_steady(p)).epsilon(1e-6));
    }
  }

  TEST_CASE("g1 and g2 against regression on the moment equations") {
    for (double omega : {0.3, 1.0, 1.5, 1.54}) {
      const ModelParams p = make(1.5, omega);
      for (double tau : {0.0, 0.4, 1.5, 4.0}) {
        CAPTURE(omega);
        CAPTURE(tau);
        CHECK(g1(p, tau) == doctest::Approx(g1_by_regression(p, tau)).epsilon(1e-9));
        CHECK(g2(p, tau) == doctest::Approx(g2_by_regression(p, tau)).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("coherence constants and limits") {
    const ModelParams crit = make(1.5, std::sqrt(2.5));
    CHECK(g1(crit, 3.0) == 1.0);
    CHECK(g2(crit, 3.0) == 3.0);
    CHECK_THROWS_AS(g1(make(1.5, 2.0), 1.0), DivergenceError);
    CHECK_THROWS_AS(g2(make(1.5, 0.0), 1.0), DomainError);
    Gen g(13);
    for (int trial = 0; trial < 50; ++trial) {
      const ModelParams p = g.stable_params();
      const double oc = derived_scales(p).omega_c;
      CHECK(g1(p, 0.0) == doctest::Approx(1.0));
      CHECK(g2(p, 0.0) == doctest::Approx(2.0 + oc * oc / (p.omega * p.omega)));
      CHECK(g2_zero(p) == doctest::Approx(g2(p, 0.0)));
      CHECK(g2(p, 200.0) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }

  TEST_CASE("spectrum is the Fourier transform of g1 and integrates to one") {
    for (double omega : {0.5, 1.0, 1.5, 1.55}) {
      const ModelParams p = make(1.5, omega);
      // S(w) = Re int_0^inf g1(tau) e^{i w tau} dtau / pi by composite Simpson out to 30 decay times.
      const Regime r = classify_regime(p);
      const double rate = 0.5 - (r.tag == RegimeTag::above_ep ? *derived_scales(p).big_gamma : 0.0);
      const auto fourier = [&](double w) {
        const int n = 2 * static_cast<int>(std::ceil(15.0 / rate / 0.005));
        const double h = 30.0 / rate / n;
        Complex sum = 0.0;
        for (int k = 0; k <= n; ++k) {
          const double tau = k * h;
          const double weight = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
          sum += weight * g1(p, tau) * std::exp(Complex(0.0, w * tau));
        }
        return (sum * h / 3.0).real() / std::numbers::pi;
      };
      for (double w : {-2.0, -1.0, 0.0, 0.7, 1.3}) {
        CAPTURE(omega);
        CAPTURE(w);
        CHECK(spectrum(p, w).total == doctest::Approx(fourier(w)).epsilon(1e-6));
      }
      double integral = 0.0;
      const double h = 0.01;
      for (double w = -400.0; w <= 400.0; w += h) integral += spectrum(p, w).total * h;
      CHECK(integral == doctest::Approx(1.0).epsilon(2e-3));
    }
  }

  TEST_CASE("spectrum decomposition and the EP profile") {
    const ModelParams p = make(1.5, 0.5);
    const SpectrumValue s = spectrum(p, 0.9);
    REQUIRE(s.s_plus.has_value());
    CHECK(*s.s_plus + *s.s_minus == doctest::Approx(s.total));
    const ModelParams ep = make(1.5, 1.5);
    const SpectrumValue e = spectrum(ep, 0.4);
    CHECK_FALSE(e.s_plus.has_value());
    const double a = 0.5;
    CHECK(e.total == doctest::Approx(2.0 / std::numbers::pi * a * a * a / std::pow(a * a + 0.16, 2)));
    CHECK_THROWS_AS(spectrum(make(1.5, std::sqrt(2.5)), 0.0), NoSteadyStateError);
  }

  TEST_CASE("property: quadrature variances follow from the steady second moments") {
    Gen g(17);
    for (int trial = 0; trial < 100; ++trial) {
      const ModelParams p = g.stable_params();
      const ComplexVector s = steady_second_moments(p);
      const QuadratureVariances v = quadrature_variances_steady(p);
      CHECK(v.var_x == doctest::Approx(s[0].real() + 0.5 + s[1].real()).epsilon(1e-9));
      CHECK(v.var_p == doctest::Approx(s[0].real() + 0.5 - s[1].real()).epsilon(1e-9));
      CHECK(std::sqrt(v.var_x * v.var_p) >= 0.5 - 1e-12);
    }
  }

  TEST_CASE("position variance minimum") {
    const VarianceMinimum m = position_variance_minimum(make(1.5, 0.0));
    CHECK(m.var_x == doctest::Approx((1.0 + 1.0 / std::sqrt(10.0)) / 4.0).epsilon(1e-14));
    CHECK(m.omega == doctest::Approx((10.0 - std::sqrt(10.0)) / 6.0).epsilon(1e-14));
    for (double w : {m.omega - 1e-3, m.omega + 1e-3}) CHECK(quadrature_variances_steady(make(1.5, w)).var_x > m.var_x);
    CHECK(quadrature_variances_steady(make(1.5, 1.5)).var_x == doctest::Approx(0.5));
  }

  TEST_CASE("semiclassical Kerr population") {
    ModelParams p = make(1.0, 2.0);
    p.u = 0.01;
    const double oc2 = 1.25;
    CHECK(semiclassical_kerr_population(p) == doctest::Approx((std::sqrt(1.0 + 4.0 - oc2) - 1.0) / 0.01));
    CHECK_THROWS_AS(semiclassical_kerr_population(make(1.0, 2.0)), DomainError);
    p.omega = 0.5;
    CHECK_THROWS_AS(semiclassical_kerr_population(p), DomainError);
  }
}
