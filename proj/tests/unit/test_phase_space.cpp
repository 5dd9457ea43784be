#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pep/errors.hpp"
#include "pep/lindblad.hpp"
#include "pep/moments.hpp"
#include "pep/phase_space.hpp"
#include "support.hpp"

using namespace pep;

TEST_SUITE("phase_space") {
  TEST_CASE("vacuum Q peaks at 1/pi and integrates to one") {
    const HusimiGrid g = husimi(state_vacuum(FockSpace(20)));
    const HusimiMoments m = husimi_moments(g);
    CHECK(m.max_value == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(g.normalization == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(m.anisotropy() == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(g.re_alpha.size() == 201);
  }

  TEST_CASE("Q of a coherent and a Fock state against closed forms") {
    const Complex beta(0.8, -0.5);
    const QuantumState c = state_coherent(FockSpace(40), beta);
    const QuantumState f = state_fock(FockSpace(20), 1);
    for (const Complex a : {Complex(0.0, 0.0), Complex(1.0, 0.3), Complex(-0.7, 1.1)}) {
      CHECK(husimi_point(c, a) == doctest::Approx(std::exp(-std::norm(a - beta)) / std::numbers::pi).epsilon(1e-10));
      CHECK(husimi_point(f, a) ==
            doctest::Approx(std::norm(a) * std::exp(-std::norm(a)) / std::numbers::pi).epsilon(1e-12));
    }
    CHECK(husimi_point(f, 0.0) == 0.0);
  }

  TEST_CASE("grid moments of a squeezed vacuum") {
    const double phi = 0.3;
    const QuantumState s = state_squeezed_number(FockSpace(60), 0, phi, 0.0);
    GridSpec wide;
    wide.re_min = wide.im_min = -6.0;
    wide.re_max = wide.im_max = 6.0;
    wide.re_points = wide.im_points = 301;
    const HusimiMoments m = husimi_moments(husimi(s, wide));
    // Q variance along each quadrature axis is (var + 1/2)/2 with var = e^{-+2 phi}/2.
    CHECK(m.major_variance == doctest::Approx(0.5 * (0.5 * std::exp(2 * phi) + 0.5)).epsilon(1e-5));
    CHECK(m.minor_variance == doctest::Approx(0.5 * (0.5 * std::exp(-2 * phi) + 0.5)).epsilon(1e-5));
  }

  TEST_CASE("a grid that is too small is extended, and refused when extension is off") {
    GridSpec tight;
    tight.re_min = tight.im_min = -1.5;
    tight.re_max = tight.im_max = 1.5;
    tight.re_points = tight.im_points = 61;
    const QuantumState c = state_coherent(FockSpace(30), Complex(1.0, 0.0));
    const HusimiGrid g = husimi(c, tight);
    CHECK(g.extensions > 0);
    CHECK(std::abs(g.normalization - 1.0) <= 1e-3);
    tight.auto_extend = false;
    CHECK_THROWS_AS(husimi(c, tight), ResolutionError);
  }

  TEST_CASE("steady state at the EP is anisotropic") {
    ModelParams p;
    p.omega = 1.5;
    const QuantumState rho = steady_state(Liouvillian(p, FockSpace(40)));
    const HusimiGrid g = husimi(rho);
    CHECK(g.min_raw >= -1e-12);
    CHECK(husimi_moments(g).anisotropy() > 2.0);
  }

  TEST_CASE("quadrature_stats of coherent and steady states") {
    const QuadratureStats c = quadrature_stats(state_coherent(FockSpace(40), Complex(1.0, 0.5)), 0.0);
    CHECK(c.mean_x == doctest::Approx(std::sqrt(2.0)));
    CHECK(c.mean_p == doctest::Approx(0.5 * std::sqrt(2.0)));
    CHECK(c.var_x == doctest::Approx(0.5));
    CHECK(c.uncertainty == doctest::Approx(0.5));
    ModelParams p;
    p.omega = 1.0;
    const QuadratureStats s = quadrature_stats(steady_state(Liouvillian(p, FockSpace(40))), 0.0);
    const QuadratureVariances v = quadrature_variances_steady(p);
    CHECK(s.var_x == doctest::Approx(v.var_x).epsilon(1e-8));
    CHECK(s.var_p == doctest::Approx(v.var_p).epsilon(1e-8));
  }

  TEST_CASE("property: Q is non-negative for random states") {
    testing_support::Gen g(77);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = g.integer(2, 15);
      const QuantumState rho(g.density(n, g.integer(1, 3)));
      for (int k = 0; k < 200; ++k) {
        const Complex a(g.uniform(-4.0, 4.0), g.uniform(-4.0, 4.0));
        CHECK(husimi_point(rho, a) >= 0.0);
      }
    }
  }

  TEST_CASE("property: Q of random states on a roomy truncation is normalised") {
    testing_support::Gen g(78);
    for (int trial = 0; trial < 5; ++trial) {
      ComplexMatrix rho = ComplexMatrix::Zero(40, 40);
      rho.topLeftCorner(8, 8) = g.density(8, g.integer(1, 3));
      GridSpec spec;
      spec.re_points = spec.im_points = 81;
      const HusimiGrid q = husimi(QuantumState(rho), spec);
      CHECK(q.min_raw >= -1e-12);
      CHECK(std::abs(q.normalization - 1.0) <= 1e-3);
    }
  }
}
