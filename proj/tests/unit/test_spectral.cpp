#include <doctest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "pep/errors.hpp"
#include "pep/moments.hpp"
#include "pep/spectral.hpp"

using namespace pep;

TEST_SUITE("spectral_analysis") {
  TEST_CASE("gap without drive is gamma/2 at every truncation") {
    for (int n : {2, 3, 5, 8, 12, 20}) {
      ModelParams p;
      p.delta = 1.0;
      const GapResult g = gap(Liouvillian(p, FockSpace(n)));
      CAPTURE(n);
      CHECK(g.gap == doctest::Approx(0.5).epsilon(1e-10));
      CHECK(g.zero_count == 1);
      CHECK_FALSE(g.degenerate);
    }
  }

  TEST_CASE("gap_from_eigenvalues on a synthetic spectrum") {
    ComplexVector ev(5);
    ev << 0.0, Complex(-0.3, 2.0), Complex(-0.3, -2.0), -1.0, Complex(-0.2, 0.0);
    const GapResult g = gap_from_eigenvalues(ev);
    CHECK(g.gap == doctest::Approx(0.2));
    CHECK(g.zero_count == 1);
    ComplexVector twin(3);
    twin << 0.0, 1e-12, -1.0;
    CHECK(gap_from_eigenvalues(twin).degenerate);
  }

  TEST_CASE("parabola vertex is exact for a parabola") {
    const auto f = [](double x) { return 2.0 * (x - 1.3) * (x - 1.3) + 0.7; };
    double y = 0.0;
    const double x = parabola_vertex(1.0, f(1.0), 1.2, f(1.2), 1.5, f(1.5), &y);
    CHECK(x == doctest::Approx(1.3));
    CHECK(y == doctest::Approx(0.7));
  }

  TEST_CASE("parallel_map keeps order and rethrows the first failure") {
    const auto squares = parallel_map(50, 4, [](std::size_t i) { return static_cast<int>(i * i); });
    for (std::size_t i = 0; i < squares.size(); ++i) CHECK(squares[i] == static_cast<int>(i * i));
    CHECK_THROWS_WITH(parallel_map(10, 3,
                                   [](std::size_t i) -> int {
                                     if (i == 4 || i == 7) throw std::runtime_error("item " + std::to_string(i));
                                     return 0;
                                   }),
                      "item 4");
  }

  TEST_CASE("small harmonic sweep: minima fall with N and sit above Omega_c") {
    ModelParams base;
    base.delta = 1.0;
    SweepOptions opt;
    opt.zoom_passes = 1;
    const std::vector<double> grid = linspace(1.0, 2.2, 25);
    const ScalingStudy s = sweep_gap(base, grid, std::vector<int>{6, 8, 10}, opt);
    REQUIRE(s.curves.size() == 3);
    CHECK(s.harmonic);
    const double oc = derived_scales(base).omega_c;
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(s.curves[k].omega_at_min > oc);
      if (k > 0) CHECK(s.curves[k].gap_min < s.curves[k - 1].gap_min);
    }
    CHECK(s.gap_fit.model == FitModel::power);
    CHECK(s.gap_fit.b > 0.0);
  }

  TEST_CASE("a minimum on the sweep boundary is refused") {
    ModelParams base;
    base.delta = 1.0;
    const std::vector<double> grid = linspace(1.0, 1.1, 5);
    CHECK_THROWS_AS(sweep_gap(base, grid, std::vector<int>{6, 8, 10}, SweepOptions{}), GridExtensionError);
  }

  TEST_CASE("liouvillian_report summarises the steady state") {
    ModelParams p;
    p.omega = 1.0;
    const LiouvillianReport r = liouvillian_report(p, FockSpace(40));
    CHECK(r.n_levels == 40);
    CHECK(r.steady_population == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(r.purity > 0.0);
    CHECK(r.purity <= 1.0 + 1e-12);
  }

  TEST_CASE("steady population rows carry the closed-form reference where it exists") {
    ModelParams base;
    const std::vector<double> grid = {0.5, 1.7};
    ModelParams kerr = base;
    kerr.u = 0.2;
    const auto rows = steady_population_vs_omega(kerr, grid, std::vector<int>{20}, 1);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].reference.has_value());  // semiclassical Kerr above Omega_c
    CHECK(rows[1].population > 0.0);
  }
}
