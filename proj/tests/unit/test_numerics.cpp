#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "pep/errors.hpp"
#include "pep/numerics.hpp"
#include "support.hpp"

using namespace pep;
using testing_support::Gen;

TEST_SUITE("numerics") {
  TEST_CASE("eig_general recovers the roots of a companion matrix") {
    // (x - 1)(x - 2i)(x + 3) = x^3 + (2 - 2i) x^2 + (-3 - 4i) x + 6i
    const std::vector<Complex> roots = {1.0, Complex(0, 2), -3.0};
    const Complex c2 = -(roots[0] + roots[1] + roots[2]);
    const Complex c1 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2];
    const Complex c0 = -(roots[0] * roots[1] * roots[2]);
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = -c2;
    a(0, 1) = -c1;
    a(0, 2) = -c0;
    a(1, 0) = 1.0;
    a(2, 1) = 1.0;
    const EigenSystem e = eig_general(a);
    REQUIRE(e.size() == 3);
    // Sorted by descending real part.
    CHECK(std::abs(e.values[0] - roots[0]) < 1e-12);
    CHECK(std::abs(e.values[1] - roots[1]) < 1e-12);
    CHECK(std::abs(e.values[2] - roots[2]) < 1e-12);
    for (int k = 0; k < 3; ++k) {
      CHECK((a * e.vectors.col(k) - e.values[k] * e.vectors.col(k)).norm() < 1e-11);
      CHECK(std::abs(e.vectors.col(k).norm() - 1.0) < 1e-14);
    }
    CHECK_FALSE(e.any_coalescing());
  }

  TEST_CASE("eigenvectors have a real positive leading component") {
    Gen g(7);
    ComplexMatrix a(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = 0; j < 5; ++j) a(i, j) = g.complex_normal();
    const EigenSystem e = eig_general(a);
    for (int k = 0; k < 5; ++k) {
      Eigen::Index lead = 0;
      while (std::abs(e.vectors(lead, k)) <= 1e-10) ++lead;
      CHECK(e.vectors(lead, k).imag() == doctest::Approx(0.0));
      CHECK(e.vectors(lead, k).real() > 0.0);
    }
  }

  TEST_CASE("a Jordan block is flagged as coalescing") {
    ComplexMatrix j(2, 2);
    j << 2.0, 1.0, 0.0, 2.0;
    const EigenSystem e = eig_general(j);
    CHECK(e.coalescing[0]);
    CHECK(e.coalescing[1]);
    CHECK(max_eigenvector_overlap(e.vectors) > 1.0 - 1e-8);
  }

  TEST_CASE("eig_general rejects bad input") {
    CHECK_THROWS_AS(eig_general(ComplexMatrix::Zero(2, 3)), DimensionError);
    ComplexMatrix a = ComplexMatrix::Identity(2, 2);
    a(0, 1) = std::nan("");
    CHECK_THROWS_AS(eig_general(a), DomainError);
  }

  TEST_CASE("solve_linear solves and refuses singular systems") {
    ComplexMatrix a(2, 2);
    a << 2.0, Complex(0, 1), Complex(0, -1), 3.0;
    ComplexVector x(2);
    x << Complex(1, 1), -2.0;
    const ComplexVector b = a * x;
    CHECK((solve_linear(a, b) - x).norm() < 1e-14);
    ComplexMatrix s(2, 2);
    s << 1.0, 2.0, 2.0, 4.0;
    CHECK_THROWS_AS(solve_linear(s, b), SingularityError);
    CHECK_THROWS_AS(solve_linear(a, ComplexVector::Ones(3)), DimensionError);
  }

  TEST_CASE("numeric_rank counts singular values") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = 1.0;
    a(1, 1) = 1e-3;
    a(2, 2) = 1e-9;
    CHECK(numeric_rank(a, 1e-6) == 2);
    CHECK(numeric_rank(ComplexMatrix::Zero(2, 2), 1e-6) == 0);
  }

  TEST_CASE("integrate_ode matches exp(At) y0 for a damped rotation") {
    ComplexMatrix a(2, 2);
    a << Complex(-0.3, 1.0), 0.5, -0.5, Complex(-0.1, -2.0);
    ComplexVector y0(2);
    y0 << 1.0, Complex(0, 1);
    const std::vector<double> ts = linspace(0.0, 5.0, 11);
    const OdeSolution sol = integrate_ode([&](double, const ComplexVector& y, ComplexVector& dy) { dy = a * y; }, y0, ts);
    REQUIRE(sol.states.size() == ts.size());
    const auto oracle = [&](double t) {
      return testing_support::rk4([&](const ComplexVector& y) -> ComplexVector { return a * y; }, y0, t, 1e-3);
    };
    for (std::size_t i = 0; i < ts.size(); ++i) CHECK((sol.states[i] - oracle(ts[i])).norm() < 1e-8);
    CHECK(sol.accepted_steps > 0);
  }

  TEST_CASE("integrate_ode wants increasing sample times") {
    const std::vector<double> ts = {0.0, 1.0, 0.5};
    CHECK_THROWS(integrate_ode([](double, const ComplexVector& y, ComplexVector& dy) { dy = -y; },
                               ComplexVector::Ones(1), ts));
  }

  TEST_CASE("least_squares_fit recovers exact models") {
    const std::vector<double> xs = {10, 15, 20, 25, 30};
    std::vector<double> power, expo;
    for (double x : xs) {
      power.push_back(0.9 / std::pow(x, 0.93));
      expo.push_back(0.3 / std::pow(1.07, x));
    }
    const FitResult p = least_squares_fit(FitModel::power, xs, power);
    CHECK(p.a == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(p.b == doctest::Approx(0.93).epsilon(1e-12));
    CHECK(p.residual < 1e-12);
    const FitResult e = least_squares_fit(FitModel::exponential, xs, expo);
    CHECK(e.a == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(e.b == doctest::Approx(1.07).epsilon(1e-12));
    CHECK(evaluate_fit(e, 12.0) == doctest::Approx(0.3 / std::pow(1.07, 12.0)));
    CHECK_THROWS_AS(least_squares_fit(FitModel::power, xs, std::vector<double>{1, 2, -1, 3, 4}), DomainError);
  }

  TEST_CASE("linspace hits both ends") {
    const auto v = linspace(-1.0, 2.0, 7);
    CHECK(v.front() == -1.0);
    CHECK(v.back() == 2.0);
    CHECK(v[2] == doctest::Approx(0.0));
    CHECK(strictly_increasing(v));
  }
}
