#include "pep/moments.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "pep/errors.hpp"

namespace pep {

namespace {

constexpr double kPi = std::numbers::pi;

// Delta^2 - Omega^2 without cancellation near the EP.
double detuning_gap(const ModelParams& p) { return (p.delta - p.omega) * (p.delta + p.omega); }

double half_gamma(const ModelParams& p) { return 0.5 * p.gamma; }

// Omega_c^2 - Omega^2.
double critical_margin(const ModelParams& p) {
  const double a = half_gamma(p);
  return detuning_gap(p) + a * a;
}

double capped(double value, const char* what) {
  if (!std::isfinite(value) || std::abs(value) > kDivergenceCap) {
    throw UnboundedError(std::string(what) + " exceeds the divergence cap", value);
  }
  return value;
}

void require_steady_state(const ModelParams& p, const char* what) {
  const Regime r = classify_regime(p);
  if (r.tag == RegimeTag::at_critical || r.tag == RegimeTag::unstable) {
    throw NoSteadyStateError(std::string(what) + ": no steady state for Omega >= Omega_c");
  }
}

// Branch variable s with omega_pm = -i gamma/2 +/- s: s = omega_tilde below the EP,
// s = -i Gamma above it, 0 at the EP.
Complex branch_frequency(const ModelParams& p, RegimeTag tag) {
  if (tag == RegimeTag::at_ep) return 0.0;
  const double d = detuning_gap(p);
  if (d > 0.0) return std::sqrt(d);
  return Complex(0.0, -std::sqrt(-d));
}

ComplexVector unit(ComplexVector v) {
  const double n = v.norm();
  if (n > 0.0) v /= n;
  return v;
}

}  // namespace

double DerivedScales::phi() const {
  if (!(omega < delta)) {
    throw DomainError("squeezing parameter is defined only for Omega < Delta");
  }
  return 0.25 * std::log((delta + omega) / (delta - omega));
}

DerivedScales derived_scales(const ModelParams& params) {
  params.validate();
  DerivedScales s;
  s.delta = params.delta;
  s.omega = params.omega;
  s.omega_ep = params.delta;
  const double a = half_gamma(params);
  s.omega_c = std::sqrt(params.delta * params.delta + a * a);
  const RegimeTag tag = classify_regime(params).tag;
  if (tag == RegimeTag::at_ep) {
    s.omega_tilde = 0.0;
    s.big_gamma = 0.0;
  } else if (params.omega < params.delta) {
    s.omega_tilde = std::sqrt(detuning_gap(params));
  } else {
    s.big_gamma = std::sqrt(-detuning_gap(params));
  }
  return s;
}

std::string_view to_string(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::below_ep:
      return "below_ep";
    case RegimeTag::at_ep:
      return "at_ep";
    case RegimeTag::above_ep:
      return "above_ep";
    case RegimeTag::at_critical:
      return "at_critical";
    case RegimeTag::unstable:
      return "unstable";
  }
  return "unknown";
}

Regime classify_regime(const ModelParams& params) {
  params.validate();
  const double a = half_gamma(params);
  const double omega_c = std::sqrt(params.delta * params.delta + a * a);
  Regime r;
  r.distance_ep = params.omega - params.delta;
  r.distance_critical = params.omega - omega_c;
  if (std::abs(r.distance_ep) <= kPointTolerance) {
    r.tag = RegimeTag::at_ep;
  } else if (std::abs(r.distance_critical) <= kPointTolerance) {
    r.tag = RegimeTag::at_critical;
  } else if (params.omega < params.delta) {
    r.tag = RegimeTag::below_ep;
  } else if (params.omega < omega_c) {
    r.tag = RegimeTag::above_ep;
  } else {
    r.tag = RegimeTag::unstable;
  }
  return r;
}

FirstMomentSystem first_moment_system(const ModelParams& params) {
  params.validate();
  const double a = half_gamma(params);
  const Complex drive = params.omega * std::exp(kI * params.theta);

  FirstMomentSystem sys;
  sys.h2.resize(2, 2);
  sys.h2 << params.delta - kI * a, drive, -std::conj(drive), -params.delta - kI * a;

  const RegimeTag tag = classify_regime(params).tag;
  const Complex s = branch_frequency(params, tag);
  sys.omega = {-kI * a + s, -kI * a - s};

  sys.alpha.resize(2, 2);
  if (params.omega == 0.0) {
    sys.alpha = ComplexMatrix::Identity(2, 2);
  } else {
    const Complex lower = -std::exp(-kI * params.theta);
    ComplexVector plus(2), minus(2);
    plus << (params.delta + s) / params.omega, lower;
    minus << (params.delta - s) / params.omega, lower;
    sys.alpha.col(0) = unit(plus);
    sys.alpha.col(1) = unit(minus);
  }
  sys.eigenvector_overlap = std::abs(sys.alpha.col(0).dot(sys.alpha.col(1)));
  sys.numeric = eig_general(sys.h2);
  return sys;
}

SecondMomentSystem second_moment_system(const ModelParams& params) {
  params.validate();
  const double g = params.gamma;
  const double d = params.delta;
  const double w = params.omega;
  const Complex up = std::exp(kI * params.theta);
  const Complex down = std::conj(up);

  SecondMomentSystem sys;
  sys.m3.resize(3, 3);
  sys.m3 << -kI * g, -w * down, w * up,  //
      2.0 * w * up, 2.0 * d - kI * g, 0.0,  //
      -2.0 * w * down, 0.0, -2.0 * d - kI * g;
  sys.p3.resize(3);
  sys.p3 << 0.0, w * up, -w * down;

  const RegimeTag tag = classify_regime(params).tag;
  const Complex s = branch_frequency(params, tag);
  sys.lambda = {-kI * g, -kI * g + 2.0 * s, -kI * g - 2.0 * s};

  sys.beta.resize(3, 3);
  if (w == 0.0) {
    sys.beta = ComplexMatrix::Identity(3, 3);
  } else {
    ComplexVector b3(3), bp(3), bm(3);
    b3 << -d, w * up, w * down;
    bp << -w * (d + s), (2.0 * d * (d + s) - w * w) * up, w * w * down;
    bm << -w * (d - s), (2.0 * d * (d - s) - w * w) * up, w * w * down;
    sys.beta.col(0) = unit(b3);
    sys.beta.col(1) = unit(bp);
    sys.beta.col(2) = unit(bm);
  }
  sys.eigenvector_rank = numeric_rank(sys.beta, 1e-6);
  sys.numeric = eig_general(sys.m3);
  return sys;
}

double population_steady(const ModelParams& params) {
  require_steady_state(params, "population_steady");
  return capped(0.5 * params.omega * params.omega / critical_margin(params), "steady population");
}

double population_transient(const ModelParams& params, double n0, double t) {
  if (!(t >= 0.0)) throw DomainError("population_transient: t must be non-negative");
  if (!(n0 >= 0.0)) throw DomainError("population_transient: n0 must be non-negative");
  const Regime regime = classify_regime(params);
  const double g = params.gamma;
  const double a = half_gamma(params);
  const double d2 = params.delta * params.delta;
  const double w2 = params.omega * params.omega;
  const double decay = std::exp(-g * t);

  switch (regime.tag) {
    case RegimeTag::at_ep: {
      const double base = 2.0 * d2 / (g * g);
      return base + (n0 + base * (g * t * (n0 * g * t - 1.0) - 1.0)) * decay;
    }
    case RegimeTag::below_ep: {
      const double wt2 = detuning_gap(params);
      const double wt = std::sqrt(wt2);
      const double m = wt2 + a * a;
      const double n_inf = 0.5 * w2 / m;
      const double braces = 4.0 * n0 * d2 * m - g * wt * w2 * std::sin(2.0 * wt * t) -
                            2.0 * w2 * (2.0 * n0 * m + wt2) * std::cos(2.0 * wt * t);
      return n_inf + braces * decay / (4.0 * wt2 * m);
    }
    case RegimeTag::at_critical: {
      // Omega -> Omega_c limit of the hyperbolic form: linear growth, no steady state.
      const double secular = w2 / (2.0 * g) * (2.0 * t - (1.0 - std::exp(-2.0 * g * t)) / g);
      const double cosh_decay = 0.5 * (1.0 + std::exp(-2.0 * g * t));  // cosh(g t) e^{-g t}
      return capped(secular + n0 / (a * a) * (w2 * cosh_decay - d2 * decay), "population");
    }
    case RegimeTag::above_ep:
    case RegimeTag::unstable: {
      const double big2 = -detuning_gap(params);
      const double big = std::sqrt(big2);
      const double m = a * a - big2;
      const double n_inf = 0.5 * w2 / m;
      // cosh(2 Gamma t) e^{-g t} and sinh(2 Gamma t) e^{-g t} without overflow.
      const double grow = std::exp((2.0 * big - g) * t);
      const double fall = std::exp(-(2.0 * big + g) * t);
      const double ch = 0.5 * (grow + fall);
      const double sh = 0.5 * (grow - fall);
      const double braces =
          4.0 * n0 * d2 * m * decay + g * big * w2 * sh - 2.0 * w2 * (2.0 * n0 * m - big2) * ch;
      return capped(n_inf - braces / (4.0 * big2 * m), "population");
    }
  }
  return 0.0;
}

double g1(const ModelParams& params, double tau) {
  if (!(tau >= 0.0)) throw DomainError("g1: tau must be non-negative");
  const Regime regime = classify_regime(params);
  const double a = half_gamma(params);
  switch (regime.tag) {
    case RegimeTag::unstable:
      throw DivergenceError("g1 diverges for Omega > Omega_c");
    case RegimeTag::at_critical:
      return 1.0;
    case RegimeTag::at_ep:
      return (1.0 + a * tau) * std::exp(-a * tau);
    case RegimeTag::below_ep: {
      const double wt = std::sqrt(detuning_gap(params));
      return (std::cos(wt * tau) + a / wt * std::sin(wt * tau)) * std::exp(-a * tau);
    }
    case RegimeTag::above_ep: {
      const double big = std::sqrt(-detuning_gap(params));
      return 0.5 * ((1.0 + a / big) * std::exp((big - a) * tau) +
                    (1.0 - a / big) * std::exp(-(big + a) * tau));
    }
  }
  return 0.0;
}

double g2(const ModelParams& params, double tau) {
  if (!(tau >= 0.0)) throw DomainError("g2: tau must be non-negative");
  if (params.omega == 0.0) throw DomainError("g2: undefined normalisation at Omega = 0");
  const Regime regime = classify_regime(params);
  const double g = params.gamma;
  const double d2 = params.delta * params.delta;
  const double w2 = params.omega * params.omega;
  switch (regime.tag) {
    case RegimeTag::unstable:
      throw DivergenceError("g2 diverges for Omega > Omega_c");
    case RegimeTag::at_critical:
      return 3.0;
    case RegimeTag::at_ep: {
      const double r = g / (2.0 * params.delta);
      const double q = 2.0 + g * tau;
      return 1.0 + (r * r + 0.5 * q * q) * std::exp(-g * tau);
    }
    case RegimeTag::below_ep: {
      const double wt2 = detuning_gap(params);
      const double wt = std::sqrt(wt2);
      const double num = d2 * (4.0 * wt2 + g * g) +
                         w2 * ((4.0 * wt2 - g * g) * std::cos(2.0 * wt * tau) +
                               4.0 * g * wt * std::sin(2.0 * wt * tau));
      return 1.0 + num / (4.0 * wt2 * w2) * std::exp(-g * tau);
    }
    case RegimeTag::above_ep: {
      const double big2 = -detuning_gap(params);
      const double big = std::sqrt(big2);
      const double grow = std::exp((2.0 * big - g) * tau);
      const double fall = std::exp(-(2.0 * big + g) * tau);
      const double num = d2 * (4.0 * big2 - g * g) * std::exp(-g * tau) +
                         w2 * ((4.0 * big2 + g * g) * 0.5 * (grow + fall) +
                               4.0 * g * big * 0.5 * (grow - fall));
      return 1.0 + num / (4.0 * big2 * w2);
    }
  }
  return 0.0;
}

double g2_zero(const ModelParams& params) {
  if (params.omega == 0.0) throw DomainError("g2: undefined normalisation at Omega = 0");
  const Regime regime = classify_regime(params);
  if (regime.tag == RegimeTag::unstable) throw DivergenceError("g2 diverges for Omega > Omega_c");
  const double oc = derived_scales(params).omega_c;
  return 2.0 + (oc / params.omega) * (oc / params.omega);
}

SpectrumValue spectrum(const ModelParams& params, double frequency) {
  require_steady_state(params, "spectrum");
  const Regime regime = classify_regime(params);
  const double a = half_gamma(params);
  const double x = frequency;
  SpectrumValue out;
  switch (regime.tag) {
    case RegimeTag::at_ep: {
      const double den = a * a + x * x;
      out.total = 2.0 / kPi * a * a * a / (den * den);
      return out;
    }
    case RegimeTag::below_ep: {
      const double wt2 = detuning_gap(params);
      const double wt = std::sqrt(wt2);
      const double lo = a * a + (x + wt) * (x + wt);
      const double hi = a * a + (x - wt) * (x - wt);
      out.total = params.gamma / kPi * (wt2 + a * a) / (lo * hi);
      const double r = a / wt;
      out.s_plus = (a + r * (x + wt)) / (2.0 * kPi * lo);
      out.s_minus = (a - r * (x - wt)) / (2.0 * kPi * hi);
      return out;
    }
    case RegimeTag::above_ep: {
      const double big = std::sqrt(-detuning_gap(params));
      const double narrow = a - big;
      const double broad = a + big;
      const double w_plus = 0.5 + a / (2.0 * big);
      const double w_minus = 0.5 - a / (2.0 * big);
      out.s_plus = w_plus / kPi * narrow / (narrow * narrow + x * x);
      out.s_minus = w_minus / kPi * broad / (broad * broad + x * x);
      out.total = *out.s_plus + *out.s_minus;
      return out;
    }
    case RegimeTag::at_critical:
    case RegimeTag::unstable:
      break;
  }
  throw NoSteadyStateError("spectrum: no steady state for Omega >= Omega_c");
}

QuadratureVariances quadrature_variances_steady(const ModelParams& params) {
  require_steady_state(params, "quadrature_variances_steady");
  const double a = half_gamma(params);
  const double oc2 = params.delta * params.delta + a * a;
  const double margin = critical_margin(params);
  const double cross = params.omega * params.delta;
  QuadratureVariances v;
  v.var_x = capped(0.5 * (oc2 - cross) / margin, "position variance");
  v.var_p = capped(0.5 * (oc2 + cross) / margin, "momentum variance");
  return v;
}

VarianceMinimum position_variance_minimum(const ModelParams& params) {
  params.validate();
  if (!(params.delta > 0.0)) throw DomainError("variance minimum needs Delta > 0");
  const double a = half_gamma(params);
  const double oc = std::sqrt(params.delta * params.delta + a * a);
  VarianceMinimum m;
  m.omega = oc * (oc - a) / params.delta;
  m.var_x = 0.25 * (1.0 + a / oc);
  return m;
}

double semiclassical_kerr_population(const ModelParams& params) {
  params.validate();
  if (!(params.u > 0.0)) throw DomainError("semiclassical Kerr population needs U > 0");
  const double a = half_gamma(params);
  const double oc2 = params.delta * params.delta + a * a;
  const Regime regime = classify_regime(params);
  if (regime.tag != RegimeTag::unstable) {
    throw DomainError("semiclassical Kerr branch needs Omega > Omega_c");
  }
  const double root = std::sqrt(params.delta * params.delta + params.omega * params.omega - oc2);
  return capped((root - params.delta) / params.u, "semiclassical population");
}

}  // namespace pep
