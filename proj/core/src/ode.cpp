#include <algorithm>
#include <cmath>
#include <string>

#include "pep/errors.hpp"
#include "pep/numerics.hpp"

namespace pep {

namespace {

// Dormand-Prince 5(4) tableau and the dense-output coefficients of Hairer's DOPRI5.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0, a53 = 64448.0 / 6561.0,
                 a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants (Hairer & Wanner defaults).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo = 0.2 - kBeta * 0.75;
constexpr double kMinFactor = 0.2;   // h_new >= 0.2 h
constexpr double kMaxFactor = 10.0;  // h_new <= 10 h

double error_norm(const ComplexVector& err, const ComplexVector& y0, const ComplexVector& y1,
                  double rtol, double atol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    const double r = std::abs(err[i]) / scale;
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(err.size(), 1)));
}

double weighted_norm(const ComplexVector& v, const ComplexVector& y, double rtol, double atol) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double r = std::abs(v[i]) / (atol + rtol * std::abs(y[i]));
    sum += r * r;
  }
  return std::sqrt(sum / static_cast<double>(std::max<Eigen::Index>(v.size(), 1)));
}

}  // namespace

OdeStats integrate_ode(const VectorField& f, const ComplexVector& y0,
                       std::span<const double> sample_times, const OdeOptions& options,
                       const SampleObserver& observe) {
  if (sample_times.empty()) throw DimensionError("integrate_ode: no sample times");
  for (double t : sample_times) {
    if (!std::isfinite(t)) throw DomainError("integrate_ode: non-finite sample time");
  }
  if (!strictly_increasing(sample_times)) {
    throw DomainError("integrate_ode: sample times must be strictly increasing");
  }
  if (!(options.rel_tol > 0.0 && options.rel_tol <= 1e-2) ||
      !(options.abs_tol > 0.0 && options.abs_tol <= 1e-2)) {
    throw DomainError("integrate_ode: tolerances must lie in (0, 1e-2]");
  }

  const double rtol = options.rel_tol;
  const double atol = options.abs_tol;
  const double t_end = sample_times.back();
  const Eigen::Index dim = y0.size();

  OdeStats stats;
  double t = sample_times.front();
  ComplexVector y = y0;
  std::size_t next_sample = 0;
  observe(next_sample++, t, y);
  if (next_sample == sample_times.size()) return stats;

  ComplexVector k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
  ComplexVector ytmp(dim), ynew(dim), err(dim);
  ComplexVector r1(dim), r2(dim), r3(dim), r4(dim), r5(dim), yout(dim);

  f(t, y, k1);
  ++stats.rhs_evaluations;

  const double span = t_end - t;
  const double hmax = options.max_step > 0.0 ? options.max_step : span;
  double h = options.initial_step;
  if (h <= 0.0) {
    // Hairer's starting-step heuristic.
    const double dnf = weighted_norm(k1, y, rtol, atol);
    const double dny = weighted_norm(y, y, rtol, atol);
    double h0 = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h0 = std::min(h0, hmax);
    ytmp = y + h0 * k1;
    f(t + h0, ytmp, k2);
    ++stats.rhs_evaluations;
    const double der2 = weighted_norm(k2 - k1, y, rtol, atol) / h0;
    const double der12 = std::max(der2, dnf);
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h0, h1, hmax});
  }
  h = std::min(h, hmax);

  double facold = 1e-4;
  bool last_rejected = false;

  while (next_sample < sample_times.size()) {
    if (stats.accepted_steps + stats.rejected_steps >= options.max_steps) {
      throw StiffnessError("integrate_ode: step budget exhausted at t=" + std::to_string(t), t);
    }
    const bool hits_end = t + h >= t_end;
    if (hits_end) h = t_end - t;
    if (h <= 1e-14 * std::max(1.0, std::abs(t))) {
      throw StiffnessError("integrate_ode: step size underflow at t=" + std::to_string(t), t);
    }

    ytmp = y + h * (a21 * k1);
    f(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    f(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    f(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    f(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    f(t + h, ytmp, k6);
    ynew = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
    f(t + h, ynew, k7);
    stats.rhs_evaluations += 6;

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double en = error_norm(err, y, ynew, rtol, atol);
    if (!std::isfinite(en)) {
      throw StiffnessError("integrate_ode: non-finite error estimate at t=" + std::to_string(t), t);
    }

    const double fac11 = std::pow(std::max(en, 1e-300), kExpo);
    if (en <= 1.0) {
      double fac = fac11 / std::pow(facold, kBeta);
      fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
      double hnew = h / fac;
      facold = std::max(en, 1e-4);

      const double t_new = hits_end ? t_end : t + h;
      // Dense output for every sample inside (t, t_new].
      bool built = false;
      while (next_sample < sample_times.size() && sample_times[next_sample] <= t_new) {
        const double ts = sample_times[next_sample];
        if (ts == t_new) {
          yout = ynew;
        } else {
          if (!built) {
            r1 = y;
            r2 = ynew - y;
            r3 = h * k1 - r2;
            r4 = r2 - h * k7 - r3;
            r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            built = true;
          }
          const double theta = (ts - t) / h;
          const double theta1 = 1.0 - theta;
          yout = r1 + theta * (r2 + theta1 * (r3 + theta * (r4 + theta1 * r5)));
        }
        observe(next_sample, ts, yout);
        ++next_sample;
      }

      t = t_new;
      y = ynew;
      k1 = k7;  // first-same-as-last
      ++stats.accepted_steps;
      if (last_rejected) hnew = std::min(hnew, h);
      last_rejected = false;
      h = std::min(hnew, hmax);
    } else {
      h = h / std::min(1.0 / kMinFactor, fac11 / kSafety);
      last_rejected = true;
      ++stats.rejected_steps;
    }
  }
  return stats;
}

OdeSolution integrate_ode(const VectorField& f, const ComplexVector& y0,
                          std::span<const double> sample_times, const OdeOptions& options) {
  OdeSolution sol;
  sol.times.assign(sample_times.begin(), sample_times.end());
  sol.states.resize(sample_times.size());
  const OdeStats stats = integrate_ode(
      f, y0, sample_times, options,
      [&](std::size_t index, double, const ComplexVector& y) { sol.states[index] = y; });
  sol.accepted_steps = stats.accepted_steps;
  sol.rejected_steps = stats.rejected_steps;
  sol.rhs_evaluations = stats.rhs_evaluations;
  return sol;
}

}  // namespace pep
