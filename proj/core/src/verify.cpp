#include "pep/verify.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>

#include "pep/errors.hpp"
#include "pep/lindblad.hpp"
#include "pep/moments.hpp"
#include "pep/phase_space.hpp"
#include "pep/spectral.hpp"

namespace pep {

namespace {

// Truncations used by the acceptance scenarios. Drives near the EP and Omega_c carry long
// squeezed tails in the number basis, so N grows until the truncation error sits well below
// the tolerance being tested (measured: N=40 misses n(t) at Omega=1.54 by ~2).
constexpr int kLevelsLow = 40;
constexpr int kEvolveLevelsAtEP = 160;
constexpr int kEvolveLevelsNearCritical = 240;
constexpr int kRegressionLevelsNearCritical = 280;
constexpr int kSteadyLevelsAtEP = 200;
constexpr int kSteadyLevelsNearCritical = 360;
constexpr int kSpectrumLevelsAtEP = 120;
constexpr int kLevelCap = 400;

constexpr double kDelta = 1.5;

class Recorder {
 public:
  explicit Recorder(CriterionResult& r) : r_(r) {}

  void at_most(const std::string& name, double value, double bound) {
    add(name, value, Relation::at_most, bound, value <= bound);
  }
  void at_least(const std::string& name, double value, double bound) {
    add(name, value, Relation::at_least, bound, value >= bound);
  }
  void equals(const std::string& name, double value, double expected) {
    add(name, value, Relation::equals, expected, value == expected);
  }
  void holds(const std::string& name, bool ok) { equals(name, ok ? 1.0 : 0.0, 1.0); }
  void metric(const std::string& name, double value) { r_.metrics.emplace_back(name, value); }

 private:
  void add(const std::string& name, double value, Relation rel, double bound, bool ok) {
    r_.checks.push_back(Check{name, value, rel, bound, ok && std::isfinite(value)});
  }
  CriterionResult& r_;
};

std::string num(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 6);
  return std::string(buf.data(), res.ptr);
}

ModelParams at_drive(double omega) {
  ModelParams p;
  p.delta = kDelta;
  p.omega = omega;
  return p;
}

std::vector<double> uniform(double first, double last, double step) {
  const auto count = static_cast<std::size_t>(std::llround((last - first) / step)) + 1;
  return linspace(first, last, count);
}

template <typename Err, typename Fn>
bool throws(Fn fn) {
  try {
    fn();
  } catch (const Err&) {
    return true;
  } catch (...) {
    return false;
  }
  return false;
}

// Golden-section minimisation on [lo, hi] down to `width`.
double golden_min(const std::function<double(double)>& f, double lo, double hi, double width) {
  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - r * (hi - lo);
  double d = lo + r * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > width) {
    if (fc <= fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - r * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + r * (hi - lo);
      fd = f(d);
    }
  }
  return 0.5 * (lo + hi);
}

// Grid scan followed by golden section inside the bracketing cell.
double scan_min(const std::function<double(double)>& f, double lo, double hi, std::size_t points) {
  const std::vector<double> grid = linspace(lo, hi, points);
  std::size_t best = 0;
  double best_value = f(grid[0]);
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const double v = f(grid[k]);
    if (v < best_value) {
      best_value = v;
      best = k;
    }
  }
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  return golden_min(f, a, b, 1e-12);
}

// ---------------------------------------------------------------------------

void criterion_ep_location(Recorder& rec) {
  const auto split = [](double omega) {
    const EigenSystem e = eig_general(first_moment_system(at_drive(omega)).h2, false);
    return std::abs(e.values[0] - e.values[1]);
  };
  const auto spread = [](double omega) {
    const EigenSystem e = eig_general(second_moment_system(at_drive(omega)).m3, false);
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) s = std::max(s, std::abs(e.values[i] - e.values[j]));
    }
    return s;
  };
  const double w_first = scan_min(split, 0.0, 3.0, 3001);
  const double w_second = scan_min(spread, 0.0, 3.0, 3001);
  rec.at_most("|argmin |w+ - w-| - 1.5|", std::abs(w_first - kDelta), 1e-6);
  rec.at_most("|argmin spread{l3, l+, l-} - 1.5|", std::abs(w_second - kDelta), 1e-6);

  const FirstMomentSystem h = first_moment_system(at_drive(w_first));
  rec.at_least("closed-form overlap |<a+|a->| at the located point", h.eigenvector_overlap, 1.0 - 1e-6);
  const EigenSystem numeric = eig_general(h.h2);
  rec.at_least("numeric overlap |<a+|a->| at the located point",
               std::abs(numeric.vectors.col(0).dot(numeric.vectors.col(1))), 1.0 - 1e-6);
  rec.metric("closed-form overlap at Omega = 0.5", first_moment_system(at_drive(0.5)).eigenvector_overlap);

  rec.equals("m3 eigenvector rank at Omega = Delta", second_moment_system(at_drive(kDelta)).eigenvector_rank, 1);
  rec.equals("m3 eigenvector rank at Omega = 0.5", second_moment_system(at_drive(0.5)).eigenvector_rank, 3);
  rec.metric("m3 eigenvector rank at the located point", second_moment_system(at_drive(w_second)).eigenvector_rank);
  rec.metric("located Omega (first moments)", w_first);
  rec.metric("located Omega (second moments)", w_second);
}

void criterion_steady_population(Recorder& rec) {
  const ModelParams p = at_drive(1.0);
  const SteadyState ss = steady_state_report(Liouvillian(p, FockSpace(kLevelsLow)));
  rec.at_most("|<n>_ss - 1/3| at N=40, Omega=1", std::abs(ss.state.population() - 1.0 / 3.0), 1e-5);
  rec.metric("steady-state residual max|L rho|", ss.residual);

  const SecondMomentSystem m = second_moment_system(p);
  const ComplexVector x = solve_linear(m.m3, -m.p3);
  rec.at_most("|solve(M3, -P)[0] - 1/3|", std::abs(x[0] - 1.0 / 3.0), 1e-12);

  const double omega_c = std::sqrt(2.5);
  rec.holds("population_steady raises at Omega = Omega_c",
            throws<NoSteadyStateError>([&] { population_steady(at_drive(omega_c)); }));
  rec.holds("population_steady raises at Omega = Omega_c + 1e-3",
            throws<NoSteadyStateError>([&] { population_steady(at_drive(omega_c + 1e-3)); }));
  rec.holds("population_steady raises at Omega = 2",
            throws<NoSteadyStateError>([&] { population_steady(at_drive(2.0)); }));
  rec.holds("solve_linear(M3) raises at Omega = Omega_c", throws<SingularityError>([&] {
              const SecondMomentSystem c = second_moment_system(at_drive(omega_c));
              solve_linear(c.m3, -c.p3);
            }));
}

struct DriveCase {
  double omega;
  int levels;
};

void criterion_transients(Recorder& rec, const VerifyOptions& options) {
  const std::vector<DriveCase> cases = {
      {0.5, kLevelsLow}, {1.0, kLevelsLow}, {1.5, kEvolveLevelsAtEP}, {1.54, kEvolveLevelsNearCritical}};
  const std::vector<double> ts = uniform(0.0, 6.0, 0.05);
  const std::vector<double> errors = parallel_map(cases.size(), options.jobs, [&](std::size_t k) {
    const ModelParams p = at_drive(cases[k].omega);
    const FockSpace space(cases[k].levels);
    const Liouvillian L(p, space, kLevelCap);
    const std::vector<QuantumState> states = evolve(state_fock(space, 1), L, ts);
    double err = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      err = std::max(err, std::abs(states[i].population() - population_transient(p, 1.0, ts[i])));
    }
    return err;
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    rec.at_most("max_t |n(t) - closed form| at Omega=" + num(cases[k].omega) + " (N=" +
                    std::to_string(cases[k].levels) + ")",
                errors[k], 1e-4);
  }
}

void criterion_coherence(Recorder& rec, const VerifyOptions& options) {
  const std::vector<DriveCase> cases = {
      {0.5, kLevelsLow}, {1.0, kLevelsLow}, {1.5, kEvolveLevelsAtEP}, {1.54, kRegressionLevelsNearCritical}};
  const std::vector<double> taus = uniform(0.0, 6.0, 0.05);
  struct Errors {
    double g1 = 0.0, g1_imag = 0.0, g2 = 0.0, g2_zero = 0.0;
  };
  const std::vector<Errors> errors = parallel_map(cases.size(), options.jobs, [&](std::size_t k) {
    const ModelParams p = at_drive(cases[k].omega);
    const Liouvillian L(p, FockSpace(cases[k].levels), kLevelCap);
    const QuantumState rho = steady_state(L);
    const CorrelatorTrace c1 = regression_correlator(L, rho, CorrelatorKind::g1_unnormalized, taus);
    const CorrelatorTrace c2 = regression_correlator(L, rho, CorrelatorKind::g2_unnormalized, taus);
    Errors e;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      e.g1 = std::max(e.g1, std::abs(c1.normalized[i].real() - g1(p, taus[i])));
      e.g1_imag = std::max(e.g1_imag, std::abs(c1.normalized[i].imag()));
      e.g2 = std::max(e.g2, std::abs(c2.normalized[i].real() - g2(p, taus[i])));
    }
    const double oc2 = kDelta * kDelta + 0.25;
    e.g2_zero = std::abs(c2.normalized[0].real() - (2.0 + oc2 / (p.omega * p.omega)));
    return e;
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string tag = " at Omega=" + num(cases[k].omega) + " (N=" + std::to_string(cases[k].levels) + ")";
    rec.at_most("max_tau |g1 - closed form|" + tag, errors[k].g1, 1e-3);
    rec.at_most("max_tau |g2 - closed form|" + tag, errors[k].g2, 1e-3);
    rec.at_most("|g2(0) - (2 + (Omega_c/Omega)^2)|" + tag, errors[k].g2_zero, 1e-3);
    rec.metric("max_tau |Im g1|" + tag, errors[k].g1_imag);
  }

  const ModelParams crit = at_drive(std::sqrt(kDelta * kDelta + 0.25));
  double dev1 = 0.0, dev2 = 0.0;
  for (double tau : taus) {
    dev1 = std::max(dev1, std::abs(g1(crit, tau) - 1.0));
    dev2 = std::max(dev2, std::abs(g2(crit, tau) - 3.0));
  }
  rec.at_most("max_tau |g1 - 1| at Omega_c", dev1, 1e-3);
  rec.at_most("max_tau |g2 - 3| at Omega_c", dev2, 1e-3);
  rec.at_most("|g2(0) - 3| approaching Omega_c (1e-9 below)",
              std::abs(g2(crit.with_omega(crit.omega - 1e-9), 0.0) - 3.0), 1e-3);
}

// Local maxima of a sampled curve, largest first.
std::vector<std::size_t> local_maxima(const std::vector<double>& ys) {
  std::vector<std::size_t> idx;
  for (std::size_t k = 1; k + 1 < ys.size(); ++k) {
    if (ys[k] > ys[k - 1] && ys[k] >= ys[k + 1]) idx.push_back(k);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return ys[a] > ys[b]; });
  return idx;
}

void criterion_spectrum(Recorder& rec, const VerifyOptions& options) {
  const std::vector<DriveCase> cases = {{0.5, kLevelsLow}, {1.0, kLevelsLow}, {1.5, kSpectrumLevelsAtEP}};
  const std::vector<double> omegas = linspace(-6.0, 6.0, 1201);
  const double bin = omegas[1] - omegas[0];
  const std::vector<FrequencyTrace> traces = parallel_map(cases.size(), options.jobs, [&](std::size_t k) {
    const Liouvillian L(at_drive(cases[k].omega), FockSpace(cases[k].levels), kLevelCap);
    return spectrum_numeric(L, omegas);
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const ModelParams p = at_drive(cases[k].omega);
    const FrequencyTrace& t = traces[k];
    const std::string tag = " at Omega=" + num(p.omega) + " (N=" + std::to_string(cases[k].levels) + ")";
    double peak = 0.0, err = 0.0;
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      peak = std::max(peak, t.values[i]);
      err = std::max(err, std::abs(t.values[i] - spectrum(p, omegas[i]).total));
    }
    rec.at_most("max_w |S - closed form| / peak" + tag, err / peak, 1e-3);
    rec.at_most("|int S dw - 1|" + tag, std::abs(t.integral - 1.0), 1e-3);
    rec.metric("tau_max" + tag, t.tau_max);

    const std::vector<std::size_t> maxima = local_maxima(t.values);
    const Regime regime = classify_regime(p);
    if (regime.tag == RegimeTag::below_ep) {
      const double wt = *derived_scales(p).omega_tilde;
      if (maxima.size() < 2) {
        rec.holds("doublet: two spectral maxima" + tag, false);
        continue;
      }
      const double lo = std::min(omegas[maxima[0]], omegas[maxima[1]]);
      const double hi = std::max(omegas[maxima[0]], omegas[maxima[1]]);
      const double off = std::max(std::abs(lo + wt), std::abs(hi - wt));
      rec.at_most("doublet peaks vs +/-sqrt(Delta^2 - Omega^2), in bins" + tag, off / bin, 1.0);
      rec.metric("numeric peak positions (+)" + tag, hi);
      rec.metric("sqrt(Delta^2 - Omega^2)" + tag, wt);
      const double a = 0.5 * p.gamma;
      rec.metric("exact maxima of the closed form sqrt(w~^2 - (gamma/2)^2)" + tag, std::sqrt(wt * wt - a * a));
    } else {
      rec.at_most("singlet: |peak position| in bins" + tag, maxima.empty() ? 1e9 : std::abs(omegas[maxima[0]]) / bin, 1.0);
      rec.equals("singlet: number of maxima" + tag, static_cast<double>(maxima.size()), 1.0);
      double ep_err = 0.0;
      const double a = 0.5 * p.gamma;
      for (std::size_t i = 0; i < omegas.size(); ++i) {
        const double den = a * a + omegas[i] * omegas[i];
        ep_err = std::max(ep_err, std::abs(t.values[i] - 2.0 / std::numbers::pi * a * a * a / (den * den)));
      }
      rec.at_most("max_w |S - Student-t (nu=3) form| / peak" + tag, ep_err / peak, 1e-3);
    }
  }
}

void criterion_squeezing(Recorder& rec, const VerifyOptions& options) {
  const VarianceMinimum vm = position_variance_minimum(at_drive(0.0));
  const std::vector<DriveCase> cases = {{0.5, kLevelsLow},
                                        {1.0, kLevelsLow},
                                        {vm.omega, 80},
                                        {1.5, kSteadyLevelsAtEP},
                                        {1.54, kSteadyLevelsNearCritical}};
  const std::vector<QuadratureStats> stats = parallel_map(cases.size(), options.jobs, [&](std::size_t k) {
    const Liouvillian L(at_drive(cases[k].omega), FockSpace(cases[k].levels), kLevelCap);
    return quadrature_stats(steady_state(L), 0.0);
  });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const QuadratureVariances a = quadrature_variances_steady(at_drive(cases[k].omega));
    const std::string tag = " at Omega=" + num(cases[k].omega) + " (N=" + std::to_string(cases[k].levels) + ")";
    rec.at_most("|var_X - closed form|" + tag, std::abs(stats[k].var_x - a.var_x), 1e-4);
    rec.at_most("|var_P - closed form|" + tag, std::abs(stats[k].var_p - a.var_p), 1e-4);
  }
  rec.at_most("|var_X(Omega_EP) - 1/2| closed form", std::abs(quadrature_variances_steady(at_drive(kDelta)).var_x - 0.5), 1e-12);
  rec.at_most("|var_X(Omega_EP) - 1/2| Lindblad (N=200)", std::abs(stats[3].var_x - 0.5), 1e-4);

  const double expected_min = (1.0 + 1.0 / std::sqrt(10.0)) / 4.0;
  const double expected_at = (10.0 - std::sqrt(10.0)) / 6.0;
  rec.at_most("|min var_X - (1 + 1/sqrt10)/4|", std::abs(vm.var_x - expected_min), 1e-12);
  rec.at_most("|argmin var_X - (10 - sqrt10)/6|", std::abs(vm.omega - expected_at), 1e-12);
  const double scanned = scan_min(
      [](double w) { return quadrature_variances_steady(at_drive(w)).var_x; }, 0.0, 1.58, 1581);
  rec.at_most("|grid-scan argmin of var_X(Omega) - closed form|", std::abs(scanned - vm.omega), 1e-5);
  rec.at_most("|min var_X - 0.329|", std::abs(vm.var_x - 0.329), 5e-4);
  rec.at_most("|argmin var_X - 1.14|", std::abs(vm.omega - 1.14), 5e-3);
  rec.at_most("|Lindblad var_X at the minimum - (1 + 1/sqrt10)/4|", std::abs(stats[2].var_x - expected_min), 1e-4);
}

void criterion_husimi(Recorder& rec, const VerifyOptions& options) {
  struct Case {
    std::string label;
    std::function<QuantumState()> make;
  };
  const FockSpace space(kLevelsLow);
  const auto steady_at = [space](double omega) {
    return [space, omega] { return steady_state(Liouvillian(at_drive(omega), space)); };
  };
  const std::vector<Case> cases = {
      {"vacuum", [space] { return state_vacuum(space); }},
      {"Fock(1)", [space] { return state_fock(space, 1); }},
      {"coherent(1+0.5i)", [space] { return state_coherent(space, Complex(1.0, 0.5)); }},
      {"steady Omega=0.5", steady_at(0.5)},
      {"steady Omega=1", steady_at(1.0)},
      {"steady Omega=1.5", steady_at(1.5)},
      {"steady Omega=Omega_c", steady_at(std::sqrt(2.5))},
  };
  const std::vector<HusimiGrid> grids =
      parallel_map(cases.size(), options.jobs, [&](std::size_t k) { return husimi(cases[k].make()); });
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const std::string tag = " (" + cases[k].label + ", N=40)";
    rec.at_least("min Q before clipping" + tag, grids[k].min_raw, -1e-12);
    rec.at_most("|sum Q dA - 1|" + tag, std::abs(grids[k].normalization - 1.0), 1e-3);
    rec.metric("grid extensions" + tag, grids[k].extensions);
  }
  const HusimiMoments vac = husimi_moments(grids[0]);
  rec.at_most("|max Q(vacuum) - 1/pi|", std::abs(vac.max_value - 1.0 / std::numbers::pi), 1e-4);
  rec.at_most("Q(0) for Fock(1)", husimi_point(state_fock(space, 1), 0.0), 1e-15);
  const HusimiMoments ep = husimi_moments(grids[5]);
  rec.at_least("major/minor variance ratio of Q at Omega=1.5", ep.anisotropy(), 2.0);
  rec.metric("major axis angle at Omega=1.5 (rad)", ep.major_angle);
  rec.metric("major/minor variance ratio at Omega_c", husimi_moments(grids[6]).anisotropy());
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (!(v[k] < v[k - 1])) return false;
  }
  return true;
}

void criterion_gap(Recorder& rec, const VerifyOptions& options) {
  for (int n : {2, 5, 10, 20, 30}) {
    ModelParams p;
    p.delta = 1.0;
    rec.at_most("|gap(Omega=0) - 1/2| at N=" + std::to_string(n), std::abs(gap(Liouvillian(p, FockSpace(n))).gap - 0.5), 1e-9);
  }
  const std::vector<int> ns = {10, 15, 20, 25, 30};
  SweepOptions sweep;
  sweep.jobs = options.jobs;
  sweep.zoom_passes = 2;

  ModelParams harmonic;
  harmonic.delta = 1.0;
  const double omega_c = derived_scales(harmonic).omega_c;
  const ScalingStudy h = sweep_gap(harmonic, linspace(1.0, 2.0, 51), ns, sweep);
  std::vector<double> hmin, hloc;
  for (const GapCurve& c : h.curves) {
    hmin.push_back(c.gap_min);
    hloc.push_back(c.omega_at_min);
    rec.metric("harmonic N=" + std::to_string(c.n_levels) + " Omega_at_min", c.omega_at_min);
    rec.metric("harmonic N=" + std::to_string(c.n_levels) + " gap_min", c.gap_min);
  }
  rec.holds("harmonic gap_min strictly decreasing in N", strictly_decreasing(hmin));
  rec.at_least("harmonic power-law exponent B >= 0.75", h.gap_fit.b, 0.75);
  rec.at_most("harmonic power-law exponent B <= 1.1", h.gap_fit.b, 1.1);
  rec.metric("harmonic fit A", h.gap_fit.a);
  rec.metric("harmonic fit log residual", h.gap_fit.residual);
  rec.holds("harmonic Omega_at_min strictly decreasing in N", strictly_decreasing(hloc));
  rec.at_least("harmonic min_N (Omega_at_min - Omega_c)", *std::min_element(hloc.begin(), hloc.end()) - omega_c, 0.0);
  if (h.location_fit) {
    rec.metric("location fit A", h.location_fit->a);
    rec.metric("location fit B", h.location_fit->b);
  }

  ModelParams kerr = harmonic;
  kerr.u = 0.01;
  const ScalingStudy a = sweep_gap(kerr, linspace(1.0, 2.5, 51), ns, sweep);
  std::vector<double> amin, aloc, xs;
  for (const GapCurve& c : a.curves) {
    amin.push_back(c.gap_min);
    aloc.push_back(c.omega_at_min);
    xs.push_back(static_cast<double>(c.n_levels));
    rec.metric("anharmonic N=" + std::to_string(c.n_levels) + " Omega_at_min", c.omega_at_min);
    rec.metric("anharmonic N=" + std::to_string(c.n_levels) + " gap_min", c.gap_min);
  }
  rec.holds("anharmonic gap_min strictly decreasing in N", strictly_decreasing(amin));
  const FitResult power = least_squares_fit(FitModel::power, xs, amin);
  rec.at_most("anharmonic exponential-fit residual / power-fit residual", a.gap_fit.residual / power.residual, 1.0);
  rec.metric("anharmonic fit A", a.gap_fit.a);
  rec.metric("anharmonic fit B", a.gap_fit.b);
  rec.holds("anharmonic Omega_at_min does not settle monotonically (turns back)", !strictly_decreasing(aloc));
}

void criterion_physicality(Recorder& rec, const VerifyOptions& options) {
  struct Case {
    std::string label;
    ModelParams params;
    int levels;
    double t_end;
    std::function<QuantumState(FockSpace)> start;
  };
  const auto fock1 = [](FockSpace s) { return state_fock(s, 1); };
  const auto vac = [](FockSpace s) { return state_vacuum(s); };
  std::vector<Case> cases;
  for (double w : {0.0, 0.5, 1.0, 1.5, 1.54}) cases.push_back({"Fock(1), Omega=" + num(w), at_drive(w), 40, 6.0, fock1});
  {
    ModelParams p = at_drive(1.0);
    p.theta = 0.7;
    cases.push_back({"coherent, theta=0.7", p, 30, 6.0, [](FockSpace s) { return state_coherent(s, Complex(0.8, 0.3)); }});
  }
  {
    ModelParams p;
    p.delta = 2.0;
    p.omega = 1.0;
    cases.push_back({"squeezed vacuum, Delta=2", p, 40, 6.0,
                     [](FockSpace s) { return state_squeezed_number(s, 0, std::log(3.0) / 4.0, 0.0); }});
  }
  {
    ModelParams p;
    p.delta = 1.0;
    p.omega = 1.5;
    p.u = 0.1;
    cases.push_back({"Kerr U=0.1, Omega=1.5 > Omega_c", p, 40, 6.0, vac});
  }
  cases.push_back({"unstable Omega=2", at_drive(2.0), 40, 1.5, vac});

  struct Worst {
    double trace = 0.0, herm = 0.0, min_eig = 0.0, uncertainty = 1e300;
    std::size_t snapshots = 0;
  };
  const std::vector<Worst> worst = parallel_map(cases.size(), options.jobs, [&](std::size_t k) {
    const Case& c = cases[k];
    const FockSpace space(c.levels);
    const std::vector<double> ts = uniform(0.0, c.t_end, 0.05);
    const std::vector<QuantumState> states = evolve(c.start(space), Liouvillian(c.params, space), ts);
    Worst w;
    for (const QuantumState& s : states) {
      w.trace = std::max(w.trace, s.checks().trace_defect);
      w.herm = std::max(w.herm, s.checks().hermiticity_defect);
      w.min_eig = std::min(w.min_eig, s.checks().min_eigenvalue);
      for (double theta : {0.0, c.params.theta}) w.uncertainty = std::min(w.uncertainty, quadrature_stats(s, theta).uncertainty);
    }
    w.snapshots = states.size();
    return w;
  });
  Worst all;
  for (const Worst& w : worst) {
    all.trace = std::max(all.trace, w.trace);
    all.herm = std::max(all.herm, w.herm);
    all.min_eig = std::min(all.min_eig, w.min_eig);
    all.uncertainty = std::min(all.uncertainty, w.uncertainty);
    all.snapshots += w.snapshots;
  }
  // Steady states enter the same checks.
  for (double w : {0.5, 1.0, 1.5}) {
    const QuantumState s = steady_state(Liouvillian(at_drive(w), FockSpace(40)));
    all.trace = std::max(all.trace, s.checks().trace_defect);
    all.herm = std::max(all.herm, s.checks().hermiticity_defect);
    all.min_eig = std::min(all.min_eig, s.checks().min_eigenvalue);
    all.uncertainty = std::min(all.uncertainty, quadrature_stats(s, 0.0).uncertainty);
    ++all.snapshots;
  }
  rec.at_most("max |Tr rho - 1|", all.trace, 1e-6);
  rec.at_most("max |rho - rho^dag|", all.herm, 1e-8);
  rec.at_least("min eigenvalue of rho", all.min_eig, -1e-6);
  rec.at_least("min sigma_X sigma_P", all.uncertainty, 0.5 - 1e-6);
  rec.metric("snapshots checked", static_cast<double>(all.snapshots));
}

// Every closed form is evaluated on both sides of Omega = Delta and compared with the EP branch.
// The literal comparison runs at the operating point Delta = 1.5 over the windows used by the
// other criteria. The symmetric combination (f(+) + f(-))/2 - f(EP) cancels the smooth slope and
// isolates a jump, so it is also run over a wider set of detunings, times and initial populations.
void criterion_continuity(Recorder& rec) {
  struct Seam {
    double n = 0.0, g1 = 0.0, g2 = 0.0, s = 0.0, eig = 0.0;
  };
  const auto probe = [](double delta, const std::vector<double>& ts, const std::vector<double>& n0s,
                        double eps, bool symmetric) {
    ModelParams ep;
    ep.delta = delta;
    ep.omega = delta;
    const ModelParams lo = ep.with_omega(delta * (1.0 - eps));
    const ModelParams hi = ep.with_omega(delta * (1.0 + eps));
    const auto diff = [&](const std::function<double(const ModelParams&)>& f) {
      const double at = f(ep);
      if (symmetric) return std::abs(0.5 * (f(lo) + f(hi)) - at);
      return std::max(std::abs(f(lo) - at), std::abs(f(hi) - at));
    };
    Seam out;
    for (double t : ts) {
      for (double n0 : n0s) {
        out.n = std::max(out.n, diff([&](const ModelParams& p) { return population_transient(p, n0, t); }));
      }
      out.g1 = std::max(out.g1, diff([&](const ModelParams& p) { return g1(p, t); }));
      out.g2 = std::max(out.g2, diff([&](const ModelParams& p) { return g2(p, t); }));
    }
    for (double w : uniform(-6.0, 6.0, 0.01)) {
      out.s = std::max(out.s, diff([&](const ModelParams& p) { return spectrum(p, w).total; }));
    }
    const FirstMomentSystem b = first_moment_system(ep);
    const SecondMomentSystem d = second_moment_system(ep);
    for (const ModelParams& p : {lo, hi}) {
      const FirstMomentSystem a = first_moment_system(p);
      const SecondMomentSystem c = second_moment_system(p);
      for (int i = 0; i < 2; ++i) out.eig = std::max(out.eig, std::abs(a.omega[i] - b.omega[i]));
      for (int i = 0; i < 3; ++i) out.eig = std::max(out.eig, std::abs(c.lambda[i] - d.lambda[i]));
    }
    return out;
  };

  const Seam literal = probe(kDelta, uniform(0.0, 6.0, 0.05), {0.0, 1.0}, 1e-6, false);
  rec.at_most("max |n(t) at Omega=Delta(1 +/- 1e-6) - n_EP(t)|, Delta=1.5, t<=6", literal.n, 1e-4);
  rec.at_most("max |g1 at Omega=Delta(1 +/- 1e-6) - g1_EP|, Delta=1.5, tau<=6", literal.g1, 1e-4);
  rec.at_most("max |g2 at Omega=Delta(1 +/- 1e-6) - g2_EP|, Delta=1.5, tau<=6", literal.g2, 1e-4);
  rec.at_most("max |S at Omega=Delta(1 +/- 1e-6) - S_EP|, Delta=1.5, |w|<=6", literal.s, 1e-4);
  rec.metric("max |eigenvalue shift| at Delta=1.5 (square-root branch point)", literal.eig);

  Seam jump;
  for (double delta : {0.5, 1.0, 1.5, 3.0}) {
    const Seam s = probe(delta, uniform(0.0, 10.0, 0.1), {0.0, 1.0, 3.0}, 1e-6, true);
    jump.n = std::max(jump.n, s.n);
    jump.g1 = std::max(jump.g1, s.g1);
    jump.g2 = std::max(jump.g2, s.g2);
    jump.s = std::max(jump.s, s.s);
  }
  rec.at_most("seam jump in n(t), Delta in {0.5,1,1.5,3}, t<=10, n0<=3", jump.n, 1e-4);
  rec.at_most("seam jump in g1", jump.g1, 1e-4);
  rec.at_most("seam jump in g2", jump.g2, 1e-4);
  rec.at_most("seam jump in S(w)", jump.s, 1e-4);
}

double runtime_limit(int id) {
  switch (id) {
    case 1:
      return 1.0;
    case 2:
      return 10.0;
    case 3:
      return 60.0;
    case 4:
    case 5:
      return 120.0;
    case 6:
      return 30.0;
    case 7:
      return 60.0;
    case 8:
      return 600.0;
    case 9:
      return 0.0;
    case 10:
      return 1.0;
    default:
      return 0.0;
  }
}

}  // namespace

bool CriterionResult::passed() const {
  if (!error.empty() || checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

std::string criterion_title(int id) {
  switch (id) {
    case 1:
      return "EP location";
    case 2:
      return "steady population";
    case 3:
      return "transient populations";
    case 4:
      return "coherence g1, g2";
    case 5:
      return "emission spectrum";
    case 6:
      return "quadrature squeezing";
    case 7:
      return "Husimi Q";
    case 8:
      return "Liouvillian gap scaling";
    case 9:
      return "physicality of evolved states";
    case 10:
      return "branch continuity at the EP";
    default:
      return "unknown";
  }
}

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  CriterionResult r;
  r.id = id;
  r.title = criterion_title(id);
  r.runtime_limit_seconds = runtime_limit(id);
  Recorder rec(r);
  const auto start = std::chrono::steady_clock::now();
  try {
    switch (id) {
      case 1:
        criterion_ep_location(rec);
        break;
      case 2:
        criterion_steady_population(rec);
        break;
      case 3:
        criterion_transients(rec, options);
        break;
      case 4:
        criterion_coherence(rec, options);
        break;
      case 5:
        criterion_spectrum(rec, options);
        break;
      case 6:
        criterion_squeezing(rec, options);
        break;
      case 7:
        criterion_husimi(rec, options);
        break;
      case 8:
        criterion_gap(rec, options);
        break;
      case 9:
        criterion_physicality(rec, options);
        break;
      case 10:
        criterion_continuity(rec);
        break;
      default:
        r.error = "no criterion " + std::to_string(id);
    }
  } catch (const std::exception& e) {
    r.error = e.what();
  }
  r.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (r.runtime_limit_seconds > 0.0) rec.at_most("runtime (s)", r.runtime_seconds, r.runtime_limit_seconds);
  return r;
}

std::string format_result(const CriterionResult& r) {
  std::string out = std::string(r.passed() ? "PASS" : "FAIL") + "  criterion " + std::to_string(r.id) +
                    ": " + r.title + " (" + num(r.runtime_seconds) + " s)\n";
  for (const Check& c : r.checks) {
    const char* rel = c.relation == Relation::at_most ? "<=" : c.relation == Relation::at_least ? ">=" : "==";
    out += std::string("    [") + (c.passed ? "ok" : "!!") + "] " + c.name + " = " + num(c.value) + " " + rel +
           " " + num(c.bound) + "\n";
  }
  for (const auto& [name, value] : r.metrics) out += "    (info) " + name + " = " + num(value) + "\n";
  if (!r.error.empty()) out += "    error: " + r.error + "\n";
  return out;
}

}  // namespace pep
