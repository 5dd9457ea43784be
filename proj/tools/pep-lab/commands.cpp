#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <stdexcept>

#include "pep/errors.hpp"
#include "pep/lindblad.hpp"
#include "pep/moments.hpp"
#include "pep/phase_space.hpp"
#include "pep/spectral.hpp"
#include "pep/verify.hpp"

namespace peplab {

using pep::ModelParams;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

ModelParams params_at(const RunConfig& c, double omega) {
  ModelParams p;
  p.delta = c.delta;
  p.omega = omega;
  p.theta = c.theta;
  p.u = c.u;
  p.validate();
  return p;
}

std::vector<double> stepped(double last, double step) {
  const auto count = static_cast<std::size_t>(std::llround(last / step)) + 1;
  return pep::linspace(0.0, last, count);
}

int level_cap(int n) { return std::max(n, pep::kDefaultMaxLevels); }

void common_header(Table& t, const std::string& command, const RunConfig& c) {
  t.meta("command", command);
  t.meta("delta", c.delta);
  t.meta("theta", c.theta);
  t.meta("u", c.u);
  t.meta("gamma_units", "1");
}

bool has_steady_state(const ModelParams& p) {
  const pep::RegimeTag tag = pep::classify_regime(p).tag;
  return tag != pep::RegimeTag::at_critical && tag != pep::RegimeTag::unstable;
}

std::string omega_tag(double omega) { return "omega=" + format_number(omega); }

struct Panel {
  std::optional<Table> table;
  std::vector<PanelError> errors;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
};

// Runs one panel per drive in parallel; any exception becomes a structured error.
template <typename Fn>
Outcome per_drive(const RunConfig& c, Fn fn) {
  const std::vector<Panel> panels = pep::parallel_map(c.omegas.size(), c.jobs, [&](std::size_t k) {
    Panel panel;
    try {
      fn(c.omegas[k], panel);
    } catch (...) {
      panel.table.reset();
      panel.errors.push_back(describe_current_exception(omega_tag(c.omegas[k])));
    }
    return panel;
  });
  Outcome out;
  for (std::size_t k = 0; k < panels.size(); ++k) {
    if (panels[k].table) out.tables.push_back(*panels[k].table);
    out.errors.insert(out.errors.end(), panels[k].errors.begin(), panels[k].errors.end());
    if (!panels[k].metrics.empty()) out.metrics[omega_tag(c.omegas[k])] = panels[k].metrics;
  }
  return out;
}

// ---------------------------------------------------------------------------

double closest_gap(const pep::ComplexVector& numeric, pep::Complex value) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < numeric.size(); ++i) best = std::min(best, std::abs(numeric[i] - value));
  return best;
}

Outcome cmd_eigen(const RunConfig& c) {
  const std::vector<double> drives = pep::linspace(c.drive_min, c.drive_max, static_cast<std::size_t>(c.drive_points));
  struct Row {
    std::vector<double> values;
    double deviation = 0.0;
  };
  const std::vector<Row> rows = pep::parallel_map(drives.size(), c.jobs, [&](std::size_t k) {
    const ModelParams p = params_at(c, drives[k]);
    const pep::FirstMomentSystem f = pep::first_moment_system(p);
    const pep::SecondMomentSystem s = pep::second_moment_system(p);
    Row r;
    r.values = {drives[k]};
    for (const pep::Complex& w : f.omega) {
      r.values.push_back(w.real());
      r.values.push_back(w.imag());
      r.deviation = std::max(r.deviation, closest_gap(f.numeric.values, w));
    }
    for (const pep::Complex& l : s.lambda) {
      r.values.push_back(l.real());
      r.values.push_back(l.imag());
      r.deviation = std::max(r.deviation, closest_gap(s.numeric.values, l));
    }
    return r;
  });
  Table t;
  t.name = "eigen";
  common_header(t, "eigen", c);
  double deviation = 0.0;
  for (const Row& r : rows) {
    t.rows.push_back(r.values);
    deviation = std::max(deviation, r.deviation);
  }
  t.meta("max_deviation", deviation);
  using U = Unit;
  t.columns = {{"omega_drive", U::frequency}, {"re_w_plus", U::frequency},  {"im_w_plus", U::frequency},
               {"re_w_minus", U::frequency},  {"im_w_minus", U::frequency}, {"re_l3", U::frequency},
               {"im_l3", U::frequency},       {"re_l_plus", U::frequency},  {"im_l_plus", U::frequency},
               {"re_l_minus", U::frequency},  {"im_l_minus", U::frequency}};
  Outcome out;
  out.metrics["max_deviation"] = deviation;
  out.tables.push_back(std::move(t));
  return out;
}

Outcome cmd_population(const RunConfig& c) {
  return per_drive(c, [&](double omega, Panel& panel) {
    const ModelParams p = params_at(c, omega);
    const std::vector<double> ts = stepped(c.t_max, c.t_step);
    Table t;
    t.name = "population_" + omega_tag(omega);
    common_header(t, "population", c);
    t.meta("omega", omega);
    t.meta("n0", c.n0);
    t.meta("regime", std::string(pep::to_string(pep::classify_regime(p).tag)));
    std::vector<double> analytic(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) analytic[i] = pep::population_transient(p, c.n0, ts[i]);

    std::optional<std::vector<double>> numeric;
    const bool integral_n0 = c.n0 >= 0.0 && c.n0 == std::floor(c.n0) && c.n0 < c.n_levels;
    if (c.numeric && integral_n0) {
      try {
        const pep::FockSpace space(c.n_levels);
        const pep::Liouvillian L(p, space, level_cap(c.n_levels));
        const auto states = pep::evolve(pep::state_fock(space, static_cast<int>(c.n0)), L, ts);
        numeric.emplace();
        for (const auto& s : states) numeric->push_back(s.population());
      } catch (...) {
        panel.errors.push_back(describe_current_exception(omega_tag(omega) + " numeric"));
      }
    }
    t.columns = {{"t", Unit::time}, {"n_analytic"}};
    if (numeric) {
      t.columns.push_back({"n_numeric"});
      t.meta("n_levels", static_cast<double>(c.n_levels));
    }
    double deviation = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::vector<double> row = {ts[i], analytic[i]};
      if (numeric) {
        row.push_back((*numeric)[i]);
        deviation = std::max(deviation, std::abs((*numeric)[i] - analytic[i]));
      }
      t.rows.push_back(std::move(row));
    }
    if (numeric) {
      t.meta("max_deviation", deviation);
      panel.metrics["max_deviation"] = deviation;
    }
    panel.table = std::move(t);
  });
}

Outcome cmd_coherence(const RunConfig& c) {
  return per_drive(c, [&](double omega, Panel& panel) {
    const ModelParams p = params_at(c, omega);
    const std::vector<double> taus = stepped(c.tau_max, c.tau_step);
    Table t;
    t.name = "coherence_" + omega_tag(omega);
    common_header(t, "coherence", c);
    t.meta("omega", omega);
    t.meta("regime", std::string(pep::to_string(pep::classify_regime(p).tag)));
    t.columns = {{"tau", Unit::time}, {"g1_analytic"}, {"g2_analytic"}};
    std::vector<std::vector<double>> rows;
    for (double tau : taus) rows.push_back({tau, pep::g1(p, tau), pep::g2(p, tau)});

    if (c.numeric && has_steady_state(p)) {
      try {
        const pep::Liouvillian L(p, pep::FockSpace(c.n_levels), level_cap(c.n_levels));
        const pep::QuantumState rho = pep::steady_state(L);
        const auto c1 = pep::regression_correlator(L, rho, pep::CorrelatorKind::g1_unnormalized, taus);
        const auto c2 = pep::regression_correlator(L, rho, pep::CorrelatorKind::g2_unnormalized, taus);
        double d1 = 0.0, d2 = 0.0;
        for (std::size_t i = 0; i < taus.size(); ++i) {
          rows[i].push_back(c1.normalized[i].real());
          rows[i].push_back(c2.normalized[i].real());
          d1 = std::max(d1, std::abs(c1.normalized[i].real() - rows[i][1]));
          d2 = std::max(d2, std::abs(c2.normalized[i].real() - rows[i][2]));
        }
        t.columns.push_back({"g1_numeric"});
        t.columns.push_back({"g2_numeric"});
        t.meta("n_levels", static_cast<double>(c.n_levels));
        t.meta("max_deviation_g1", d1);
        t.meta("max_deviation_g2", d2);
        panel.metrics["max_deviation_g1"] = d1;
        panel.metrics["max_deviation_g2"] = d2;
      } catch (...) {
        panel.errors.push_back(describe_current_exception(omega_tag(omega) + " numeric"));
      }
    }
    for (auto& r : rows) r.resize(t.columns.size());
    t.rows = std::move(rows);
    panel.metrics["g2_zero"] = t.rows.front()[2];
    panel.table = std::move(t);
  });
}

Outcome cmd_spectrum(const RunConfig& c) {
  return per_drive(c, [&](double omega, Panel& panel) {
    const ModelParams p = params_at(c, omega);
    const std::vector<double> ws = pep::linspace(c.w_min, c.w_max, static_cast<std::size_t>(c.w_points));
    Table t;
    t.name = "spectrum_" + omega_tag(omega);
    common_header(t, "spectrum", c);
    t.meta("omega", omega);
    t.meta("regime", std::string(pep::to_string(pep::classify_regime(p).tag)));
    std::vector<pep::SpectrumValue> analytic;
    for (double w : ws) analytic.push_back(pep::spectrum(p, w));
    const bool split = analytic.front().s_plus.has_value();
    t.columns = {{"frequency", Unit::frequency}, {"s_analytic", Unit::density}};
    if (split) {
      t.columns.push_back({"s_plus", Unit::density});
      t.columns.push_back({"s_minus", Unit::density});
    }
    std::optional<pep::FrequencyTrace> numeric;
    if (c.numeric) {
      try {
        const pep::Liouvillian L(p, pep::FockSpace(c.n_levels), level_cap(c.n_levels));
        numeric = pep::spectrum_numeric(L, ws);
      } catch (...) {
        panel.errors.push_back(describe_current_exception(omega_tag(omega) + " numeric"));
      }
    }
    if (numeric) t.columns.push_back({"s_numeric", Unit::density});
    double peak = 0.0, deviation = 0.0;
    for (std::size_t i = 0; i < ws.size(); ++i) {
      std::vector<double> row = {ws[i], analytic[i].total};
      if (split) {
        row.push_back(*analytic[i].s_plus);
        row.push_back(*analytic[i].s_minus);
      }
      peak = std::max(peak, analytic[i].total);
      if (numeric) {
        row.push_back(numeric->values[i]);
        deviation = std::max(deviation, std::abs(numeric->values[i] - analytic[i].total));
      }
      t.rows.push_back(std::move(row));
    }
    t.meta("peak", peak);
    if (numeric) {
      t.meta("n_levels", static_cast<double>(c.n_levels));
      t.meta("tau_max", numeric->tau_max);
      t.meta("integral_numeric", numeric->integral);
      t.meta("max_deviation_over_peak", deviation / peak);
      panel.metrics["max_deviation_over_peak"] = deviation / peak;
      panel.metrics["integral_numeric"] = numeric->integral;
    }
    panel.table = std::move(t);
  });
}

Outcome cmd_husimi(const RunConfig& c) {
  return per_drive(c, [&](double omega, Panel& panel) {
    const ModelParams p = params_at(c, omega);
    const pep::QuantumState rho =
        pep::steady_state(pep::Liouvillian(p, pep::FockSpace(c.n_levels), level_cap(c.n_levels)));
    pep::GridSpec spec = pep::auto_grid(rho);
    if (c.alpha_extent > 0.0) {
      spec.re_min = spec.im_min = -c.alpha_extent;
      spec.re_max = spec.im_max = c.alpha_extent;
      spec.re_points = spec.im_points = static_cast<std::size_t>(c.alpha_points);
    }
    const pep::HusimiGrid g = pep::husimi(rho, spec);
    const pep::HusimiMoments m = pep::husimi_moments(g);
    Table t;
    t.name = "husimi_" + omega_tag(omega);
    common_header(t, "husimi", c);
    t.meta("omega", omega);
    t.meta("n_levels", static_cast<double>(c.n_levels));
    t.meta("normalization", g.normalization);
    t.meta("min_raw", g.min_raw);
    t.meta("extensions", static_cast<double>(g.extensions));
    t.meta("renormalized_points", static_cast<double>(g.renormalized_points));
    t.meta("max_q", m.max_value);
    t.meta("major_variance", m.major_variance);
    t.meta("minor_variance", m.minor_variance);
    t.meta("major_angle", m.major_angle);
    t.columns = {{"re_alpha"}, {"im_alpha"}, {"q"}};
    for (std::size_t i = 0; i < g.im_alpha.size(); ++i) {
      for (std::size_t j = 0; j < g.re_alpha.size(); ++j) t.rows.push_back({g.re_alpha[j], g.im_alpha[i], g.at(i, j)});
    }
    panel.metrics["normalization"] = g.normalization;
    panel.metrics["anisotropy"] = m.anisotropy();

    // Q adds half a quantum of noise to each quadrature: Var_Q(Re alpha) = (var_x + 1/2)/2.
    if (c.u == 0.0 && c.theta == 0.0 && has_steady_state(p)) {
      const pep::QuadratureVariances v = pep::quadrature_variances_steady(p);
      double w = 0.0, cxx = 0.0, cyy = 0.0;
      for (std::size_t i = 0; i < g.im_alpha.size(); ++i) {
        for (std::size_t j = 0; j < g.re_alpha.size(); ++j) {
          const double q = g.at(i, j);
          w += q;
          cxx += q * (g.re_alpha[j] - m.mean_re) * (g.re_alpha[j] - m.mean_re);
          cyy += q * (g.im_alpha[i] - m.mean_im) * (g.im_alpha[i] - m.mean_im);
        }
      }
      const double deviation =
          std::max(std::abs(cxx / w - 0.5 * (v.var_x + 0.5)), std::abs(cyy / w - 0.5 * (v.var_p + 0.5)));
      t.meta("max_deviation_variance", deviation);
      panel.metrics["max_deviation_variance"] = deviation;
    }
    panel.table = std::move(t);
  });
}

Outcome cmd_variances(const RunConfig& c) {
  const std::vector<double> drives = pep::linspace(c.drive_min, c.drive_max, static_cast<std::size_t>(c.drive_points));
  struct Row {
    std::vector<double> values;
    std::optional<PanelError> error;
  };
  const std::vector<Row> rows = pep::parallel_map(drives.size(), c.jobs, [&](std::size_t k) {
    Row r;
    r.values = {drives[k], kNaN, kNaN};
    if (c.numeric) r.values.insert(r.values.end(), {kNaN, kNaN});
    try {
      const ModelParams p = params_at(c, drives[k]);
      if (!has_steady_state(p)) return r;
      const pep::QuadratureVariances v = pep::quadrature_variances_steady(p);
      r.values[1] = v.var_x;
      r.values[2] = v.var_p;
      if (c.numeric) {
        const pep::QuantumState rho =
            pep::steady_state(pep::Liouvillian(p, pep::FockSpace(c.n_levels), level_cap(c.n_levels)));
        const pep::QuadratureStats s = pep::quadrature_stats(rho, c.theta);
        r.values[3] = s.var_x;
        r.values[4] = s.var_p;
      }
    } catch (const pep::UnboundedError&) {
      // Reported as diverged.
    } catch (...) {
      r.error = describe_current_exception(omega_tag(drives[k]));
    }
    return r;
  });
  Table t;
  t.name = "variances";
  common_header(t, "variances", c);
  t.columns = {{"omega_drive", Unit::frequency}, {"var_x_analytic", Unit::none, true}, {"var_p_analytic", Unit::none, true}};
  if (c.numeric) {
    t.columns.push_back({"var_x_numeric", Unit::none, true});
    t.columns.push_back({"var_p_numeric", Unit::none, true});
    t.meta("n_levels", static_cast<double>(c.n_levels));
  }
  Outcome out;
  double deviation = 0.0;
  for (const Row& r : rows) {
    t.rows.push_back(r.values);
    if (r.error) out.errors.push_back(*r.error);
    if (c.numeric && std::isfinite(r.values[3])) {
      deviation = std::max({deviation, std::abs(r.values[3] - r.values[1]), std::abs(r.values[4] - r.values[2])});
    }
  }
  if (c.numeric) {
    t.meta("max_deviation", deviation);
    out.metrics["max_deviation"] = deviation;
  }
  try {
    const pep::VarianceMinimum vm = pep::position_variance_minimum(params_at(c, 0.0));
    t.meta("var_x_min", vm.var_x);
    t.meta("omega_at_var_x_min", vm.omega);
    out.metrics["var_x_min"] = vm.var_x;
    out.metrics["omega_at_var_x_min"] = vm.omega;
  } catch (const pep::PhysicsRegimeError&) {
  }
  out.tables.push_back(std::move(t));
  return out;
}

nlohmann::ordered_json fit_json(const pep::FitResult& f) {
  nlohmann::ordered_json j;
  j["model"] = pep::to_string(f.model);
  j["a"] = f.a;
  j["b"] = f.b;
  j["residual"] = f.residual;
  return j;
}

Outcome cmd_gapscan(const RunConfig& c) {
  ModelParams base = params_at(c, 0.0);
  const std::vector<double> drives = pep::linspace(c.drive_min, c.drive_max, static_cast<std::size_t>(c.drive_points));
  pep::SweepOptions options;
  options.jobs = c.jobs;
  options.zoom_passes = c.zoom_passes;
  options.max_levels = std::max(pep::kDefaultDenseLevels, *std::max_element(c.n_values.begin(), c.n_values.end()));
  const pep::ScalingStudy study = pep::sweep_gap(base, drives, c.n_values, options);

  Table curves;
  curves.name = "gapscan_curves";
  common_header(curves, "gapscan", c);
  curves.columns = {{"n_levels"}, {"omega_drive", Unit::frequency}, {"gap", Unit::frequency}};
  Table minima;
  minima.name = "gapscan_minima";
  common_header(minima, "gapscan", c);
  minima.columns = {{"n_levels"}, {"omega_at_min", Unit::frequency}, {"gap_min", Unit::frequency}, {"used_in_fit"}};
  for (std::size_t k = 0; k < study.curves.size(); ++k) {
    const pep::GapCurve& g = study.curves[k];
    for (std::size_t i = 0; i < g.omegas.size(); ++i) {
      curves.rows.push_back({static_cast<double>(g.n_levels), g.omegas[i], g.gaps[i]});
    }
    minima.rows.push_back({static_cast<double>(g.n_levels), g.omega_at_min, g.gap_min, study.used_in_fit[k] ? 1.0 : 0.0});
  }
  Outcome out;
  out.metrics["harmonic"] = study.harmonic;
  out.metrics["gap_fit"] = fit_json(study.gap_fit);
  minima.meta("fit_model", pep::to_string(study.gap_fit.model));
  minima.meta("fit_a", study.gap_fit.a);
  minima.meta("fit_b", study.gap_fit.b);
  minima.meta("fit_residual", study.gap_fit.residual);
  if (study.location_fit) {
    out.metrics["location_fit"] = fit_json(*study.location_fit);
    minima.meta("location_fit_a", study.location_fit->a);
    minima.meta("location_fit_b", study.location_fit->b);
  }
  out.tables.push_back(std::move(curves));
  out.tables.push_back(std::move(minima));
  return out;
}

const char* relation_name(pep::Relation r) {
  switch (r) {
    case pep::Relation::at_most:
      return "<=";
    case pep::Relation::at_least:
      return ">=";
    case pep::Relation::equals:
      return "==";
  }
  return "?";
}

Outcome cmd_verify(const RunConfig& c) {
  pep::VerifyOptions options;
  options.jobs = c.jobs;
  Outcome out;
  nlohmann::ordered_json list = nlohmann::ordered_json::array();
  int failed = 0;
  for (int id : c.criteria) {
    const pep::CriterionResult r = pep::run_criterion(id, options);
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["title"] = r.title;
    j["passed"] = r.passed();
    j["runtime_seconds"] = r.runtime_seconds;
    j["runtime_limit_seconds"] = r.runtime_limit_seconds;
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const pep::Check& k : r.checks) {
      checks.push_back({{"name", k.name}, {"value", k.value}, {"relation", relation_name(k.relation)},
                        {"bound", k.bound}, {"passed", k.passed}});
    }
    j["checks"] = checks;
    nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
    for (const auto& [name, value] : r.metrics) metrics[name] = value;
    j["metrics"] = metrics;
    if (!r.error.empty()) j["error"] = r.error;
    if (!r.passed()) {
      ++failed;
      out.errors.push_back({"criterion " + std::to_string(id), "CriterionFailed",
                            r.error.empty() ? "one or more checks failed" : r.error, 3});
    }
    list.push_back(std::move(j));
  }
  out.metrics["criteria"] = list;
  out.metrics["passed"] = static_cast<int>(c.criteria.size()) - failed;
  out.metrics["failed"] = failed;
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

}  // namespace

int Outcome::exit_code() const {
  int code = 0;
  for (const PanelError& e : errors) code = std::max(code, e.exit_code);
  return code;
}

void validate(const std::string& command, const RunConfig& c) {
  require(c.n_levels >= 2, "--n-levels must be at least 2");
  require(c.jobs >= 1, "--jobs must be at least 1");
  require(!c.omegas.empty(), "--omega needs at least one value");
  require(std::is_sorted(c.omegas.begin(), c.omegas.end()) &&
              std::adjacent_find(c.omegas.begin(), c.omegas.end()) == c.omegas.end(),
          "--omega values must be strictly increasing");
  require(c.t_max > 0.0 && c.t_step > 0.0 && c.t_step <= c.t_max, "time grid needs 0 < --t-step <= --t-max");
  require(c.tau_max > 0.0 && c.tau_step > 0.0 && c.tau_step <= c.tau_max,
          "lag grid needs 0 < --tau-step <= --tau-max");
  require(c.w_max > c.w_min && c.w_points >= 2, "frequency grid needs --w-max > --w-min and --w-points >= 2");
  require(c.alpha_extent >= 0.0 && c.alpha_points >= 2, "phase-space grid needs --alpha-extent >= 0 and --alpha-points >= 2");
  require(c.drive_max > c.drive_min && c.drive_points >= 2,
          "drive grid needs --drive-max > --drive-min and --drive-points >= 2");
  require(!c.n_values.empty() && std::is_sorted(c.n_values.begin(), c.n_values.end()) &&
              std::adjacent_find(c.n_values.begin(), c.n_values.end()) == c.n_values.end() && c.n_values.front() >= 2,
          "--n-values must be strictly increasing and >= 2");
  require(c.zoom_passes >= 0, "--zoom-passes must be >= 0");
  if (command == "verify") {
    for (int id : c.criteria) require(id >= 1 && id <= pep::kCriterionCount, "--criteria values must be in 1..10");
  }
  if (command == "gapscan") require(c.n_values.size() >= 3, "gapscan needs at least three --n-values to fit");
}

Outcome run_command(const std::string& command, const RunConfig& c) {
  try {
    if (command == "eigen") return cmd_eigen(c);
    if (command == "population") return cmd_population(c);
    if (command == "coherence") return cmd_coherence(c);
    if (command == "spectrum") return cmd_spectrum(c);
    if (command == "husimi") return cmd_husimi(c);
    if (command == "variances") return cmd_variances(c);
    if (command == "gapscan") return cmd_gapscan(c);
    if (command == "verify") return cmd_verify(c);
  } catch (...) {
    Outcome out;
    out.errors.push_back(describe_current_exception(command));
    return out;
  }
  throw std::invalid_argument("unknown command '" + command + "'");
}

PanelError describe_current_exception(const std::string& panel) {
  PanelError e;
  e.panel = panel;
  const auto set = [&](const char* kind, const std::exception& ex, int code) {
    e.kind = kind;
    e.message = ex.what();
    e.exit_code = code;
  };
  try {
    throw;
  } catch (const pep::DomainError& ex) {
    set("DomainError", ex, 2);
  } catch (const pep::NoSteadyStateError& ex) {
    set("NoSteadyStateError", ex, 2);
  } catch (const pep::DivergenceError& ex) {
    set("DivergenceError", ex, 2);
  } catch (const pep::UnboundedError& ex) {
    set("UnboundedError", ex, 2);
  } catch (const pep::PhysicsRegimeError& ex) {
    set("PhysicsRegimeError", ex, 2);
  } catch (const pep::DimensionError& ex) {
    set("DimensionError", ex, 3);
  } catch (const pep::RangeError& ex) {
    set("RangeError", ex, 3);
  } catch (const pep::CapacityError& ex) {
    set("CapacityError", ex, 3);
  } catch (const pep::ConvergenceError& ex) {
    set("ConvergenceError", ex, 3);
  } catch (const pep::SingularityError& ex) {
    set("SingularityError", ex, 3);
  } catch (const pep::StiffnessError& ex) {
    set("StiffnessError", ex, 3);
  } catch (const pep::TruncationBreachError& ex) {
    set("TruncationBreachError", ex, 3);
  } catch (const pep::PhysicalityError& ex) {
    set("PhysicalityError", ex, 3);
  } catch (const pep::DegeneracyError& ex) {
    set("DegeneracyError", ex, 3);
  } catch (const pep::WindowingError& ex) {
    set("WindowingError", ex, 3);
  } catch (const pep::ResolutionError& ex) {
    set("ResolutionError", ex, 3);
  } catch (const pep::GridExtensionError& ex) {
    set("GridExtensionError", ex, 3);
  } catch (const pep::NumericalFailure& ex) {
    set("NumericalFailure", ex, 3);
  } catch (const std::exception& ex) {
    set("Error", ex, 3);
  } catch (...) {
    e.kind = "Error";
    e.message = "unknown exception";
    e.exit_code = 3;
  }
  return e;
}

}  // namespace peplab
