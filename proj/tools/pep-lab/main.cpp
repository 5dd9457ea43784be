// pep-lab: closed-form versus Lindblad numerics for the parametrically driven oscillator.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "commands.hpp"
#include "json_config.hpp"
#include "table.hpp"

#ifndef PEP_VERSION
#define PEP_VERSION "unknown"
#endif

namespace {

constexpr int kUsageError = 1;

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  peplab::RunConfig cfg;
  std::string out_dir = "pep-out";
  std::string format = "csv";
  std::string command_key;
  double gamma = 1.0;
  bool reproducible = false;

  CLI::App app{"Exceptional-point lab: analytic and Lindblad results for a two-photon driven oscillator.\n"
               "All inputs are in units of the loss rate (gamma = 1)."};
  app.config_formatter(std::make_shared<peplab::JsonConfig>());
  app.set_config("--config", "", "JSON file with option values; command-line flags win");
  app.option_defaults()->always_capture_default();

  app.add_option("--delta", cfg.delta, "Detuning Delta")->group("Model");
  app.add_option("--omega", cfg.omegas, "Drive amplitude(s) Omega, comma separated")->delimiter(',')->group("Model");
  app.add_option("--theta", cfg.theta, "Drive phase")->group("Model");
  app.add_option("--u", cfg.u, "Kerr strength U")->group("Model");
  app.add_option("--n-levels", cfg.n_levels, "Fock truncation N for numerics")->group("Model");
  app.add_option("--n0", cfg.n0, "Initial population (population; numerics need an integer)")->group("Model");

  app.add_option("--t-max", cfg.t_max, "Time window end")->group("Grids");
  app.add_option("--t-step", cfg.t_step, "Time step")->group("Grids");
  app.add_option("--tau-max", cfg.tau_max, "Lag window end")->group("Grids");
  app.add_option("--tau-step", cfg.tau_step, "Lag step")->group("Grids");
  app.add_option("--w-min", cfg.w_min, "Frequency grid start")->group("Grids");
  app.add_option("--w-max", cfg.w_max, "Frequency grid end")->group("Grids");
  app.add_option("--w-points", cfg.w_points, "Frequency grid points")->group("Grids");
  app.add_option("--alpha-extent", cfg.alpha_extent, "Half-width of the square Q grid (0 = fit to the state)")
      ->group("Grids");
  app.add_option("--alpha-points", cfg.alpha_points, "Q grid points per axis when --alpha-extent is set")
      ->group("Grids");
  app.add_option("--drive-min", cfg.drive_min, "Drive sweep start (eigen, variances, gapscan)")->group("Grids");
  app.add_option("--drive-max", cfg.drive_max, "Drive sweep end")->group("Grids");
  app.add_option("--drive-points", cfg.drive_points, "Drive sweep points")->group("Grids");
  app.add_option("--n-values", cfg.n_values, "Truncations for gapscan, comma separated")->delimiter(',')->group("Grids");
  app.add_option("--zoom-passes", cfg.zoom_passes, "Refinement passes around each gap minimum")->group("Grids");
  app.add_option("--criteria", cfg.criteria, "Acceptance criteria to run (verify)")->delimiter(',')->group("Grids");

  app.add_flag("!--no-numeric", cfg.numeric, "Skip the Lindblad comparison columns")->group("Output");
  app.add_option("--out", out_dir, "Output directory")->group("Output");
  app.add_option("--format", format, "Data format")->check(CLI::IsMember({"csv", "json"}))->group("Output");
  app.add_option("--gamma", gamma, "Loss rate used to rescale time/frequency columns for presentation")
      ->check(CLI::PositiveNumber)
      ->group("Output");
  app.add_flag("--reproducible", reproducible, "Omit version and timestamp header fields")->group("Output");
  app.add_option("--jobs", cfg.jobs, "Parallel workers for sweeps")->group("Output");
  app.add_option("--command", command_key, "Subcommand (for config files)")->group("");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"eigen", "Moment-system eigenvalues over a drive sweep"},
      {"population", "Transient population n(t) per drive"},
      {"coherence", "g1 and g2 versus lag per drive"},
      {"spectrum", "Emission spectrum per drive"},
      {"husimi", "Husimi Q of the numeric steady state per drive"},
      {"variances", "Steady quadrature variances over a drive sweep"},
      {"gapscan", "Liouvillian gap minima versus truncation with scaling fit"},
      {"verify", "Run the analytic-versus-numeric acceptance suite"},
  };
  for (const auto& [name, help] : commands) app.add_subcommand(name, help)->fallthrough();
  app.require_subcommand(0, 1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  std::string command = command_key;
  if (!app.get_subcommands().empty()) {
    const std::string chosen = app.get_subcommands().front()->get_name();
    if (!command_key.empty() && command_key != chosen && app.count("--command") > 0) {
      std::cerr << "error: --command " << command_key << " conflicts with subcommand " << chosen << "\n";
      return kUsageError;
    }
    command = chosen;
  }
  if (command.empty()) {
    std::cerr << app.help();
    return kUsageError;
  }

  try {
    peplab::validate(command, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  peplab::Outcome outcome;
  try {
    outcome = peplab::run_command(command, cfg);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  }

  for (peplab::Table& t : outcome.tables) {
    if (!reproducible) {
      t.meta("version", PEP_VERSION);
      t.meta("generated", utc_now());
    }
    if (gamma != 1.0) t.meta("gamma", gamma);
    if (const std::string problem = peplab::schema_problem(t); !problem.empty()) {
      outcome.errors.push_back({t.name, "SchemaError", problem, 3});
    }
  }

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    std::cerr << "error: cannot create " << out_dir << ": " << ec.message() << "\n";
    return kUsageError;
  }
  nlohmann::ordered_json files = nlohmann::ordered_json::array();
  const auto write_file = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    f << text;
    f.close();
    if (!f) {
      std::cerr << "error: cannot write " << path.string() << "\n";
      return false;
    }
    files.push_back(path.filename().string());
    return true;
  };
  if (format == "csv") {
    for (const peplab::Table& t : outcome.tables) {
      std::ostringstream s;
      peplab::write_csv(s, t, gamma);
      if (!write_file(std::filesystem::path(out_dir) / (t.name + ".csv"), s.str())) return kUsageError;
    }
  } else if (!outcome.tables.empty()) {
    nlohmann::ordered_json data = nlohmann::ordered_json::array();
    for (const peplab::Table& t : outcome.tables) data.push_back(peplab::to_json(t, gamma));
    if (!write_file(std::filesystem::path(out_dir) / (command + ".json"), data.dump(1) + "\n")) return kUsageError;
  }

  nlohmann::ordered_json summary;
  summary["command"] = command;
  if (!reproducible) {
    summary["version"] = PEP_VERSION;
    summary["generated"] = utc_now();
  }
  summary["params"] = {{"delta", cfg.delta}, {"omega", cfg.omegas}, {"theta", cfg.theta},
                       {"u", cfg.u},         {"n_levels", cfg.n_levels}};
  summary["files"] = files;
  summary["metrics"] = outcome.metrics;
  nlohmann::ordered_json errors = nlohmann::ordered_json::array();
  for (const peplab::PanelError& e : outcome.errors) {
    errors.push_back({{"panel", e.panel}, {"kind", e.kind}, {"message", e.message}, {"exit_code", e.exit_code}});
  }
  summary["errors"] = errors;
  const int code = outcome.exit_code();
  summary["exit_code"] = code;
  const std::string text = summary.dump(2) + "\n";
  if (!write_file(std::filesystem::path(out_dir) / (command + "_summary.json"), text)) return kUsageError;
  std::cout << text;
  return code;
}
