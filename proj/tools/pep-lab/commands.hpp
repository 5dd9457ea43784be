#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "table.hpp"

namespace peplab {

/// Everything a subcommand reads. All quantities in units of gamma = 1.
struct RunConfig {
  double delta = 1.5;
  std::vector<double> omegas = {0.5, 1.0, 1.5, 1.54};
  double theta = 0.0;
  double u = 0.0;
  int n_levels = 40;
  double n0 = 1.0;

  double t_max = 6.0;
  double t_step = 0.05;
  double tau_max = 6.0;
  double tau_step = 0.05;
  double w_min = -6.0;
  double w_max = 6.0;
  int w_points = 1201;
  double alpha_extent = 0.0;  // 0 picks a window from the state
  int alpha_points = 201;
  double drive_min = 0.0;
  double drive_max = 3.0;
  int drive_points = 301;
  std::vector<int> n_values = {10, 15, 20, 25, 30};
  int zoom_passes = 2;
  std::vector<int> criteria = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

  bool numeric = true;
  std::size_t jobs = 1;
};

struct PanelError {
  std::string panel;
  std::string kind;
  std::string message;
  int exit_code = 0;
};

struct Outcome {
  std::vector<Table> tables;
  nlohmann::ordered_json metrics = nlohmann::ordered_json::object();
  std::vector<PanelError> errors;
  /// 0, or 2 / 3 for regime / numerical failures.
  int exit_code() const;
};

/// Validates grids; throws std::invalid_argument with a usage message.
void validate(const std::string& command, const RunConfig& config);

Outcome run_command(const std::string& command, const RunConfig& config);

/// Maps the active exception onto (error class name, exit code).
PanelError describe_current_exception(const std::string& panel);

}  // namespace peplab
