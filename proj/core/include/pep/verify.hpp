#pragma once

// Analytic-versus-numeric acceptance suite. Each criterion runs a fixed scenario and records
// named checks against pinned tolerances; shared by the acceptance test binary and
// `pep-lab verify`.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pep {

enum class Relation { at_most, at_least, equals };

struct Check {
  std::string name;
  double value = 0.0;
  Relation relation = Relation::at_most;
  double bound = 0.0;
  bool passed = false;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  /// Informational numbers that are not pass/fail conditions.
  std::vector<std::pair<std::string, double>> metrics;
  double runtime_seconds = 0.0;
  double runtime_limit_seconds = 0.0;
  /// Set when the scenario threw before finishing.
  std::string error;

  bool passed() const;
};

struct VerifyOptions {
  std::size_t jobs = 1;
};

inline constexpr int kCriterionCount = 10;

std::string criterion_title(int id);

/// Runs criterion `id` (1..10). Never throws for failures inside the scenario; those land in
/// `error` and fail the criterion.
CriterionResult run_criterion(int id, const VerifyOptions& options = {});

/// "PASS" / "FAIL" line for the criterion followed by one indented line per check.
std::string format_result(const CriterionResult& result);

}  // namespace pep
