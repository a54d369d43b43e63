#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"

namespace swsim {

/// One judged quantity: pass iff `value relation tolerance`.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation = "<=";
  bool pass = false;
};

Check check_le(std::string name, double value, double tolerance);
Check check_ge(std::string name, double value, double tolerance);
Check check_lt(std::string name, double value, double tolerance);

struct Report {
  std::string experiment;
  nlohmann::json params;
  std::vector<Check> checks;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json config;

  bool passed() const;
  nlohmann::json to_json() const;
};

/// Every field of the parsed configuration, defaults included.
nlohmann::json resolved_config(const ExperimentConfig& config);

/// Runs the configured experiment, writing CSV files into `out` (created if
/// needed). Numerical failures surface as failed checks; library exceptions
/// (GridTooSmall, BlowupAbort, ...) propagate.
Report run_experiment(const ExperimentConfig& config, const std::filesystem::path& out);

/// Writes summary.json into `out`.
void write_report(const Report& report, const std::filesystem::path& out);

}  // namespace swsim
