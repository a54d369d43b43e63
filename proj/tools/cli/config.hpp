#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "weinstein/ensemble.hpp"
#include "weinstein/field.hpp"

namespace swsim {

/// Schema violation, anchored to a 1-based line/column of the config file (0 if unknown).
class SchemaError : public std::runtime_error {
 public:
  SchemaError(const std::string& msg, int line, int column)
      : std::runtime_error(msg), line_(line), column_(column) {}
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

enum class Experiment { TransformSuite, TranslationSuite, Dispersion, StrichartzScan, Solve, PicardVerify };

const char* to_string(Experiment e) noexcept;

struct GridBlock {
  int axial_n = 64;
  double half_width = 6.5;
  int radial_n = 64;
  double radial_extent = 8.0;
};

struct TransformBlock {
  std::vector<double> widths{0.5, 1.0, 2.0, 4.0};
  int random_fields = 20;
  /// Grid for the direct-quadrature cross-check.
  GridBlock direct_grid{16, 5.0, 16, 6.0};
};

struct TranslationBlock {
  int random_triples = 50;
  int young_pairs = 30;
  /// Grid for the O(size^2) direct convolution.
  GridBlock convolution_grid{16, 5.0, 16, 6.0};
};

struct DispersionBlock {
  double s = 1.0;
  double t_min = 2.5;
  double t_max = 5.0;
  double p = std::numeric_limits<double>::infinity();
  int samples = 10;
  /// Relative to the predicted slope.
  double slope_tolerance = 0.02;
  double constant_bound = 1.1;
};

struct StrichartzBlock {
  std::vector<std::pair<double, double>> pairs;
  double T = 2.0;
  double dt = 0.2;
  int ensemble_size = 50;
  weinstein::MixtureRanges ranges{};
  bool grid_doubling = true;
  double tolerance = 0.05;
};

struct DataBlock {
  /// Initial datum exp(-width |x|^2) scaled to L^2 norm `norm` (when > 0).
  double width = 1.0;
  double norm = 0.0;
};

struct SolverBlock {
  std::string mode = "splitting";
  double p = 1.0;
  weinstein::cdouble mu{1.0, 0.0};
  double T = 1.0;
  double dt = 0.01;
  double q = 2.0;
  double r = 2.0;
  int store_every = 1;
  int picard_samples = 129;
  int picard_max_iter = 50;
  double picard_tol = 1e-10;
  /// Inhomogeneous Strichartz constant; nullopt means estimate it (20-member ensemble).
  std::optional<double> strichartz_constant;
  double M = 0.0;
  bool checkpoints = false;
  /// PicardVerify: bracket for the admissible-time bisection.
  double t_search_min = 0.01;
  double t_search_max = 20.0;
  DataBlock data{};
};

struct ExperimentConfig {
  Experiment experiment = Experiment::TransformSuite;
  double alpha = 0.5;
  int d = 1;
  GridBlock grid{};
  std::string output = "out";
  std::uint64_t seed = 1;
  int workers = 1;
  TransformBlock transform{};
  TranslationBlock translation{};
  DispersionBlock dispersion{};
  StrichartzBlock strichartz{};
  SolverBlock solver{};
  /// The parsed document (after command-line overrides), embedded in reports.
  YAML::Node document;
};

/// Loads YAML or JSON. Throws SchemaError.
YAML::Node load_document(const std::string& path);
/// Validates and resolves. Throws SchemaError.
ExperimentConfig parse_config(const YAML::Node& doc);

/// Sets a dotted key ("alpha", "grid.axial_n", "solver.mu") to a scalar.
void set_path(YAML::Node doc, const std::string& dotted, const std::string& value);

}  // namespace swsim
