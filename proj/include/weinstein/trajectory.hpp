#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "weinstein/field.hpp"

namespace weinstein {

struct StepDiagnostics {
  double time = 0.0;
  /// ||u(t)||_{alpha,2}
  double mass = 0.0;
  double sup_norm = 0.0;
  /// Running L^q((0, t); L^r) norm for the run's monitoring pair.
  double lqlr_accum = 0.0;
  /// Picard runs only.
  double contraction_ratio = std::numeric_limits<double>::quiet_NaN();
};

/// Fields on one grid at increasing, uniformly spaced times.
struct Trajectory {
  std::vector<double> times;
  std::vector<Field> states;
  std::vector<StepDiagnostics> diagnostics;

  std::size_t size() const noexcept { return times.size(); }
  bool empty() const noexcept { return times.empty(); }
  /// Sample spacing; throws UsageError if fewer than two samples.
  double dt() const;
  /// Throws UsageError unless times increase uniformly (relative 1e-9) and all
  /// states share the first state's grid.
  void check_uniform() const;
};

}  // namespace weinstein
