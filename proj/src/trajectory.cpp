#include "weinstein/trajectory.hpp"

#include <cmath>

#include "weinstein/errors.hpp"

namespace weinstein {

double Trajectory::dt() const {
  if (times.size() < 2) throw UsageError("trajectory: need two samples for a time step");
  return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

void Trajectory::check_uniform() const {
  if (states.size() != times.size()) throw UsageError("trajectory: times and states differ in length");
  if (times.size() < 2) return;
  const double h = dt();
  if (!(h > 0.0)) throw UsageError("trajectory: times must increase");
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double expected = times.front() + static_cast<double>(k) * h;
    if (std::abs(times[k] - expected) > 1e-9 * std::max(1.0, std::abs(expected))) {
      throw UsageError("trajectory: time grid is not uniform");
    }
    if (!states[k].grid().same_as(states.front().grid())) throw UsageError("trajectory: states on different grids");
  }
}

}  // namespace weinstein
