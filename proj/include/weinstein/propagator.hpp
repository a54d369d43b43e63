#pragma once

#include <span>
#include <vector>

#include "weinstein/field.hpp"
#include "weinstein/grid.hpp"

namespace weinstein {

/// Free Schroedinger-Weinstein group I(t) = inverse(exp(-i t |lambda|^2) forward(.)).
class PropagatorPlan {
 public:
  explicit PropagatorPlan(GridPtr grid);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  /// |lambda|^2 at every frequency node, in field order.
  std::span<const double> symbol() const noexcept { return symbol_; }

  /// Multiplies a spectrum in place by exp(-i t |lambda|^2).
  void apply_multiplier(std::span<cdouble> spectrum, double t) const;
  Field evolve_spectrum(const Field& spectrum, double t) const;

  Field free_evolve(const Field& g, double t) const;

 private:
  GridPtr grid_;
  std::vector<double> symbol_;
};

Field free_evolve(const Field& g, double t);

/// I(t) applied to E_s(x) = exp(-s |x|^2), in closed form:
///   (1 + 4ist)^{-sigma} exp(-s |x|^2 / (1 + 4ist)).
cdouble gaussian_evolved(const WeinsteinParams& params, double s, double t, std::span<const double> x);

/// sup_x |I(t) E_s| = (1 + 16 s^2 t^2)^{-sigma/2}.
double gaussian_evolved_sup(const WeinsteinParams& params, double s, double t);

/// Exponent of the L^{p'} -> L^p decay: (d + 2 alpha + 2)(1/2 - 1/p). p = inf allowed.
double decay_exponent(const WeinsteinParams& params, double p);

/// Weights c_j with integral over [0, k dt] of h ~ sum_{j<=k} c_j h(j dt): Simpson
/// for even k, Simpson plus a closing 3/8 panel for odd k >= 3. k = 1 uses the
/// quadratic through the first three samples, so needs k + 2 samples.
std::vector<double> cumulative_weights(int k, double dt);

/// Phi(F)(t) = integral over [0, t] of I(t - s) F(s) ds for samples F(j t / (n - 1)),
/// j = 0..n-1, all physical fields on one grid. Throws UsageError for n < 3.
Field duhamel(const PropagatorPlan& plan, std::span<const Field> samples, double t);
Field duhamel(std::span<const Field> samples, double t);

/// Phi(F)(t_k) for every sample time t_k = k dt, k = 0..n-1 (n >= 3).
std::vector<Field> duhamel_trajectory(const PropagatorPlan& plan, std::span<const Field> samples, double dt);

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Least-squares line through (log t, log y).
LogLogFit fit_loglog(std::span<const double> t, std::span<const double> y);

struct DecayFit {
  LogLogFit fit;
  std::vector<double> times;
  std::vector<double> norms;
  /// Target slope -decay_exponent(p).
  double expected_slope = 0.0;
  /// max_t ||I(t) E_s||_inf (2t)^sigma / ||E_s||_1 (p = inf only, else 0).
  double normalized_constant = 0.0;
  /// Largest boundary mass fraction seen.
  double boundary_mass = 0.0;
};

/// Boundary mass fraction above which decay_fit gives up.
inline constexpr double kBoundaryMassLimit = 1e-6;

/// Samples t -> ||I(t) E_s||_{alpha,p} at `samples` log-spaced times in
/// [t_min, t_max] and fits the log-log slope. Throws GridTooSmall once the
/// evolved field puts more than kBoundaryMassLimit of its mass near the box edge.
DecayFit decay_fit(const GridPtr& grid, double s, double t_min, double t_max, double p, int samples = 12);

}  // namespace weinstein
