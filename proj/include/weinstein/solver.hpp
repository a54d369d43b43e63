#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "weinstein/field.hpp"
#include "weinstein/propagator.hpp"
#include "weinstein/strichartz.hpp"
#include "weinstein/trajectory.hpp"

namespace weinstein {

/// F(u) = -i mu |u|^p u.
struct NonlinearitySpec {
  double p = 1.0;
  cdouble mu{0.0, 0.0};
  /// |F(u) - F(v)| <= lipschitz_C (|u|^p + |v|^p) |u - v|.
  double lipschitz_C = 0.0;

  /// lipschitz_C = |mu| max(1, 2^{1-p}, (p+1)/2). Throws DomainError for p <= 0.
  static NonlinearitySpec make(double p, cdouble mu);
};

cdouble nonlinearity_apply(const NonlinearitySpec& spec, cdouble u) noexcept;
Field nonlinearity_apply(const NonlinearitySpec& spec, const Field& u);

/// Exact flow of u' = F(u) over time h. For Im mu > 0 the modulus grows and
/// finite-time blow-up of the ODE throws BlowupAbort.
cdouble nonlinear_flow(const NonlinearitySpec& spec, cdouble u, double h);
void nonlinear_flow(const NonlinearitySpec& spec, std::span<cdouble> u, double h);

/// Half nonlinear step, full linear step, half nonlinear step.
Field strang_step(const PropagatorPlan& plan, const Field& u, double dt, const NonlinearitySpec& spec);
Field strang_step(const Field& u, double dt, const NonlinearitySpec& spec);

enum class SolverMode { Splitting, Picard };

struct SolverConfig {
  NonlinearitySpec nonlinearity;
  double T = 1.0;
  double dt = 0.01;
  SolverMode mode = SolverMode::Splitting;
  /// Monitoring pair for the accumulated L^q L^r diagnostic (Picard: the X_M pair).
  double q = 2.0;
  double r = 2.0;
  /// Splitting: keep every store_every-th state (diagnostics are kept for every step).
  int store_every = 1;
  /// Splitting: abort once sup |u| exceeds this.
  double blowup_threshold = 1e6;
  // Picard mode.
  int picard_samples = 129;
  int picard_max_iter = 50;
  double picard_tol = 1e-10;
  /// Inhomogeneous Strichartz constant stand-in (C in the existence bound is
  /// strichartz_constant * lipschitz_C).
  double strichartz_constant = 1.0;
  /// Ball radius; <= 0 means 2 * strichartz_constant * ||g||_2.
  double M = 0.0;
  /// Optional start u0(t) = I(t) g + start_perturbation * (t / T) h, h a unit random mixture.
  double start_perturbation = 0.0;
  std::uint64_t seed = 1;

  /// Throws ConfigError on dt <= 0, T <= 0, picard_tol <= 0 or too few samples.
  void validate() const;
};

/// Splitting run on [0, T] with per-step diagnostics. Throws BlowupAbort when
/// sup |u| exceeds config.blowup_threshold.
Trajectory evolve(const Field& g, const SolverConfig& config);

/// X = L^inf(0, T; L^2) cap L^q(0, T; L^r) norm of a trajectory on a uniform grid.
double x_norm(std::span<const double> times, std::span<const Field> u, double q, double r);
/// X distance of two trajectories on the same time grid.
double x_distance(std::span<const double> times, std::span<const Field> u, std::span<const Field> v, double q,
                  double r);

struct PicardReport {
  Trajectory trajectory;
  bool converged = false;
  int iterations = 0;
  /// d(u^{n+1}, u^n) for n = 0, 1, ...
  std::vector<double> distances;
  /// distances[n + 1] / distances[n].
  std::vector<double> ratios;
  /// ||u^n||_X for every iterate, starting with u^0.
  std::vector<double> iterate_norms;
  double M = 0.0;
  /// strichartz_constant * lipschitz_C.
  double C = 0.0;
  /// (1 / (2 C M^p))^{q / (q - p - 2)}; +inf if q <= p + 2.
  double T_bound = 0.0;
  bool T_within_bound = false;
};

/// The Duhamel map H(u)(t_k) = I(t_k) g + Phi(F(u))(t_k) on config.picard_samples
/// uniform times in [0, T].
class DuhamelMap {
 public:
  DuhamelMap(const Field& g, const SolverConfig& config);

  std::span<const double> times() const noexcept { return times_; }
  const std::vector<Field>& free_solution() const noexcept { return free_; }
  std::vector<Field> operator()(std::span<const Field> u) const;

 private:
  std::vector<double> times_;
  std::vector<Field> free_;
  NonlinearitySpec spec_;
  std::shared_ptr<const PropagatorPlan> plan_;
};

/// Literal fixed-point iteration u^{n+1} = H(u^n) from u^0(t) = I(t) g.
PicardReport picard_solve(const Field& g, const SolverConfig& config);

/// Largest T in [T_lo, T_hi] (bisection in log T to relative tolerance rel_tol)
/// whose first `ratio_count` contraction ratios all stay below 1. Returns T_lo
/// when no T qualifies, T_hi when all do.
double admissible_time(const Field& g, SolverConfig config, double T_lo, double T_hi, int ratio_count = 2,
                       double rel_tol = 2e-3);

struct BlowupReport {
  /// max over t of (T_end - t)^{(q-p-2)/q} ||u(t)||_2^p; NaN unless q > p + 2.
  double subcritical_proxy = 0.0;
  /// 1 / (4 C^2).
  double subcritical_threshold = 0.0;
  /// ||u||_{L^{p+2}((0, t); L^{p+2})} at the final time and at half time.
  double critical_accum = 0.0;
  double critical_accum_half = 0.0;
  bool critical_diverging = false;
  double max_sup_norm = 0.0;
  bool alarm = false;
  /// lambda = 2 (r - p - 2) / ((p + 2)(r - 2)) and both sides of
  /// ||u||_{L^{p+2} L^{p+2}} <= ||u||^lambda_{L^inf L^2} ||u||^{1-lambda}_{L^q L^r}.
  double lambda = 0.0;
  double interpolation_lhs = 0.0;
  double interpolation_rhs = 0.0;
  bool interpolation_holds = false;
};

/// Blow-up proxies from the states of a trajectory. pair.r must exceed p + 2 for the
/// interpolation check (otherwise it is reported as not applicable: lambda = NaN).
BlowupReport blowup_monitor(const Trajectory& traj, const AdmissiblePair& pair, const NonlinearitySpec& spec,
                            double C);

}  // namespace weinstein
