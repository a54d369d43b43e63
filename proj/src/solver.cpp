#include "weinstein/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"
#include "weinstein/transform.hpp"

namespace weinstein {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Running ||y||_{L^q(0, t_k)} for every k (0 at k = 0).
std::vector<double> running_time_norm(std::span<const double> times, std::span<const double> y, double q) {
  std::vector<double> out(times.size(), 0.0);
  for (std::size_t k = 1; k < times.size(); ++k) out[k] = time_norm(times.subspan(0, k + 1), y.subspan(0, k + 1), q, times[0], times[k]);
  return out;
}

std::vector<double> norms_of(std::span<const Field> u, double r) {
  std::vector<double> out;
  out.reserve(u.size());
  for (const Field& f : u) out.push_back(lp_norm(f, r));
  return out;
}

}  // namespace

NonlinearitySpec NonlinearitySpec::make(double p, cdouble mu) {
  if (!(p > 0.0)) throw DomainError("nonlinearity: power p must be positive");
  NonlinearitySpec s;
  s.p = p;
  s.mu = mu;
  s.lipschitz_C = std::abs(mu) * std::max({1.0, std::pow(2.0, 1.0 - p), 0.5 * (p + 1.0)});
  return s;
}

cdouble nonlinearity_apply(const NonlinearitySpec& spec, cdouble u) noexcept {
  const double a = std::abs(u);
  if (a == 0.0) return 0.0;
  return cdouble(0.0, -1.0) * spec.mu * std::pow(a, spec.p) * u;
}

Field nonlinearity_apply(const NonlinearitySpec& spec, const Field& u) {
  u.require_space(Space::Physical, "nonlinearity_apply");
  Field out = u;
  for (cdouble& v : out.values()) v = nonlinearity_apply(spec, v);
  return out;
}

cdouble nonlinear_flow(const NonlinearitySpec& spec, cdouble u, double h) {
  const double a0 = std::abs(u);
  if (a0 == 0.0 || h == 0.0) return u;
  const double ap = std::pow(a0, spec.p);
  const double re = spec.mu.real(), im = spec.mu.imag();
  if (im == 0.0) return u * std::polar(1.0, -re * ap * h);
  // |u|' = Im(mu) |u|^{p+1}, arg(u)' = -Re(mu) |u|^p.
  const double base = 1.0 - spec.p * im * h * ap;
  if (!(base > 0.0)) throw BlowupAbort("nonlinear flow: pointwise blow-up inside a step", h);
  const double modulus = std::pow(base, -1.0 / spec.p);
  const double phase = re / (spec.p * im) * std::log(base);
  return u * modulus * std::polar(1.0, phase);
}

void nonlinear_flow(const NonlinearitySpec& spec, std::span<cdouble> u, double h) {
  for (cdouble& v : u) v = nonlinear_flow(spec, v, h);
}

Field strang_step(const PropagatorPlan& plan, const Field& u, double dt, const NonlinearitySpec& spec) {
  u.require_space(Space::Physical, "strang_step");
  Field w = u;
  nonlinear_flow(spec, w.values(), 0.5 * dt);
  w = plan.free_evolve(w, dt);
  nonlinear_flow(spec, w.values(), 0.5 * dt);
  return w;
}

Field strang_step(const Field& u, double dt, const NonlinearitySpec& spec) {
  return strang_step(PropagatorPlan(u.grid_ptr()), u, dt, spec);
}

void SolverConfig::validate() const {
  if (!(T > 0.0)) throw ConfigError("solver: T must be positive");
  if (!(dt > 0.0)) throw ConfigError("solver: dt must be positive");
  if (!(picard_tol > 0.0)) throw ConfigError("solver: picard_tol must be positive");
  if (picard_samples < 3) throw ConfigError("solver: picard_samples must be >= 3");
  if (picard_max_iter < 1) throw ConfigError("solver: picard_max_iter must be >= 1");
  if (store_every < 1) throw ConfigError("solver: store_every must be >= 1");
  if (!(q >= 1.0) || !(r >= 1.0)) throw ConfigError("solver: monitoring exponents must be >= 1");
  if (!(nonlinearity.p > 0.0)) throw ConfigError("solver: nonlinearity power must be positive");
}

Trajectory evolve(const Field& g, const SolverConfig& config) {
  config.validate();
  g.require_space(Space::Physical, "evolve");
  const int steps = std::max(1, static_cast<int>(std::lround(config.T / config.dt)));
  if (steps % config.store_every != 0) throw ConfigError("evolve: step count must be a multiple of store_every");
  const double h = config.T / steps;
  const PropagatorPlan plan(g.grid_ptr());

  Trajectory traj;
  std::vector<double> step_times, step_lr;
  Field u = g;
  for (int k = 0; k <= steps; ++k) {
    if (k > 0) u = strang_step(plan, u, h, config.nonlinearity);
    const double t = k * h;
    StepDiagnostics diag;
    diag.time = t;
    diag.mass = lp_norm(u, 2.0);
    diag.sup_norm = lp_norm(u, std::numeric_limits<double>::infinity());
    step_times.push_back(t);
    step_lr.push_back(lp_norm(u, config.r));
    traj.diagnostics.push_back(diag);
    if (!std::isfinite(diag.sup_norm) || diag.sup_norm > config.blowup_threshold) {
      throw BlowupAbort("evolve: sup norm " + format_double(diag.sup_norm) + " exceeds " +
                            format_double(config.blowup_threshold) + " (focusing blow-up proxy)",
                        t);
    }
    if (k % config.store_every == 0) {
      traj.times.push_back(t);
      traj.states.push_back(u);
    }
  }
  const auto accum = running_time_norm(step_times, step_lr, config.q);
  for (std::size_t k = 0; k < accum.size(); ++k) traj.diagnostics[k].lqlr_accum = accum[k];
  return traj;
}

double x_norm(std::span<const double> times, std::span<const Field> u, double q, double r) {
  const auto l2 = norms_of(u, 2.0);
  return *std::max_element(l2.begin(), l2.end()) + time_norm(times, norms_of(u, r), q, times.front(), times.back());
}

double x_distance(std::span<const double> times, std::span<const Field> u, std::span<const Field> v, double q,
                  double r) {
  if (u.size() != v.size() || u.size() != times.size()) throw UsageError("x_distance: length mismatch");
  std::vector<Field> diff;
  diff.reserve(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) diff.push_back(u[k] - v[k]);
  return x_norm(times, diff, q, r);
}

DuhamelMap::DuhamelMap(const Field& g, const SolverConfig& config)
    : spec_(config.nonlinearity), plan_(std::make_shared<PropagatorPlan>(g.grid_ptr())) {
  config.validate();
  g.require_space(Space::Physical, "DuhamelMap");
  const int n = config.picard_samples;
  const double dt = config.T / (n - 1);
  const Field spectrum = forward(g);
  for (int k = 0; k < n; ++k) {
    times_.push_back(k * dt);
    free_.push_back(k == 0 ? g : inverse(plan_->evolve_spectrum(spectrum, k * dt)));
  }
}

std::vector<Field> DuhamelMap::operator()(std::span<const Field> u) const {
  if (u.size() != times_.size()) throw UsageError("DuhamelMap: trajectory length mismatch");
  std::vector<Field> forcing;
  forcing.reserve(u.size());
  for (const Field& f : u) forcing.push_back(nonlinearity_apply(spec_, f));
  std::vector<Field> out = duhamel_trajectory(*plan_, forcing, times_[1] - times_[0]);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] += free_[k];
  return out;
}

PicardReport picard_solve(const Field& g, const SolverConfig& config) {
  config.validate();
  const DuhamelMap map(g, config);
  const auto times = map.times();
  const double q = config.q, r = config.r, p = config.nonlinearity.p;

  PicardReport rep;
  rep.C = config.strichartz_constant * config.nonlinearity.lipschitz_C;
  rep.M = config.M > 0.0 ? config.M : 2.0 * config.strichartz_constant * lp_norm(g, 2.0);
  const double theta = (q - p - 2.0) / q;
  rep.T_bound = theta > 0.0 && rep.C > 0.0 ? std::pow(1.0 / (2.0 * rep.C * std::pow(rep.M, p)), 1.0 / theta)
                                           : std::numeric_limits<double>::infinity();
  rep.T_within_bound = config.T <= rep.T_bound;

  std::vector<Field> u = map.free_solution();
  if (config.start_perturbation != 0.0) {
    std::mt19937_64 rng(member_seed(config.seed, 0x5eed));
    Field h = GaussianMixture::random(rng, g.grid().dim(), MixtureRanges{}).sample(g.grid_ptr());
    h *= config.start_perturbation / lp_norm(h, 2.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
      Field bump = h;
      bump *= times[k] / config.T;
      u[k] += bump;
    }
  }
  rep.iterate_norms.push_back(x_norm(times, u, q, r));

  // Last two iterate differences, for the time-local ratio column.
  std::vector<double> prev_l2, prev_lr, last_l2, last_lr;
  for (int n = 0; n < config.picard_max_iter; ++n) {
    std::vector<Field> next = map(u);
    std::vector<Field> diff;
    diff.reserve(u.size());
    for (std::size_t k = 0; k < u.size(); ++k) diff.push_back(next[k] - u[k]);
    prev_l2 = std::move(last_l2);
    prev_lr = std::move(last_lr);
    last_l2 = norms_of(diff, 2.0);
    last_lr = norms_of(diff, r);
    const double dist = *std::max_element(last_l2.begin(), last_l2.end()) +
                        time_norm(times, last_lr, q, times.front(), times.back());
    rep.distances.push_back(dist);
    if (rep.distances.size() >= 2) rep.ratios.push_back(dist / rep.distances[rep.distances.size() - 2]);
    u = std::move(next);
    rep.iterate_norms.push_back(x_norm(times, u, q, r));
    rep.iterations = n + 1;
    if (dist < config.picard_tol) {
      rep.converged = true;
      break;
    }
  }

  Trajectory& traj = rep.trajectory;
  traj.times.assign(times.begin(), times.end());
  const auto lr = norms_of(u, r);
  const auto accum = running_time_norm(times, lr, q);
  auto prefix_dist = [&](const std::vector<double>& l2, const std::vector<double>& lrv, std::size_t k) {
    const double sup = *std::max_element(l2.begin(), l2.begin() + k + 1);
    return sup + (k == 0 ? 0.0 : time_norm(times.subspan(0, k + 1), std::span(lrv).subspan(0, k + 1), q, times[0], times[k]));
  };
  for (std::size_t k = 0; k < u.size(); ++k) {
    StepDiagnostics d;
    d.time = times[k];
    d.mass = lp_norm(u[k], 2.0);
    d.sup_norm = lp_norm(u[k], std::numeric_limits<double>::infinity());
    d.lqlr_accum = accum[k];
    if (!prev_l2.empty()) {
      const double den = prefix_dist(prev_l2, prev_lr, k);
      d.contraction_ratio = den > 0.0 ? prefix_dist(last_l2, last_lr, k) / den : kNaN;
    }
    traj.diagnostics.push_back(d);
  }
  traj.states = std::move(u);
  return rep;
}

double admissible_time(const Field& g, SolverConfig config, double T_lo, double T_hi, int ratio_count,
                       double rel_tol) {
  if (!(T_lo > 0.0 && T_hi > T_lo)) throw DomainError("admissible_time: need 0 < T_lo < T_hi");
  if (ratio_count < 1) throw DomainError("admissible_time: ratio_count must be >= 1");
  config.picard_max_iter = ratio_count + 1;
  config.picard_tol = std::numeric_limits<double>::min();
  auto contracts = [&](double T) {
    config.T = T;
    const PicardReport rep = picard_solve(g, config);
    for (double r : rep.ratios) {
      if (!(r < 1.0)) return false;
    }
    return true;
  };
  if (!contracts(T_lo)) return T_lo;
  if (contracts(T_hi)) return T_hi;
  double lo = T_lo, hi = T_hi;
  while (hi / lo > 1.0 + rel_tol) {
    const double mid = std::sqrt(lo * hi);
    (contracts(mid) ? lo : hi) = mid;
  }
  return std::sqrt(lo * hi);
}

BlowupReport blowup_monitor(const Trajectory& traj, const AdmissiblePair& pair, const NonlinearitySpec& spec,
                            double C) {
  traj.check_uniform();
  if (traj.size() < 3) throw UsageError("blowup_monitor: need at least 3 stored states");
  const std::span<const double> times(traj.times);
  const double p = spec.p, q = pair.q, r = pair.r;
  const auto l2 = norms_of(traj.states, 2.0);
  const auto lr = norms_of(traj.states, r);
  const auto lp2 = norms_of(traj.states, p + 2.0);

  BlowupReport rep;
  const double t_end = times.back();
  const double theta = (q - p - 2.0) / q;
  // Only meaningful in the subcritical range q > p + 2.
  if (!(theta > 0.0)) rep.subcritical_proxy = kNaN;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    if (theta > 0.0) {
      rep.subcritical_proxy = std::max(rep.subcritical_proxy, std::pow(t_end - times[k], theta) * std::pow(l2[k], p));
    }
    rep.max_sup_norm = std::max(rep.max_sup_norm, lp_norm(traj.states[k], std::numeric_limits<double>::infinity()));
  }
  rep.subcritical_threshold = 1.0 / (4.0 * C * C);

  const std::size_t half = (traj.size() - 1) / 2;
  rep.critical_accum = time_norm(times, lp2, p + 2.0, times.front(), t_end);
  rep.critical_accum_half = half > 0 ? time_norm(times, lp2, p + 2.0, times.front(), times[half]) : 0.0;
  // Accelerating: the second half contributes at least as much as the first.
  rep.critical_diverging = std::pow(rep.critical_accum, p + 2.0) >= 2.0 * std::pow(rep.critical_accum_half, p + 2.0);
  rep.alarm = rep.critical_diverging || !std::isfinite(rep.critical_accum) || !std::isfinite(rep.max_sup_norm) ||
              rep.max_sup_norm > 1e6;

  if (r > p + 2.0 && !std::isinf(r)) {
    rep.lambda = 2.0 * (r - p - 2.0) / ((p + 2.0) * (r - 2.0));
    rep.interpolation_lhs = rep.critical_accum;
    const double linf_l2 = *std::max_element(l2.begin(), l2.end());
    const double lq_lr = time_norm(times, lr, q, times.front(), t_end);
    rep.interpolation_rhs = std::pow(linf_l2, rep.lambda) * std::pow(lq_lr, 1.0 - rep.lambda);
    rep.interpolation_holds = rep.interpolation_lhs <= rep.interpolation_rhs * (1.0 + 1e-3);
  } else {
    rep.lambda = kNaN;
  }
  return rep;
}

}  // namespace weinstein
