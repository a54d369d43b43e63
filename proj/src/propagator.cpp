#include "weinstein/propagator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"
#include "weinstein/transform.hpp"

namespace weinstein {

PropagatorPlan::PropagatorPlan(GridPtr grid) : grid_(std::move(grid)), symbol_(grid_->size()) {
  for (std::size_t i = 0; i < symbol_.size(); ++i) symbol_[i] = grid_->frequency_norm_sq(i);
}

void PropagatorPlan::apply_multiplier(std::span<cdouble> spectrum, double t) const {
  if (t == 0.0) return;
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= std::polar(1.0, -t * symbol_[i]);
}

Field PropagatorPlan::evolve_spectrum(const Field& spectrum, double t) const {
  spectrum.require_space(Space::Frequency, "evolve_spectrum");
  if (!spectrum.grid().same_as(*grid_)) throw UsageError("evolve_spectrum: grid mismatch");
  Field out = spectrum;
  apply_multiplier(out.values(), t);
  return out;
}

Field PropagatorPlan::free_evolve(const Field& g, double t) const {
  g.require_space(Space::Physical, "free_evolve");
  if (!g.grid().same_as(*grid_)) throw UsageError("free_evolve: grid mismatch");
  if (t == 0.0) return g;
  Field spec = forward(g);
  apply_multiplier(spec.values(), t);
  return inverse(spec);
}

Field free_evolve(const Field& g, double t) { return PropagatorPlan(g.grid_ptr()).free_evolve(g, t); }

cdouble gaussian_evolved(const WeinsteinParams& params, double s, double t, std::span<const double> x) {
  double r2 = 0.0;
  for (int i = 0; i <= params.d; ++i) r2 += x[i] * x[i];
  const cdouble z(1.0, 4.0 * s * t);
  return std::pow(z, -params.sigma) * std::exp(-s * r2 / z);
}

double gaussian_evolved_sup(const WeinsteinParams& params, double s, double t) {
  return std::pow(1.0 + 16.0 * s * s * t * t, -0.5 * params.sigma);
}

double decay_exponent(const WeinsteinParams& params, double p) {
  const double inv_p = std::isinf(p) ? 0.0 : 1.0 / p;
  return 2.0 * params.sigma * (0.5 - inv_p);
}

std::vector<double> cumulative_weights(int k, double dt) {
  if (k < 0) throw DomainError("cumulative_weights: negative interval count");
  if (k == 0) return {0.0};
  if (k == 1) return {5.0 * dt / 12.0, 8.0 * dt / 12.0, -dt / 12.0};
  std::vector<double> w(static_cast<std::size_t>(k) + 1, 0.0);
  const int simpson_end = (k % 2 == 0) ? k : k - 3;
  for (int j = 0; j + 2 <= simpson_end; j += 2) {
    w[j] += dt / 3.0;
    w[j + 1] += 4.0 * dt / 3.0;
    w[j + 2] += dt / 3.0;
  }
  if (k % 2 == 1) {
    const double c = 3.0 * dt / 8.0;
    w[k - 3] += c;
    w[k - 2] += 3.0 * c;
    w[k - 1] += 3.0 * c;
    w[k] += c;
  }
  return w;
}

namespace {

void check_samples(const PropagatorPlan& plan, std::span<const Field> samples, const char* op) {
  if (samples.size() < 3) throw UsageError(std::string(op) + ": need at least 3 time samples");
  for (const Field& f : samples) {
    f.require_space(Space::Physical, op);
    if (!f.grid().same_as(plan.grid())) throw UsageError(std::string(op) + ": samples on different grids");
  }
}

// exp(+i t_j |lambda|^2) forward(F_j): integrand pulled back to time 0.
std::vector<Field> pulled_back(const PropagatorPlan& plan, std::span<const Field> samples, double dt) {
  std::vector<Field> out;
  out.reserve(samples.size());
  for (std::size_t j = 0; j < samples.size(); ++j) {
    Field spec = forward(samples[j]);
    plan.apply_multiplier(spec.values(), -static_cast<double>(j) * dt);
    out.push_back(std::move(spec));
  }
  return out;
}

void axpy(std::span<cdouble> acc, double c, const Field& x) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += c * x[i];
}

}  // namespace

Field duhamel(const PropagatorPlan& plan, std::span<const Field> samples, double t) {
  check_samples(plan, samples, "duhamel");
  const int k = static_cast<int>(samples.size()) - 1;
  const double dt = t / k;
  const auto weights = cumulative_weights(k, dt);
  const auto pulled = pulled_back(plan, samples, dt);
  Field acc(plan.grid_ptr(), Space::Frequency);
  for (std::size_t j = 0; j < weights.size(); ++j) axpy(acc.values(), weights[j], pulled[j]);
  plan.apply_multiplier(acc.values(), t);
  return inverse(acc);
}

Field duhamel(std::span<const Field> samples, double t) {
  if (samples.empty()) throw UsageError("duhamel: need at least 3 time samples");
  return duhamel(PropagatorPlan(samples.front().grid_ptr()), samples, t);
}

std::vector<Field> duhamel_trajectory(const PropagatorPlan& plan, std::span<const Field> samples, double dt) {
  check_samples(plan, samples, "duhamel_trajectory");
  const auto pulled = pulled_back(plan, samples, dt);
  const std::size_t n = samples.size();

  std::vector<Field> out;
  out.reserve(n);
  out.emplace_back(plan.grid_ptr(), Space::Physical);

  // Simpson prefix sums at the two most recent even indices.
  Field even_prev(plan.grid_ptr(), Space::Frequency);
  Field even_cur(plan.grid_ptr(), Space::Frequency);
  for (std::size_t k = 1; k < n; ++k) {
    Field acc(plan.grid_ptr(), Space::Frequency);
    if (k == 1) {
      const auto w = cumulative_weights(1, dt);
      for (int j = 0; j < 3; ++j) axpy(acc.values(), w[j], pulled[j]);
    } else if (k % 2 == 0) {
      even_prev = even_cur;
      axpy(even_cur.values(), dt / 3.0, pulled[k - 2]);
      axpy(even_cur.values(), 4.0 * dt / 3.0, pulled[k - 1]);
      axpy(even_cur.values(), dt / 3.0, pulled[k]);
      acc = even_cur;
    } else {
      // k - 1 is even and already in even_cur, so k - 3 is even_prev.
      acc = even_prev;
      const double c = 3.0 * dt / 8.0;
      axpy(acc.values(), c, pulled[k - 3]);
      axpy(acc.values(), 3.0 * c, pulled[k - 2]);
      axpy(acc.values(), 3.0 * c, pulled[k - 1]);
      axpy(acc.values(), c, pulled[k]);
    }
    plan.apply_multiplier(acc.values(), static_cast<double>(k) * dt);
    out.push_back(inverse(acc));
  }
  return out;
}

LogLogFit fit_loglog(std::span<const double> t, std::span<const double> y) {
  if (t.size() != y.size() || t.size() < 2) throw UsageError("fit_loglog: need at least two matching points");
  const auto n = static_cast<double>(t.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && y[i] > 0.0)) throw DomainError("fit_loglog: values must be positive");
    sx += std::log(t[i]);
    sy += std::log(y[i]);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double dx = std::log(t[i]) - mx, dy = std::log(y[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  LogLogFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

DecayFit decay_fit(const GridPtr& grid, double s, double t_min, double t_max, double p, int samples) {
  if (!(s > 0.0)) throw DomainError("decay_fit: Gaussian width must be positive");
  if (!(t_min > 0.0 && t_max > t_min)) throw DomainError("decay_fit: need 0 < t_min < t_max");
  if (samples < 2) throw DomainError("decay_fit: need at least two time samples");
  if (p < 2.0) throw DomainError("decay_fit: p must lie in [2, inf]");
  const WeinsteinParams& params = grid->params();
  const PropagatorPlan plan(grid);
  const Field g = Field::sample(grid, [s](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cdouble(std::exp(-s * r2), 0.0);
  });
  const double g_l1 = lp_norm(g, 1.0);
  const Field spectrum = forward(g);

  DecayFit out;
  out.expected_slope = -decay_exponent(params, p);
  for (int i = 0; i < samples; ++i) {
    const double t = t_min * std::pow(t_max / t_min, static_cast<double>(i) / (samples - 1));
    const Field u = inverse(plan.evolve_spectrum(spectrum, t));
    const double edge = boundary_mass_fraction(u);
    out.boundary_mass = std::max(out.boundary_mass, edge);
    if (edge > kBoundaryMassLimit) {
      throw GridTooSmall("decay_fit: grid too small, boundary mass fraction " + format_double(edge) + " at t = " +
                         format_double(t) + " (limit " + format_double(kBoundaryMassLimit) + ")");
    }
    const double norm = lp_norm(u, p);
    out.times.push_back(t);
    out.norms.push_back(norm);
    if (std::isinf(p)) {
      out.normalized_constant = std::max(out.normalized_constant, norm * std::pow(2.0 * t, params.sigma) / g_l1);
    }
  }
  out.fit = fit_loglog(out.times, out.norms);
  return out;
}

}  // namespace weinstein
