#include "weinstein/strichartz.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <mutex>
#include <thread>

#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"
#include "weinstein/propagator.hpp"
#include "weinstein/transform.hpp"

namespace weinstein {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double reciprocal(double p) { return std::isinf(p) ? 0.0 : 1.0 / p; }

// Index of the sample at time s, or -1.
std::ptrdiff_t sample_index(std::span<const double> times, double s) {
  if (times.size() < 2) return times.size() == 1 && times[0] == s ? 0 : -1;
  const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  const double pos = (s - times.front()) / h;
  const double k = std::round(pos);
  if (k < 0.0 || k > static_cast<double>(times.size() - 1)) return -1;
  if (std::abs(pos - k) > 1e-9 * std::max(1.0, std::abs(pos))) return -1;
  return static_cast<std::ptrdiff_t>(k);
}

}  // namespace

const char* to_string(Admissibility a) noexcept {
  switch (a) {
    case Admissibility::Sharp:
      return "sharp";
    case Admissibility::Nonsharp:
      return "nonsharp";
    case Admissibility::Inadmissible:
      return "inadmissible";
  }
  return "?";
}

AdmissiblePair classify(double sigma, double q, double r) {
  if (!(q > 0.0) || !(r > 0.0)) throw DomainError("classify: exponents must be positive");
  AdmissiblePair pair{q, r, Admissibility::Inadmissible};
  if (q < 2.0 || r < 2.0) return pair;
  if (q == 2.0 && std::isinf(r) && sigma == 1.0) return pair;
  const double gap = reciprocal(q) + sigma * reciprocal(r) - 0.5 * sigma;
  if (std::abs(gap) <= kAdmissibilityTol) {
    pair.classification = Admissibility::Sharp;
  } else if (gap < 0.0) {
    pair.classification = Admissibility::Nonsharp;
  }
  return pair;
}

AdmissiblePair classify(const WeinsteinParams& params, double q, double r) { return classify(params.sigma, q, r); }

double conjugate(double p) {
  if (!(p >= 1.0)) throw DomainError("conjugate: exponent must be >= 1");
  if (p == 1.0) return kInf;
  if (std::isinf(p)) return 1.0;
  return p / (p - 1.0);
}

double critical_power(const WeinsteinParams& params) { return 2.0 / params.sigma; }

double sharp_r(double sigma, double q) {
  if (std::isinf(q)) return 2.0;
  if (!(sigma * q > 2.0)) throw DomainError("sharp_r: need sigma q > 2");
  return 2.0 * sigma * q / (sigma * q - 2.0);
}

double endpoint_r(const WeinsteinParams& params) {
  const double denom = params.d + 2.0 * params.alpha;
  if (!(denom > 0.0)) throw DomainError("endpoint_r: needs d + 2 alpha > 0");
  return (2.0 * params.d + 4.0 * params.alpha + 4.0) / denom;
}

double time_norm(std::span<const double> times, std::span<const double> values, double q, double a, double b) {
  if (times.size() != values.size()) throw UsageError("time_norm: times and values differ in length");
  if (!(a < b)) throw DomainError("time_norm: need a < b");
  if (!(q >= 1.0)) throw DomainError("time_norm: q must be >= 1");
  const auto ia = sample_index(times, a);
  const auto ib = sample_index(times, b);
  if (ia < 0 || ib < 0) throw UsageError("time_norm: interval endpoints must be sample times within the span");
  if (std::isinf(q)) {
    return *std::max_element(values.begin() + ia, values.begin() + ib + 1);
  }
  const int k = static_cast<int>(ib - ia);
  const double h = (b - a) / k;
  std::vector<double> w;
  if (k == 1) {
    w = {0.5 * h, 0.5 * h};
  } else {
    w = cumulative_weights(k, h);
  }
  std::vector<double> terms(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) terms[j] = w[j] * std::pow(values[ia + j], q);
  return std::pow(std::max(0.0, pairwise_sum(terms)), 1.0 / q);
}

std::vector<double> spatial_norms(const Trajectory& traj, double r) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (const Field& u : traj.states) out.push_back(lp_norm(u, r));
  return out;
}

double mixed_norm(const Trajectory& traj, const MixedNormSpec& spec) {
  traj.check_uniform();
  if (traj.empty() || spec.a < traj.times.front() - 1e-12 || spec.b > traj.times.back() + 1e-12) {
    throw UsageError("mixed_norm: interval exceeds the trajectory span");
  }
  return time_norm(traj.times, spatial_norms(traj, spec.r), spec.q, spec.a, spec.b);
}

std::vector<QuotientStats> strichartz_quotients(const GridPtr& grid, std::span<const AdmissiblePair> pairs,
                                                const QuotientOptions& options) {
  for (const AdmissiblePair& p : pairs) {
    if (p.classification == Admissibility::Inadmissible) {
      throw UsageError("strichartz_quotient: pair is not admissible");
    }
  }
  if (!(options.T > 0.0) || !(options.dt > 0.0)) throw DomainError("strichartz_quotient: T and dt must be positive");
  if (options.ensemble_size < 1) throw DomainError("strichartz_quotient: empty ensemble");

  const int steps = std::max(1, static_cast<int>(std::lround(options.T / options.dt)));
  const double h = options.T / steps;
  std::vector<double> times(static_cast<std::size_t>(4 * steps) + 1);
  for (std::size_t j = 0; j < times.size(); ++j) times[j] = -2.0 * options.T + static_cast<double>(j) * h;

  std::vector<double> rs;
  for (const AdmissiblePair& p : pairs) {
    if (std::find(rs.begin(), rs.end(), p.r) == rs.end()) rs.push_back(p.r);
  }

  const int members = options.gaussian_only ? 1 : options.ensemble_size;
  const PropagatorPlan plan(grid);
  // norms[member][r index][time]
  std::vector<std::vector<std::vector<double>>> norms(static_cast<std::size_t>(members));
  std::vector<double> edge(static_cast<std::size_t>(members), 0.0);

  auto run_member = [&](int m) {
    Field g(grid, Space::Physical);
    if (options.gaussian_only) {
      g = Field::sample(grid, [](std::span<const double> x) {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        return cdouble(std::exp(-r2), 0.0);
      });
    } else {
      std::mt19937_64 rng(member_seed(options.seed, static_cast<std::uint64_t>(m)));
      g = GaussianMixture::random(rng, grid->dim(), options.ranges).sample(grid);
    }
    g *= 1.0 / lp_norm(g, 2.0);
    const Field spectrum = forward(g);
    auto& out = norms[static_cast<std::size_t>(m)];
    out.assign(rs.size(), std::vector<double>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j) {
      const Field u = inverse(plan.evolve_spectrum(spectrum, times[j]));
      for (std::size_t i = 0; i < rs.size(); ++i) out[i][j] = lp_norm(u, rs[i]);
      if (j == 0 || j + 1 == times.size()) edge[m] = std::max(edge[m], boundary_mass_fraction(u));
    }
  };

  const int workers = std::clamp(options.workers, 1, members);
  if (workers == 1) {
    for (int m = 0; m < members; ++m) run_member(m);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (int m = next++; m < members; m = next++) {
          try {
            run_member(m);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }

  const double worst_edge = *std::max_element(edge.begin(), edge.end());
  if (worst_edge > kBoundaryMassLimit) {
    throw GridTooSmall("strichartz_quotient: grid too small, boundary mass fraction " + format_double(worst_edge) +
                       " at |t| = 2T");
  }

  std::vector<QuotientStats> out;
  for (const AdmissiblePair& p : pairs) {
    QuotientStats st;
    st.pair = p;
    st.sigma = grid->params().sigma;
    st.ensemble_size = members;
    st.T = options.T;
    st.boundary_mass = worst_edge;
    const auto ri = static_cast<std::size_t>(std::find(rs.begin(), rs.end(), p.r) - rs.begin());
    double sum = 0.0;
    for (int m = 0; m < members; ++m) {
      const auto& y = norms[static_cast<std::size_t>(m)][ri];
      QuotientMember qm;
      qm.index = m;
      qm.quotient_T = time_norm(times, y, p.q, -options.T, options.T);
      qm.quotient_2T = time_norm(times, y, p.q, -2.0 * options.T, 2.0 * options.T);
      st.max = std::max(st.max, qm.quotient_T);
      st.max_2T = std::max(st.max_2T, qm.quotient_2T);
      sum += qm.quotient_T;
      st.members.push_back(qm);
    }
    st.mean = sum / members;
    out.push_back(std::move(st));
  }
  return out;
}

QuotientStats strichartz_quotient(const GridPtr& grid, const AdmissiblePair& pair, const QuotientOptions& options) {
  return strichartz_quotients(grid, std::span<const AdmissiblePair>(&pair, 1), options).front();
}

double ForcingMember::envelope(double t) const { return a + b * std::sin(w * t + phi); }

ForcingMember random_forcing(std::uint64_t seed, int d, const MixtureRanges& ranges) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ForcingMember f;
  f.data = GaussianMixture::random(rng, d, ranges);
  f.profile = GaussianMixture::random(rng, d, ranges);
  f.a = 0.2 + 0.8 * unit(rng);
  f.b = 2.0 * unit(rng) - 1.0;
  f.w = 3.0 * unit(rng);
  f.phi = 2.0 * std::numbers::pi * unit(rng);
  return f;
}

namespace {

struct ForcedRun {
  std::vector<double> times;
  std::vector<Field> forcing;
  std::vector<Field> solution;
  Field data;
};

ForcedRun forced_run(const PropagatorPlan& plan, const ForcingMember& member, double T, int samples, bool with_data) {
  if (samples < 3) throw DomainError("forcing ensemble: need at least 3 time samples");
  ForcedRun run{{}, {}, {}, Field(plan.grid_ptr(), Space::Physical)};
  const double dt = T / (samples - 1);
  const Field h = member.profile.sample(plan.grid_ptr());
  for (int k = 0; k < samples; ++k) {
    const double t = k * dt;
    run.times.push_back(t);
    Field f = h;
    f *= member.envelope(t);
    run.forcing.push_back(std::move(f));
  }
  run.solution = duhamel_trajectory(plan, run.forcing, dt);
  if (with_data) {
    run.data = member.data.sample(plan.grid_ptr());
    const Field spectrum = forward(run.data);
    for (int k = 0; k < samples; ++k) run.solution[k] += inverse(plan.evolve_spectrum(spectrum, run.times[k]));
  }
  return run;
}

std::vector<double> norms_of(std::span<const Field> fields, double r) {
  std::vector<double> out;
  out.reserve(fields.size());
  for (const Field& f : fields) out.push_back(lp_norm(f, r));
  return out;
}

ConstantEstimate summarize(std::vector<double> values) {
  ConstantEstimate est;
  est.members = std::move(values);
  double sum = 0.0;
  for (double v : est.members) {
    est.max = std::max(est.max, v);
    sum += v;
  }
  est.mean = est.members.empty() ? 0.0 : sum / static_cast<double>(est.members.size());
  return est;
}

}  // namespace

ConstantEstimate inhomogeneous_constant(const GridPtr& grid, const AdmissiblePair& pair,
                                        const AdmissiblePair& forcing_pair, const ForcingOptions& options) {
  if (pair.classification == Admissibility::Inadmissible || forcing_pair.classification == Admissibility::Inadmissible) {
    throw UsageError("inhomogeneous_constant: pairs must be admissible");
  }
  const PropagatorPlan plan(grid);
  const double q1c = conjugate(forcing_pair.q), r1c = conjugate(forcing_pair.r);
  std::vector<double> ratios;
  for (int m = 0; m < options.ensemble_size; ++m) {
    const ForcingMember member =
        random_forcing(member_seed(options.seed, static_cast<std::uint64_t>(m)), grid->dim(), options.ranges);
    const ForcedRun run = forced_run(plan, member, options.T, options.samples, true);
    const auto l2 = norms_of(run.solution, 2.0);
    const double lhs = time_norm(run.times, norms_of(run.solution, pair.r), pair.q, 0.0, options.T) +
                       *std::max_element(l2.begin(), l2.end());
    const double rhs = lp_norm(run.data, 2.0) + time_norm(run.times, norms_of(run.forcing, r1c), q1c, 0.0, options.T);
    ratios.push_back(lhs / rhs);
  }
  return summarize(std::move(ratios));
}

ConstantEstimate hls_constant(const GridPtr& grid, double q1, double r1, double r, const ForcingOptions& options) {
  const double target = 2.0 * grid->params().sigma * (0.5 - reciprocal(r));
  if (std::abs(reciprocal(q1) + reciprocal(r1) - target) > 1e-12) {
    throw DomainError("hls_constant: exponents violate 1/q1 + 1/r1 = (d + 2 alpha + 2)(1/2 - 1/r)");
  }
  const PropagatorPlan plan(grid);
  const double r1c = conjugate(r1), rc = conjugate(r);
  std::vector<double> ratios;
  for (int m = 0; m < options.ensemble_size; ++m) {
    const ForcingMember member =
        random_forcing(member_seed(options.seed, static_cast<std::uint64_t>(m)), grid->dim(), options.ranges);
    const ForcedRun run = forced_run(plan, member, options.T, options.samples, false);
    const double lhs = time_norm(run.times, norms_of(run.solution, r), q1, 0.0, options.T);
    const double rhs = time_norm(run.times, norms_of(run.forcing, rc), r1c, 0.0, options.T);
    ratios.push_back(lhs / rhs);
  }
  return summarize(std::move(ratios));
}

}  // namespace weinstein
