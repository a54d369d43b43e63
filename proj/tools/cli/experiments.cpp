#include "experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"
#include "weinstein/grid.hpp"
#include "weinstein/propagator.hpp"
#include "weinstein/solver.hpp"
#include "weinstein/strichartz.hpp"
#include "weinstein/transform.hpp"
#include "weinstein/translation.hpp"

namespace swsim {

using nlohmann::json;
using weinstein::cdouble;
using weinstein::Field;
using weinstein::GridPtr;

namespace fs = std::filesystem;

namespace {

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw weinstein::UsageError("cannot write " + path.string());
    row_strings(header);
  }
  void row(std::initializer_list<double> values) {
    std::vector<std::string> s;
    for (double v : values) s.push_back(weinstein::format_double(v));
    row_strings(s);
  }
  void row_strings(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

GridPtr make_grid(const ExperimentConfig& c, const GridBlock& g) {
  return weinstein::Grid::build(weinstein::WeinsteinParams::make(c.alpha, c.d), g.axial_n, g.half_width, g.radial_n,
                                g.radial_extent);
}

double rel_err(std::span<const cdouble> a, std::span<const cdouble> b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max(den, std::abs(b[i]));
  }
  return den > 0.0 ? num / den : num;
}

double rel_err(const Field& a, const Field& b) { return rel_err(a.values(), b.values()); }

Field random_mixture(const GridPtr& grid, std::uint64_t seed, std::uint64_t index,
                     const weinstein::MixtureRanges& ranges = {}) {
  std::mt19937_64 rng(weinstein::member_seed(seed, index));
  return weinstein::GaussianMixture::random(rng, grid->dim(), ranges).sample(grid);
}

Field gaussian(const GridPtr& grid, double s, double norm = 0.0) {
  Field f = Field::sample(grid, [s](std::span<const double> x) {
    double r2 = 0.0;
    for (double v : x) r2 += v * v;
    return cdouble(std::exp(-s * r2), 0.0);
  });
  if (norm > 0.0) f *= norm / weinstein::lp_norm(f, 2.0);
  return f;
}

std::vector<double> uniform_point(std::mt19937_64& rng, int d, double axial, double radial) {
  std::uniform_real_distribution<double> ax(-axial, axial), rad(0.0, radial);
  std::vector<double> x(static_cast<std::size_t>(d) + 1);
  for (int i = 0; i < d; ++i) x[i] = ax(rng);
  x[d] = rad(rng);
  return x;
}

json grid_json(const GridBlock& g) {
  return {{"axial_n", g.axial_n}, {"half_width", g.half_width}, {"radial_n", g.radial_n},
          {"radial_extent", g.radial_extent}};
}

// ---------------------------------------------------------------------------

void transform_suite(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const GridPtr grid = make_grid(c, c.grid);
  const double sigma = grid->params().sigma;

  Csv pair_csv(out / "gaussian_pair.csv", {"s", "rel_err"});
  double pair_err = 0.0;
  for (double s : c.transform.widths) {
    const Field spec = weinstein::forward(gaussian(grid, s));
    const Field exact = Field::sample(
        grid,
        [s, sigma](std::span<const double> lam) {
          double l2 = 0.0;
          for (double v : lam) l2 += v * v;
          return cdouble(std::pow(2.0 * s, -sigma) * std::exp(-l2 / (4.0 * s)), 0.0);
        },
        weinstein::Space::Frequency);
    const double e = rel_err(spec, exact);
    pair_csv.row({s, e});
    pair_err = std::max(pair_err, e);
  }

  Csv pl_csv(out / "plancherel.csv", {"member", "norm_ratio", "round_trip_rel_err"});
  double pl_err = 0.0, rt_err = 0.0;
  for (int k = 0; k < c.transform.random_fields; ++k) {
    const Field f = random_mixture(grid, c.seed, static_cast<std::uint64_t>(k));
    const Field spec = weinstein::forward(f);
    const double ratio = weinstein::lp_norm(spec, 2.0) / weinstein::lp_norm(f, 2.0);
    const double rt = rel_err(weinstein::inverse(spec), f);
    pl_csv.row({static_cast<double>(k), ratio, rt});
    pl_err = std::max(pl_err, std::abs(ratio - 1.0));
    rt_err = std::max(rt_err, rt);
  }

  const GridPtr small = make_grid(c, c.transform.direct_grid);
  const Field f = random_mixture(small, c.seed, 0xd1ec7);
  const double direct_err = rel_err(weinstein::forward(f), weinstein::direct_forward(f));

  rep.checks.push_back(check_le("gaussian_pair_rel_err", pair_err, 1e-6));
  rep.checks.push_back(check_le("plancherel_rel_err", pl_err, 1e-8));
  rep.checks.push_back(check_le("round_trip_rel_err", rt_err, 1e-10));
  rep.checks.push_back(check_le("direct_quadrature_rel_err", direct_err, 1e-8));
}

void translation_suite(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const GridPtr grid = make_grid(c, c.grid);
  const auto& params = grid->params();
  const int d = c.d;
  const weinstein::TranslationRule rule{weinstein::BesselOrder(c.alpha)};
  std::mt19937_64 rng(weinstein::member_seed(c.seed, 0x7a));

  const Field f = random_mixture(grid, c.seed, 1);
  const std::vector<double> origin(static_cast<std::size_t>(d) + 1, 0.0);
  const double identity_err = rel_err(weinstein::translate(f, origin, rule), f);

  // Product formula on random (x, y, lambda).
  Csv prod_csv(out / "product_formula.csv", {"triple", "abs_err"});
  double prod_num = 0.0, prod_den = 0.0;
  for (int k = 0; k < c.translation.random_triples; ++k) {
    const auto x = uniform_point(rng, d, 2.0, 3.0);
    const auto y = uniform_point(rng, d, 2.0, 3.0);
    const auto lam = uniform_point(rng, d, 2.0, 3.0);
    const auto psi = [&](std::span<const double> z) { return weinstein::eigenfunction(params, z, lam); };
    const cdouble lhs = weinstein::translate_at(rule, params, psi, x, y);
    const cdouble rhs = psi(x) * psi(y);
    prod_csv.row({static_cast<double>(k), std::abs(lhs - rhs)});
    prod_num = std::max(prod_num, std::abs(lhs - rhs));
    prod_den = std::max(prod_den, std::abs(rhs));
  }

  // forward(T_x f)(lambda) = e^{+i x' lambda'} j_a(x_r lambda_r) forward(f)(lambda).
  const Field spec = weinstein::forward(f);
  const double axial_box = 0.15 * grid->half_width(), radial_box = 0.15 * grid->radial_extent();
  double tt_err = 0.0;
  std::vector<double> lam(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k < c.translation.random_triples; ++k) {
    const auto x = uniform_point(rng, d, axial_box, radial_box);
    const Field lhs = weinstein::forward(weinstein::translate(f, x, rule));
    Field rhs = spec;
    for (std::size_t i = 0; i < rhs.size(); ++i) {
      grid->frequency_point(i, lam);
      rhs[i] *= std::conj(weinstein::eigenfunction(params, x, lam));
    }
    tt_err = std::max(tt_err, rel_err(lhs, rhs));
  }

  // Tighter fields for the coarse direct-convolution grid.
  const GridPtr small = make_grid(c, c.translation.convolution_grid);
  const weinstein::MixtureRanges tight{3, 1.0, 2.0, 0.5, 0.5};
  const Field fs_ = random_mixture(small, c.seed, 2, tight), gs = random_mixture(small, c.seed, 3, tight);
  const double conv_err = rel_err(weinstein::convolve(fs_, gs), weinstein::convolve_direct(fs_, gs, rule));

  const Field g = random_mixture(grid, c.seed, 4);
  const double comm_err = rel_err(weinstein::convolve(f, g), weinstein::convolve(g, f));

  // Young: ||f * g||_r <= ||f||_p ||g||_q with 1/p + 1/q = 1 + 1/r.
  struct Triple {
    double p, q, r;
  };
  const Triple triples[] = {{1.0, 2.0, 2.0}, {2.0, 2.0, std::numeric_limits<double>::infinity()}, {1.0, 1.0, 1.0}};
  Csv young_csv(out / "young.csv", {"pair", "p", "q", "r", "lhs", "rhs"});
  double young_worst = 0.0;
  for (int k = 0; k < c.translation.young_pairs; ++k) {
    const Field a = random_mixture(grid, c.seed, 100 + 2 * static_cast<std::uint64_t>(k));
    const Field b = random_mixture(grid, c.seed, 101 + 2 * static_cast<std::uint64_t>(k));
    const Field ab = weinstein::convolve(a, b);
    for (const Triple& t : triples) {
      const double lhs = weinstein::lp_norm(ab, t.r);
      const double rhs = weinstein::lp_norm(a, t.p) * weinstein::lp_norm(b, t.q);
      young_csv.row({static_cast<double>(k), t.p, t.q, t.r, lhs, rhs});
      young_worst = std::max(young_worst, lhs / rhs);
    }
  }

  rep.checks.push_back(check_le("translation_identity_rel_err", identity_err, 1e-10));
  rep.checks.push_back(check_le("product_formula_rel_err", prod_den > 0.0 ? prod_num / prod_den : prod_num, 1e-7));
  rep.checks.push_back(check_le("transform_translation_rel_err", tt_err, 1e-6));
  rep.checks.push_back(check_le("convolution_fast_direct_rel_err", conv_err, 1e-6));
  rep.checks.push_back(check_le("convolution_commutativity_rel_err", comm_err, 1e-10));
  rep.checks.push_back(check_le("young_max_ratio", young_worst, 1.0 + 1e-6));
}

void dispersion(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const GridPtr grid = make_grid(c, c.grid);
  const auto& b = c.dispersion;
  const auto fit = weinstein::decay_fit(grid, b.s, b.t_min, b.t_max, b.p, b.samples);
  Csv csv(out / "dispersion.csv", {"t", std::isinf(b.p) ? "sup_norm" : "lp_norm"});
  for (std::size_t i = 0; i < fit.times.size(); ++i) csv.row({fit.times[i], fit.norms[i]});

  rep.results["slope"] = fit.fit.slope;
  rep.results["intercept"] = fit.fit.intercept;
  rep.results["r2"] = fit.fit.r2;
  rep.results["expected_slope"] = fit.expected_slope;
  rep.results["boundary_mass"] = fit.boundary_mass;
  rep.checks.push_back(check_le("slope_abs_err", std::abs(fit.fit.slope - fit.expected_slope),
                                b.slope_tolerance * std::abs(fit.expected_slope)));
  if (std::isinf(b.p)) {
    rep.results["normalized_constant"] = fit.normalized_constant;
    rep.checks.push_back(check_le("normalized_decay_constant", fit.normalized_constant, b.constant_bound));
  }
  rep.checks.push_back(check_le("boundary_mass_fraction", fit.boundary_mass, weinstein::kBoundaryMassLimit));
}

void strichartz_scan(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const auto& b = c.strichartz;
  const GridPtr grid = make_grid(c, c.grid);
  const auto& params = grid->params();

  std::vector<weinstein::AdmissiblePair> pairs;
  for (auto [q, r] : b.pairs) {
    const auto pair = weinstein::classify(params, q, r);
    rep.checks.push_back(check_le("pair_admissible_q" + weinstein::format_double(q) + "_r" +
                                      weinstein::format_double(r),
                                  pair.classification == weinstein::Admissibility::Inadmissible ? 1.0 : 0.0, 0.0));
    if (pair.classification != weinstein::Admissibility::Inadmissible) pairs.push_back(pair);
  }
  if (pairs.empty()) return;

  weinstein::QuotientOptions opts;
  opts.T = b.T;
  opts.dt = b.dt;
  opts.ensemble_size = b.ensemble_size;
  opts.seed = c.seed;
  opts.ranges = b.ranges;
  opts.workers = c.workers;
  const auto stats = weinstein::strichartz_quotients(grid, pairs, opts);

  std::vector<weinstein::QuotientStats> doubled;
  if (b.grid_doubling) {
    GridBlock g2 = c.grid;
    g2.axial_n = c.d > 0 ? 2 * g2.axial_n : g2.axial_n;
    g2.radial_n *= 2;
    doubled = weinstein::strichartz_quotients(make_grid(c, g2), pairs, opts);
    rep.results["doubled_grid"] = grid_json(g2);
  }

  Csv csv(out / "quotients.csv", {"q", "r", "member", "quotient_T", "quotient_2T"});
  json list = json::array();
  for (std::size_t i = 0; i < stats.size(); ++i) {
    const auto& s = stats[i];
    for (const auto& m : s.members) csv.row({s.pair.q, s.pair.r, static_cast<double>(m.index), m.quotient_T, m.quotient_2T});
    json entry = {{"pair", {s.pair.q, s.pair.r}},
                  {"classification", weinstein::to_string(s.pair.classification)},
                  {"sigma", s.sigma},
                  {"ensemble_size", s.ensemble_size},
                  {"T", s.T},
                  {"max", s.max},
                  {"mean", s.mean},
                  {"max_2T", s.max_2T},
                  {"boundary_mass", s.boundary_mass}};
    const std::string tag = "q" + weinstein::format_double(s.pair.q) + "_r" + weinstein::format_double(s.pair.r);
    rep.checks.push_back(check_le("T_doubling_change_" + tag, std::abs(s.max_2T / s.max - 1.0), b.tolerance));
    if (!doubled.empty()) {
      entry["max_doubled_grid"] = doubled[i].max;
      rep.checks.push_back(check_le("grid_doubling_change_" + tag, std::abs(doubled[i].max / s.max - 1.0), b.tolerance));
    }
    list.push_back(entry);
  }
  rep.results["pairs"] = list;
}

weinstein::SolverConfig solver_config(const ExperimentConfig& c) {
  const auto& b = c.solver;
  weinstein::SolverConfig s;
  s.nonlinearity = weinstein::NonlinearitySpec::make(b.p, b.mu);
  s.T = b.T;
  s.dt = b.dt;
  s.mode = b.mode == "picard" ? weinstein::SolverMode::Picard : weinstein::SolverMode::Splitting;
  s.q = b.q;
  s.r = b.r;
  s.store_every = b.store_every;
  s.picard_samples = b.picard_samples;
  s.picard_max_iter = b.picard_max_iter;
  s.picard_tol = b.picard_tol;
  s.strichartz_constant = b.strichartz_constant.value_or(1.0);
  s.M = b.M;
  s.seed = c.seed;
  return s;
}

void write_diagnostics(const fs::path& path, const weinstein::Trajectory& traj, bool picard) {
  std::vector<std::string> header{"t", "mass", "sup_norm", "LqLr_accum"};
  if (picard) header.push_back("contraction_ratio");
  Csv csv(path, header);
  for (const auto& d : traj.diagnostics) {
    if (picard) {
      csv.row({d.time, d.mass, d.sup_norm, d.lqlr_accum, d.contraction_ratio});
    } else {
      csv.row({d.time, d.mass, d.sup_norm, d.lqlr_accum});
    }
  }
}

void write_checkpoints(const fs::path& out, const weinstein::Trajectory& traj) {
  const fs::path dir = out / "checkpoints";
  fs::create_directories(dir);
  Csv index(dir / "index.csv", {"step", "t", "file"});
  for (std::size_t k = 0; k < traj.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "state_%05zu.wfld", k);
    weinstein::write_field((dir / name).string(), traj.states[k]);
    index.row_strings({std::to_string(k), weinstein::format_double(traj.times[k]), name});
  }
}

// Estimated inhomogeneous constant for the monitoring pair unless configured.
double strichartz_constant(const ExperimentConfig& c, const GridPtr& grid, Report& rep) {
  if (c.solver.strichartz_constant) return *c.solver.strichartz_constant;
  const auto pair = weinstein::classify(grid->params(), c.solver.q, c.solver.r);
  weinstein::ForcingOptions opts;
  opts.seed = c.seed;
  const auto est = weinstein::inhomogeneous_constant(grid, pair, pair, opts);
  rep.results["strichartz_constant_estimate"] = {{"max", est.max}, {"mean", est.mean}, {"members", est.members}};
  return est.max;
}

void solve(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const GridPtr grid = make_grid(c, c.grid);
  const auto& b = c.solver;
  auto cfg = solver_config(c);
  const Field g = gaussian(grid, b.data.width, b.data.norm);
  rep.results["data_l2_norm"] = weinstein::lp_norm(g, 2.0);

  weinstein::Trajectory traj;
  if (cfg.mode == weinstein::SolverMode::Picard) {
    cfg.strichartz_constant = strichartz_constant(c, grid, rep);
    const auto pr = weinstein::picard_solve(g, cfg);
    rep.results["iterations"] = pr.iterations;
    rep.results["distances"] = pr.distances;
    rep.results["ratios"] = pr.ratios;
    rep.results["C"] = pr.C;
    rep.results["M"] = pr.M;
    rep.results["T_bound"] = pr.T_bound;
    rep.checks.push_back(check_le("picard_converged", pr.converged ? 0.0 : 1.0, 0.0));
    double worst = 0.0;
    for (double r : pr.ratios) worst = std::max(worst, r);
    rep.checks.push_back(check_lt("max_contraction_ratio", worst, 1.0));
    traj = pr.trajectory;
  } else {
    try {
      traj = weinstein::evolve(g, cfg);
    } catch (const weinstein::BlowupAbort& e) {
      rep.results["blowup_time"] = e.time();
      rep.results["blowup_message"] = e.what();
      rep.checks.push_back(check_le("no_blowup_abort", 1.0, 0.0));
      return;
    }
  }
  write_diagnostics(out / "diagnostics.csv", traj, cfg.mode == weinstein::SolverMode::Picard);
  if (b.checkpoints) write_checkpoints(out, traj);

  const double m0 = traj.diagnostics.front().mass;
  double drift = 0.0;
  for (const auto& d : traj.diagnostics) drift = std::max(drift, std::abs(d.mass - m0) / m0);
  rep.results["mass_drift"] = drift;
  if (cfg.mode == weinstein::SolverMode::Splitting && b.mu.imag() == 0.0) {
    rep.checks.push_back(check_le("mass_drift", drift, 1e-6));
  }

  if (traj.size() >= 3) {
    const auto pair = weinstein::classify(grid->params(), b.q, b.r);
    const auto mon = weinstein::blowup_monitor(traj, pair, cfg.nonlinearity,
                                               cfg.strichartz_constant * cfg.nonlinearity.lipschitz_C);
    rep.results["blowup_monitor"] = {{"subcritical_proxy", mon.subcritical_proxy},
                                     {"subcritical_threshold", mon.subcritical_threshold},
                                     {"critical_accum", mon.critical_accum},
                                     {"critical_accum_half", mon.critical_accum_half},
                                     {"critical_diverging", mon.critical_diverging},
                                     {"max_sup_norm", mon.max_sup_norm},
                                     {"alarm", mon.alarm}};
    rep.checks.push_back(check_le("blowup_alarm", mon.alarm ? 1.0 : 0.0, 0.0));
    if (!std::isnan(mon.lambda)) {
      rep.results["interpolation"] = {{"lambda", mon.lambda},
                                      {"lhs", mon.interpolation_lhs},
                                      {"rhs", mon.interpolation_rhs}};
      rep.checks.push_back(check_le("interpolation_excess", mon.interpolation_lhs / mon.interpolation_rhs - 1.0, 1e-3));
    }
  }
}

void picard_verify(const ExperimentConfig& c, const fs::path& out, Report& rep) {
  const GridPtr grid = make_grid(c, c.grid);
  const auto& b = c.solver;
  if (!(b.data.norm > 0.0)) throw weinstein::ConfigError("PicardVerify: solver.data.norm must be set");
  auto cfg = solver_config(c);
  cfg.strichartz_constant = strichartz_constant(c, grid, rep);
  const Field g = gaussian(grid, b.data.width, b.data.norm);

  // The run length: inside the bound (the bound itself is computed by picard_solve).
  weinstein::SolverConfig probe = cfg;
  probe.picard_max_iter = 1;
  const double T_bound = weinstein::picard_solve(g, probe).T_bound;
  cfg.T = std::min(b.T, T_bound);
  rep.results["T_bound"] = T_bound;
  rep.results["T_run"] = cfg.T;

  const auto pr = weinstein::picard_solve(g, cfg);
  write_diagnostics(out / "picard_diagnostics.csv", pr.trajectory, true);
  {
    Csv csv(out / "picard_iterations.csv", {"iteration", "distance", "ratio", "iterate_norm"});
    for (std::size_t n = 0; n < pr.distances.size(); ++n) {
      csv.row({static_cast<double>(n), pr.distances[n], n == 0 ? std::nan("") : pr.ratios[n - 1],
               pr.iterate_norms[n + 1]});
    }
  }
  rep.results["C"] = pr.C;
  rep.results["M"] = pr.M;
  rep.results["iterations"] = pr.iterations;
  rep.results["ratios"] = pr.ratios;
  rep.checks.push_back(check_le("T_over_T_bound", cfg.T / T_bound, 1.0));
  rep.checks.push_back(check_le("picard_converged", pr.converged ? 0.0 : 1.0, 0.0));
  rep.checks.push_back(
      check_le("max_iterate_norm_over_M", *std::max_element(pr.iterate_norms.begin(), pr.iterate_norms.end()) / pr.M, 1.0));

  // Ratios above the round-off floor.
  std::vector<double> ratios;
  const double floor = 1e-12 * pr.iterate_norms.front();
  for (std::size_t n = 1; n < pr.distances.size(); ++n) {
    if (pr.distances[n] > floor) ratios.push_back(pr.ratios[n - 1]);
  }
  double worst = 0.0, variation = 0.0;
  for (std::size_t n = 0; n < ratios.size(); ++n) {
    worst = std::max(worst, ratios[n]);
    if (n > 0) variation = std::max(variation, std::abs(ratios[n] / ratios[n - 1] - 1.0));
  }
  rep.checks.push_back(check_lt("max_contraction_ratio", worst, 1.0));
  rep.checks.push_back(check_le("successive_ratio_variation", variation, 0.2));

  // Splitting on a refinement of the Picard time grid.
  constexpr int kSubsteps = 4;
  weinstein::SolverConfig split = cfg;
  split.mode = weinstein::SolverMode::Splitting;
  split.store_every = kSubsteps;
  split.dt = cfg.T / ((cfg.picard_samples - 1) * kSubsteps);
  const auto traj = weinstein::evolve(g, split);
  double diff = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    diff = std::max(diff, weinstein::lp_norm(traj.states[k] - pr.trajectory.states[k], 2.0));
    scale = std::max(scale, weinstein::lp_norm(pr.trajectory.states[k], 2.0));
  }
  rep.checks.push_back(check_le("splitting_picard_l2_rel_diff", diff / scale, 1e-4));

  // Dilation family g_l = l^{2/p} g(l x): ||g_l||_2 = l^kappa ||g||_2 and the
  // admissible time scales by l^{-2}. Compare against the member with half the norm.
  const double sigma = grid->params().sigma, p = b.p;
  const double kappa = 2.0 / p - sigma;
  weinstein::SolverConfig scan = cfg;
  const double t_full = weinstein::admissible_time(g, scan, b.t_search_min, b.t_search_max);
  rep.results["T_admissible"] = t_full;
  const double predicted = std::pow(2.0, p * b.q / (b.q - p - 2.0));
  rep.results["predicted_factor"] = predicted;
  if (kappa > 0.0) {
    const double l = std::pow(0.5, 1.0 / kappa);
    const Field g_half = gaussian(grid, b.data.width * l * l, 0.5 * b.data.norm);
    const double t_half = weinstein::admissible_time(g_half, scan, b.t_search_min, b.t_search_max);
    rep.results["T_admissible_half_norm"] = t_half;
    rep.results["measured_factor"] = t_half / t_full;
    rep.checks.push_back(check_le("T_scaling_rel_err", std::abs(t_half / t_full / predicted - 1.0), 0.05));
  }
  // Informational: same width, half amplitude.
  const Field g_amp = gaussian(grid, b.data.width, 0.5 * b.data.norm);
  const double t_amp = weinstein::admissible_time(g_amp, scan, b.t_search_min, b.t_search_max);
  rep.results["T_admissible_half_amplitude"] = t_amp;
  rep.results["amplitude_halving_factor"] = t_amp / t_full;
}

}  // namespace

Check check_le(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, "<=", value <= tolerance};
}
Check check_ge(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, ">=", value >= tolerance};
}
Check check_lt(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, "<", value < tolerance};
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

json Report::to_json() const {
  json checks_json = json::array();
  for (const auto& c : checks) {
    checks_json.push_back(
        {{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"relation", c.relation}, {"pass", c.pass}});
  }
  return {{"experiment", experiment}, {"params", params}, {"checks", checks_json},
          {"pass", passed()},         {"results", results}, {"config", config}};
}

json resolved_config(const ExperimentConfig& c) {
  json j;
  j["experiment"] = to_string(c.experiment);
  j["params"] = {{"alpha", c.alpha}, {"d", c.d}};
  j["grid"] = grid_json(c.grid);
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["transform"] = {{"widths", c.transform.widths},
                    {"random_fields", c.transform.random_fields},
                    {"direct_grid", grid_json(c.transform.direct_grid)}};
  j["translation"] = {{"random_triples", c.translation.random_triples},
                      {"young_pairs", c.translation.young_pairs},
                      {"convolution_grid", grid_json(c.translation.convolution_grid)}};
  const auto& ds = c.dispersion;
  j["dispersion"] = {{"s", ds.s},       {"t_min", ds.t_min},
                     {"t_max", ds.t_max}, {"p", std::isinf(ds.p) ? json("inf") : json(ds.p)},
                     {"samples", ds.samples}, {"slope_tolerance", ds.slope_tolerance},
                     {"constant_bound", ds.constant_bound}};
  const auto& st = c.strichartz;
  json pairs = json::array();
  for (auto [q, r] : st.pairs) pairs.push_back({std::isinf(q) ? json("inf") : json(q), std::isinf(r) ? json("inf") : json(r)});
  j["strichartz"] = {{"pairs", pairs},
                     {"T", st.T},
                     {"dt", st.dt},
                     {"ensemble_size", st.ensemble_size},
                     {"terms", st.ranges.terms},
                     {"width_min", st.ranges.width_min},
                     {"width_max", st.ranges.width_max},
                     {"center_spread", st.ranges.center_spread},
                     {"grid_doubling", st.grid_doubling},
                     {"tolerance", st.tolerance}};
  const auto& so = c.solver;
  j["solver"] = {{"mode", so.mode},
                 {"p", so.p},
                 {"mu", {so.mu.real(), so.mu.imag()}},
                 {"T", so.T},
                 {"dt", so.dt},
                 {"q", std::isinf(so.q) ? json("inf") : json(so.q)},
                 {"r", std::isinf(so.r) ? json("inf") : json(so.r)},
                 {"store_every", so.store_every},
                 {"picard_samples", so.picard_samples},
                 {"picard_max_iter", so.picard_max_iter},
                 {"picard_tol", so.picard_tol},
                 {"strichartz_constant", so.strichartz_constant ? json(*so.strichartz_constant) : json("auto")},
                 {"M", so.M},
                 {"checkpoints", so.checkpoints},
                 {"t_search_min", so.t_search_min},
                 {"t_search_max", so.t_search_max},
                 {"data", {{"width", so.data.width}, {"norm", so.data.norm}}}};
  return j;
}

Report run_experiment(const ExperimentConfig& config, const fs::path& out) {
  fs::create_directories(out);
  Report rep;
  rep.experiment = to_string(config.experiment);
  const auto params = weinstein::WeinsteinParams::make(config.alpha, config.d);
  rep.params = {{"alpha", config.alpha}, {"d", config.d}, {"sigma", params.sigma}};
  rep.config = resolved_config(config);
  switch (config.experiment) {
    case Experiment::TransformSuite:
      transform_suite(config, out, rep);
      break;
    case Experiment::TranslationSuite:
      translation_suite(config, out, rep);
      break;
    case Experiment::Dispersion:
      dispersion(config, out, rep);
      break;
    case Experiment::StrichartzScan:
      strichartz_scan(config, out, rep);
      break;
    case Experiment::Solve:
      solve(config, out, rep);
      break;
    case Experiment::PicardVerify:
      picard_verify(config, out, rep);
      break;
  }
  return rep;
}

void write_report(const Report& report, const fs::path& out) {
  fs::create_directories(out);
  std::ofstream f(out / "summary.json", std::ios::binary);
  if (!f) throw weinstein::UsageError("cannot write " + (out / "summary.json").string());
  f << report.to_json().dump(2) << '\n';
}

}  // namespace swsim
