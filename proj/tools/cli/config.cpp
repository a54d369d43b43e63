#include "config.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "weinstein/errors.hpp"
#include "weinstein/grid.hpp"

namespace swsim {

namespace {

[[noreturn]] void fail(const YAML::Node& at, const std::string& msg) {
  const YAML::Mark m = at.Mark();
  if (m.is_null()) throw SchemaError(msg, 0, 0);
  throw SchemaError(msg, m.line + 1, m.column + 1);
}

void check_keys(const YAML::Node& map, const std::set<std::string>& allowed, const std::string& where) {
  if (!map.IsMap()) fail(map, where + " must be a mapping");
  for (auto it = map.begin(); it != map.end(); ++it) {
    const auto key = it->first.as<std::string>();
    if (!allowed.count(key)) fail(it->first, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& what) {
  if (!n.IsScalar()) fail(n, what + " must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, what + " has the wrong type: '" + n.Scalar() + "'");
  }
}

// Real number; accepts inf / .inf / infinity.
double real(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) {
    std::string s = n.Scalar();
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "inf" || s == ".inf" || s == "+inf" || s == "+.inf" || s == "infinity") {
      return std::numeric_limits<double>::infinity();
    }
  }
  const double v = scalar<double>(n, what);
  if (std::isnan(v)) fail(n, what + " must be a number");
  return v;
}

double positive(const YAML::Node& n, const std::string& what) {
  const double v = real(n, what);
  if (!(v > 0.0)) fail(n, what + " must be > 0");
  return v;
}

int positive_int(const YAML::Node& n, const std::string& what) {
  const int v = scalar<int>(n, what);
  if (v < 1) fail(n, what + " must be >= 1");
  return v;
}

template <typename F>
void optional(const YAML::Node& parent, const char* key, F&& f) {
  const YAML::Node n = parent[key];
  if (n) f(n);
}

const YAML::Node& required(const YAML::Node& parent, const YAML::Node& n, const std::string& key) {
  if (!n) fail(parent, "missing required key '" + key + "'");
  return n;
}

GridBlock parse_grid(const YAML::Node& n, const std::string& where) {
  check_keys(n, {"axial_n", "half_width", "radial_n", "radial_extent"}, where);
  GridBlock g;
  optional(n, "axial_n", [&](const YAML::Node& v) { g.axial_n = positive_int(v, where + ".axial_n"); });
  optional(n, "half_width", [&](const YAML::Node& v) { g.half_width = positive(v, where + ".half_width"); });
  optional(n, "radial_n", [&](const YAML::Node& v) { g.radial_n = positive_int(v, where + ".radial_n"); });
  optional(n, "radial_extent", [&](const YAML::Node& v) { g.radial_extent = positive(v, where + ".radial_extent"); });
  return g;
}

void check_grid(const YAML::Node& at, const weinstein::WeinsteinParams& params, const GridBlock& g) {
  try {
    (void)weinstein::Grid::build(params, g.axial_n, g.half_width, g.radial_n, g.radial_extent);
  } catch (const weinstein::ConfigError& e) {
    fail(at, std::string("invalid grid: ") + e.what());
  }
}

std::pair<double, double> parse_pair(const YAML::Node& n, const std::string& what) {
  if (!n.IsSequence() || n.size() != 2) fail(n, what + " must be a [q, r] pair");
  return {positive(n[0], what + ".q"), positive(n[1], what + ".r")};
}

}  // namespace

const char* to_string(Experiment e) noexcept {
  switch (e) {
    case Experiment::TransformSuite:
      return "TransformSuite";
    case Experiment::TranslationSuite:
      return "TranslationSuite";
    case Experiment::Dispersion:
      return "Dispersion";
    case Experiment::StrichartzScan:
      return "StrichartzScan";
    case Experiment::Solve:
      return "Solve";
    case Experiment::PicardVerify:
      return "PicardVerify";
  }
  return "?";
}

YAML::Node load_document(const std::string& path) {
  try {
    return YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw SchemaError("cannot read config file " + path, 0, 0);
  } catch (const YAML::ParserException& e) {
    throw SchemaError("parse error: " + e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

ExperimentConfig parse_config(const YAML::Node& doc) {
  if (!doc || !doc.IsMap()) throw SchemaError("config must be a mapping at top level", 1, 1);
  check_keys(doc, {"experiment", "params", "grid", "output", "seed", "workers", "transform", "translation",
                   "dispersion", "strichartz", "solver"},
             "config");
  ExperimentConfig c;
  c.document = YAML::Clone(doc);

  const YAML::Node exp = required(doc, doc["experiment"], "experiment");
  const auto name = scalar<std::string>(exp, "experiment");
  bool known = false;
  for (Experiment e : {Experiment::TransformSuite, Experiment::TranslationSuite, Experiment::Dispersion,
                       Experiment::StrichartzScan, Experiment::Solve, Experiment::PicardVerify}) {
    if (name == to_string(e)) {
      c.experiment = e;
      known = true;
    }
  }
  if (!known) {
    fail(exp, "unknown experiment '" + name +
                  "' (expected TransformSuite, TranslationSuite, Dispersion, StrichartzScan, Solve or PicardVerify)");
  }

  const YAML::Node params = required(doc, doc["params"], "params");
  check_keys(params, {"alpha", "d"}, "params");
  const YAML::Node alpha = required(params, params["alpha"], "params.alpha");
  c.alpha = real(alpha, "params.alpha");
  if (!(c.alpha > -0.5)) fail(alpha, "params.alpha violates the invariant alpha > -1/2");
  const YAML::Node d = required(params, params["d"], "params.d");
  c.d = scalar<int>(d, "params.d");
  if (c.d < 0) fail(d, "params.d must be >= 0");
  const auto wp = weinstein::WeinsteinParams::make(c.alpha, c.d);

  const YAML::Node grid = required(doc, doc["grid"], "grid");
  c.grid = parse_grid(grid, "grid");
  check_grid(grid, wp, c.grid);

  optional(doc, "output", [&](const YAML::Node& v) { c.output = scalar<std::string>(v, "output"); });
  optional(doc, "seed", [&](const YAML::Node& v) { c.seed = scalar<std::uint64_t>(v, "seed"); });
  optional(doc, "workers", [&](const YAML::Node& v) { c.workers = positive_int(v, "workers"); });

  optional(doc, "transform", [&](const YAML::Node& n) {
    check_keys(n, {"widths", "random_fields", "direct_grid"}, "transform");
    optional(n, "widths", [&](const YAML::Node& v) {
      if (!v.IsSequence() || v.size() == 0) fail(v, "transform.widths must be a non-empty list");
      c.transform.widths.clear();
      for (const auto& w : v) c.transform.widths.push_back(positive(w, "transform.widths[]"));
    });
    optional(n, "random_fields",
             [&](const YAML::Node& v) { c.transform.random_fields = positive_int(v, "transform.random_fields"); });
    optional(n, "direct_grid", [&](const YAML::Node& v) {
      c.transform.direct_grid = parse_grid(v, "transform.direct_grid");
      check_grid(v, wp, c.transform.direct_grid);
    });
  });

  optional(doc, "translation", [&](const YAML::Node& n) {
    check_keys(n, {"random_triples", "young_pairs", "convolution_grid"}, "translation");
    optional(n, "random_triples", [&](const YAML::Node& v) {
      c.translation.random_triples = positive_int(v, "translation.random_triples");
    });
    optional(n, "young_pairs",
             [&](const YAML::Node& v) { c.translation.young_pairs = positive_int(v, "translation.young_pairs"); });
    optional(n, "convolution_grid", [&](const YAML::Node& v) {
      c.translation.convolution_grid = parse_grid(v, "translation.convolution_grid");
      check_grid(v, wp, c.translation.convolution_grid);
    });
  });

  const YAML::Node disp = doc["dispersion"];
  if (c.experiment == Experiment::Dispersion && !disp) fail(doc, "Dispersion requires a 'dispersion' block");
  if (disp) {
    check_keys(disp, {"s", "t_min", "t_max", "p", "samples", "slope_tolerance", "constant_bound"}, "dispersion");
    auto& b = c.dispersion;
    optional(disp, "s", [&](const YAML::Node& v) { b.s = positive(v, "dispersion.s"); });
    optional(disp, "t_min", [&](const YAML::Node& v) { b.t_min = positive(v, "dispersion.t_min"); });
    optional(disp, "t_max", [&](const YAML::Node& v) { b.t_max = positive(v, "dispersion.t_max"); });
    optional(disp, "p", [&](const YAML::Node& v) {
      b.p = real(v, "dispersion.p");
      if (!(b.p >= 2.0)) fail(v, "dispersion.p must lie in [2, inf]");
    });
    optional(disp, "samples", [&](const YAML::Node& v) {
      b.samples = positive_int(v, "dispersion.samples");
      if (b.samples < 2) fail(v, "dispersion.samples must be >= 2");
    });
    optional(disp, "slope_tolerance",
             [&](const YAML::Node& v) { b.slope_tolerance = positive(v, "dispersion.slope_tolerance"); });
    optional(disp, "constant_bound",
             [&](const YAML::Node& v) { b.constant_bound = positive(v, "dispersion.constant_bound"); });
    if (!(b.t_max > b.t_min)) fail(disp, "dispersion requires t_max > t_min");
  }

  const YAML::Node str = doc["strichartz"];
  if (c.experiment == Experiment::StrichartzScan && !str) fail(doc, "StrichartzScan requires a 'strichartz' block");
  if (str) {
    check_keys(str, {"pairs", "T", "dt", "ensemble_size", "width_min", "width_max", "center_spread", "terms",
                     "grid_doubling", "tolerance"},
               "strichartz");
    auto& b = c.strichartz;
    const YAML::Node pairs = required(str, str["pairs"], "strichartz.pairs");
    if (!pairs.IsSequence() || pairs.size() == 0) fail(pairs, "strichartz.pairs must be a non-empty list");
    for (const auto& p : pairs) b.pairs.push_back(parse_pair(p, "strichartz.pairs[]"));
    optional(str, "T", [&](const YAML::Node& v) { b.T = positive(v, "strichartz.T"); });
    optional(str, "dt", [&](const YAML::Node& v) { b.dt = positive(v, "strichartz.dt"); });
    optional(str, "ensemble_size",
             [&](const YAML::Node& v) { b.ensemble_size = positive_int(v, "strichartz.ensemble_size"); });
    optional(str, "width_min", [&](const YAML::Node& v) { b.ranges.width_min = positive(v, "strichartz.width_min"); });
    optional(str, "width_max", [&](const YAML::Node& v) { b.ranges.width_max = positive(v, "strichartz.width_max"); });
    optional(str, "center_spread", [&](const YAML::Node& v) {
      b.ranges.center_spread = real(v, "strichartz.center_spread");
      if (b.ranges.center_spread < 0.0) fail(v, "strichartz.center_spread must be >= 0");
    });
    optional(str, "terms", [&](const YAML::Node& v) { b.ranges.terms = positive_int(v, "strichartz.terms"); });
    optional(str, "grid_doubling",
             [&](const YAML::Node& v) { b.grid_doubling = scalar<bool>(v, "strichartz.grid_doubling"); });
    optional(str, "tolerance", [&](const YAML::Node& v) { b.tolerance = positive(v, "strichartz.tolerance"); });
    if (b.ranges.width_max < b.ranges.width_min) fail(str, "strichartz requires width_max >= width_min");
  }

  const YAML::Node sol = doc["solver"];
  const bool needs_solver = c.experiment == Experiment::Solve || c.experiment == Experiment::PicardVerify;
  if (needs_solver && !sol) fail(doc, std::string(to_string(c.experiment)) + " requires a 'solver' block");
  if (sol) {
    check_keys(sol, {"mode", "p", "mu", "T", "dt", "q", "r", "store_every", "picard_samples", "picard_max_iter",
                     "picard_tol", "strichartz_constant", "M", "checkpoints", "data", "t_search_min", "t_search_max"},
               "solver");
    auto& b = c.solver;
    optional(sol, "mode", [&](const YAML::Node& v) {
      b.mode = scalar<std::string>(v, "solver.mode");
      if (b.mode != "splitting" && b.mode != "picard") fail(v, "solver.mode must be 'splitting' or 'picard'");
    });
    optional(sol, "p", [&](const YAML::Node& v) { b.p = positive(v, "solver.p"); });
    optional(sol, "mu", [&](const YAML::Node& v) {
      if (v.IsSequence()) {
        if (v.size() != 2) fail(v, "solver.mu must be a number or [re, im]");
        b.mu = {real(v[0], "solver.mu.re"), real(v[1], "solver.mu.im")};
      } else {
        b.mu = {real(v, "solver.mu"), 0.0};
      }
    });
    optional(sol, "T", [&](const YAML::Node& v) { b.T = positive(v, "solver.T"); });
    optional(sol, "dt", [&](const YAML::Node& v) { b.dt = positive(v, "solver.dt"); });
    optional(sol, "q", [&](const YAML::Node& v) { b.q = positive(v, "solver.q"); });
    optional(sol, "r", [&](const YAML::Node& v) { b.r = positive(v, "solver.r"); });
    optional(sol, "store_every", [&](const YAML::Node& v) { b.store_every = positive_int(v, "solver.store_every"); });
    optional(sol, "picard_samples", [&](const YAML::Node& v) {
      b.picard_samples = positive_int(v, "solver.picard_samples");
      if (b.picard_samples < 3) fail(v, "solver.picard_samples must be >= 3");
    });
    optional(sol, "picard_max_iter",
             [&](const YAML::Node& v) { b.picard_max_iter = positive_int(v, "solver.picard_max_iter"); });
    optional(sol, "picard_tol", [&](const YAML::Node& v) { b.picard_tol = positive(v, "solver.picard_tol"); });
    optional(sol, "strichartz_constant", [&](const YAML::Node& v) {
      if (v.IsScalar() && v.Scalar() == "auto") return;
      b.strichartz_constant = positive(v, "solver.strichartz_constant");
    });
    optional(sol, "M", [&](const YAML::Node& v) { b.M = positive(v, "solver.M"); });
    optional(sol, "checkpoints", [&](const YAML::Node& v) { b.checkpoints = scalar<bool>(v, "solver.checkpoints"); });
    optional(sol, "data", [&](const YAML::Node& v) {
      check_keys(v, {"width", "norm"}, "solver.data");
      optional(v, "width", [&](const YAML::Node& w) { b.data.width = positive(w, "solver.data.width"); });
      optional(v, "norm", [&](const YAML::Node& w) { b.data.norm = positive(w, "solver.data.norm"); });
    });
    optional(sol, "t_search_min", [&](const YAML::Node& v) { b.t_search_min = positive(v, "solver.t_search_min"); });
    optional(sol, "t_search_max", [&](const YAML::Node& v) { b.t_search_max = positive(v, "solver.t_search_max"); });
    if (!(b.t_search_max > b.t_search_min)) fail(sol, "solver requires t_search_max > t_search_min");
    if (!(b.q >= 1.0) || !(b.r >= 1.0)) fail(sol, "solver.q and solver.r must be >= 1");
  }
  return c;
}

void set_path(YAML::Node doc, const std::string& dotted, const std::string& value) {
  std::string path = dotted;
  if (path == "alpha" || path == "d") path = "params." + path;
  std::vector<std::string> keys;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    keys.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  // operator[] on YAML::Node rebinds on assignment, so walk with explicit copies.
  std::vector<YAML::Node> chain{doc};
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    YAML::Node next = chain.back()[keys[i]];
    if (!next || !next.IsMap()) {
      chain.back()[keys[i]] = YAML::Node(YAML::NodeType::Map);
      next = chain.back()[keys[i]];
    }
    chain.push_back(next);
  }
  chain.back()[keys.back()] = value;
}

}  // namespace swsim
