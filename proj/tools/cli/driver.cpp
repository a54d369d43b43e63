#include "driver.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "config.hpp"
#include "experiments.hpp"
#include "weinstein/ensemble.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/field_io.hpp"

namespace swsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
  int code = kExitPass;
  std::string log;
  std::optional<Report> report;
};

void print_schema_error(std::ostream& err, const std::string& path, const SchemaError& e) {
  err << path;
  if (e.line() > 0) err << ':' << e.line() << ':' << e.column();
  err << ": schema error: " << e.what() << '\n';
}

std::string describe(const Check& c) {
  return c.name + " = " + weinstein::format_double(c.value) + " (required " + c.relation + " " +
         weinstein::format_double(c.tolerance) + ")";
}

ExperimentConfig apply(ExperimentConfig c, const Overrides& ov) {
  if (ov.seed) c.seed = *ov.seed;
  if (ov.workers) c.workers = *ov.workers;
  if (ov.out) c.output = *ov.out;
  return c;
}

Outcome execute(const ExperimentConfig& c, const fs::path& out) {
  Outcome o;
  std::ostringstream log;
  try {
    o.report = run_experiment(c, out);
    write_report(*o.report, out);
    for (const auto& ch : o.report->checks) log << (ch.pass ? "PASS " : "FAIL ") << describe(ch) << '\n';
    o.code = o.report->passed() ? kExitPass : kExitFail;
  } catch (const weinstein::ConfigError& e) {
    log << "configuration error: " << e.what() << '\n';
    o.code = kExitSchema;
  } catch (const std::exception& e) {
    // GridTooSmall, BlowupAbort, DomainError, ...
    log << "FAIL " << e.what() << '\n';
    o.code = kExitFail;
  }
  o.log = log.str();
  return o;
}

}  // namespace

ParamRange parse_param_range(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0) throw weinstein::UsageError("--param expects key=start:step:stop");
  ParamRange pr;
  pr.key = spec.substr(0, eq);
  const std::string range = spec.substr(eq + 1);
  const auto c1 = range.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : range.find(':', c1 + 1);
  if (c2 == std::string::npos) throw weinstein::UsageError("--param expects key=start:step:stop");
  double a, step, b;
  try {
    a = std::stod(range.substr(0, c1));
    step = std::stod(range.substr(c1 + 1, c2 - c1 - 1));
    b = std::stod(range.substr(c2 + 1));
  } catch (const std::exception&) {
    throw weinstein::UsageError("--param: cannot parse numbers in '" + range + "'");
  }
  if (!(step > 0.0) || !(b >= a)) throw weinstein::UsageError("--param: need step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9));
  if (n > 100000) throw weinstein::UsageError("--param: too many values");
  for (long i = 0; i <= n; ++i) pr.values.push_back(weinstein::format_double(a + static_cast<double>(i) * step));
  return pr;
}

int validate_command(const std::string& config_path, std::ostream& out, std::ostream& err) {
  try {
    const ExperimentConfig c = parse_config(load_document(config_path));
    out << config_path << ": ok (" << to_string(c.experiment) << ")\n";
    return kExitPass;
  } catch (const SchemaError& e) {
    print_schema_error(err, config_path, e);
    return kExitSchema;
  }
}

int run_command(const std::string& config_path, const Overrides& ov, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  try {
    c = apply(parse_config(load_document(config_path)), ov);
  } catch (const SchemaError& e) {
    print_schema_error(err, config_path, e);
    return kExitSchema;
  }
  const Outcome o = execute(c, c.output);
  (o.code == kExitPass ? out : err) << o.log;
  if (o.report) out << "summary: " << (fs::path(c.output) / "summary.json").string() << '\n';
  return o.code;
}

int scan_command(const std::string& config_path, const std::vector<std::string>& params, const Overrides& ov,
                 std::ostream& out, std::ostream& err) {
  YAML::Node base;
  ExperimentConfig base_cfg;
  try {
    base = load_document(config_path);
    base_cfg = apply(parse_config(base), ov);
  } catch (const SchemaError& e) {
    print_schema_error(err, config_path, e);
    return kExitSchema;
  }
  std::vector<ParamRange> ranges;
  try {
    for (const auto& p : params) ranges.push_back(parse_param_range(p));
  } catch (const weinstein::UsageError& e) {
    err << "scan: " << e.what() << '\n';
    return kExitSchema;
  }

  // Cartesian product of the ranges, first key slowest.
  std::vector<std::vector<std::string>> points{{}};
  for (const auto& r : ranges) {
    std::vector<std::vector<std::string>> next;
    for (const auto& pt : points) {
      for (const auto& v : r.values) {
        auto e = pt;
        e.push_back(v);
        next.push_back(std::move(e));
      }
    }
    points = std::move(next);
  }

  const fs::path root = base_cfg.output;
  std::vector<Outcome> outcomes(points.size());
  std::vector<std::string> labels(points.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      YAML::Node doc = YAML::Clone(base);
      std::string label;
      for (std::size_t k = 0; k < ranges.size(); ++k) {
        set_path(doc, ranges[k].key, points[i][k]);
        label += (k ? "_" : "") + ranges[k].key + "=" + points[i][k];
      }
      labels[i] = label;
      try {
        ExperimentConfig c = parse_config(doc);
        c.seed = weinstein::member_seed(base_cfg.seed, i);
        c.workers = 1;
        c.output = (root / label).string();
        outcomes[i] = execute(c, c.output);
      } catch (const SchemaError& e) {
        outcomes[i].code = kExitSchema;
        outcomes[i].log = std::string("schema error: ") + e.what() + '\n';
      }
    }
  };
  const int n_workers = std::max(1, std::min<int>(base_cfg.workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitPass;
  json runs = json::array();
  for (std::size_t i = 0; i < points.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (o.code == kExitSchema) code = kExitSchema;
    if (o.code == kExitFail && code == kExitPass) code = kExitFail;
    json entry = {{"point", labels[i]}, {"exit_code", o.code}, {"output", (root / labels[i]).string()}};
    json values = json::object();
    for (std::size_t k = 0; k < ranges.size(); ++k) values[ranges[k].key] = points[i][k];
    entry["values"] = values;
    if (o.report) entry["checks"] = o.report->to_json()["checks"];
    if (!o.log.empty()) entry["log"] = o.log;
    runs.push_back(entry);
    (o.code == kExitPass ? out : err) << "[" << labels[i] << "] exit " << o.code << '\n' << o.log;
  }
  fs::create_directories(root);
  std::ofstream f(root / "scan.json", std::ios::binary);
  f << json{{"experiment", to_string(base_cfg.experiment)}, {"master_seed", base_cfg.seed}, {"runs", runs},
            {"config", resolved_config(base_cfg)}}
           .dump(2)
    << '\n';
  out << "scan summary: " << (root / "scan.json").string() << '\n';
  return code;
}

}  // namespace swsim
