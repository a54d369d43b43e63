#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/config.hpp"
#include "cli/driver.hpp"
#include "doctest.h"
#include "json.hpp"
#include "weinstein/errors.hpp"
#include "weinstein/transform.hpp"

namespace fs = std::filesystem;
using namespace swsim;

namespace {

const std::string kConfigs = SWSIM_CONFIG_DIR;

const bool kQuiet = [] {
  weinstein::set_warning_handler([](const std::string&) {});
  return true;
}();

fs::path scratch(const std::string& name) {
  const fs::path p = fs::current_path() / "cli_scratch" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string write_text(const fs::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ExperimentConfig parse_text(const fs::path& dir, const std::string& text) {
  return parse_config(load_document(write_text(dir / "c.yaml", text)));
}

SchemaError schema_error(const fs::path& dir, const std::string& text) {
  try {
    parse_text(dir, text);
  } catch (const SchemaError& e) {
    return e;
  }
  FAIL("expected a schema error");
  return SchemaError("", 0, 0);
}

const char* kGrid = "grid: {axial_n: 64, half_width: 6.5, radial_n: 64, radial_extent: 8.0}\n";

}  // namespace

TEST_CASE("shipped configs parse and validate") {
  for (const char* name : {"transform_suite.yaml", "translation_suite.yaml", "dispersion.yaml", "strichartz_scan.json",
                           "solve_critical.yaml", "picard_verify.yaml"}) {
    std::ostringstream out, err;
    INFO(name);
    CHECK(validate_command(kConfigs + "/" + name, out, err) == kExitPass);
  }
  const auto c = parse_config(load_document(kConfigs + "/strichartz_scan.json"));
  CHECK(c.experiment == Experiment::StrichartzScan);
  REQUIRE(c.strichartz.pairs.size() == 2u);
  CHECK(c.strichartz.pairs[0].first == 4.0);
  CHECK(c.strichartz.pairs[0].second == doctest::Approx(8.0 / 3.0));
  const auto s = parse_config(load_document(kConfigs + "/solve_critical.yaml"));
  CHECK(s.solver.mu == weinstein::cdouble(1.0, 0.0));
  CHECK(s.solver.q == 2.0);
  CHECK(s.solver.r == 4.0);
}

TEST_CASE("defaults, complex mu, infinity and auto constant") {
  const auto dir = scratch("parse");
  const auto c = parse_text(dir, std::string("experiment: Solve\nparams: {alpha: 0.5, d: 1}\n") + kGrid +
                                     "solver: {mu: [1, 0.5], q: .inf, r: 2, strichartz_constant: auto}\n");
  CHECK(c.solver.mu == weinstein::cdouble(1.0, 0.5));
  CHECK(std::isinf(c.solver.q));
  CHECK_FALSE(c.solver.strichartz_constant.has_value());
  CHECK(c.seed == 1u);
  CHECK(c.workers == 1);
  CHECK(c.solver.mode == "splitting");
}

TEST_CASE("schema errors carry line and column") {
  const auto dir = scratch("schema");
  std::ostringstream out, err;
  CHECK(validate_command(kConfigs + "/bad_alpha.yaml", out, err) == kExitSchema);
  CHECK(err.str().find("bad_alpha.yaml:3:10: schema error: params.alpha violates the invariant alpha > -1/2") !=
        std::string::npos);

  const std::string head = "experiment: TransformSuite\nparams: {alpha: 0.5, d: 1}\n";
  const auto unknown = schema_error(dir, head + kGrid + "gird: 3\n");
  CHECK(unknown.line() == 4);
  CHECK(std::string(unknown.what()).find("unknown key 'gird'") != std::string::npos);

  CHECK(schema_error(dir, head + "grid: {axial_n: 64, bogus: 1}\n").line() == 3);
  CHECK(schema_error(dir, "experiment: Nope\nparams: {alpha: 0.5, d: 1}\n").line() == 1);
  CHECK(std::string(schema_error(dir, "experiment: TransformSuite\n").what()).find("params") != std::string::npos);
  CHECK(std::string(schema_error(dir, "experiment: TransformSuite\nparams: {alpha: 0.5, d: 1}\n").what()).find("grid") !=
        std::string::npos);
  const std::string params = "params: {alpha: 0.5, d: 1}\n";
  CHECK(std::string(schema_error(dir, "experiment: Solve\n" + params + kGrid).what()).find("solver") !=
        std::string::npos);
  CHECK(std::string(schema_error(dir, "experiment: Dispersion\n" + params + kGrid).what()).find("dispersion") !=
        std::string::npos);
  CHECK(schema_error(dir, head + "grid: {axial_n: 48, half_width: 6.5, radial_n: 64, radial_extent: 8}\n").line() == 3);
  CHECK(schema_error(dir, head + kGrid + "seed: banana\n").line() == 4);
  CHECK(schema_error(dir, head + kGrid + "solver: {mode: sideways}\n").line() == 4);
  CHECK(schema_error(dir, "experiment: TransformSuite\nparams: {alpha: 0.5, d: 1\n").line() > 0);
}

TEST_CASE("set_path writes nested keys and maps alpha and d to params") {
  YAML::Node doc = YAML::Load("experiment: TransformSuite\nparams: {alpha: 0.5, d: 1}\n");
  set_path(doc, "alpha", "1.5");
  set_path(doc, "d", "2");
  set_path(doc, "grid.axial_n", "32");
  set_path(doc, "solver.data.width", "0.25");
  CHECK(doc["params"]["alpha"].as<double>() == 1.5);
  CHECK(doc["params"]["d"].as<int>() == 2);
  CHECK(doc["grid"]["axial_n"].as<int>() == 32);
  CHECK(doc["solver"]["data"]["width"].as<double>() == 0.25);
}

TEST_CASE("parse_param_range") {
  const auto r = parse_param_range("alpha=0:0.25:1");
  CHECK(r.key == "alpha");
  CHECK(r.values == std::vector<std::string>{"0", "0.25", "0.5", "0.75", "1"});
  CHECK(parse_param_range("d=1:1:1").values.size() == 1u);
  CHECK_THROWS_AS(parse_param_range("alpha"), weinstein::UsageError);
  CHECK_THROWS_AS(parse_param_range("alpha=0:1"), weinstein::UsageError);
  CHECK_THROWS_AS(parse_param_range("alpha=0:0:1"), weinstein::UsageError);
  CHECK_THROWS_AS(parse_param_range("alpha=1:0.5:0"), weinstein::UsageError);
  CHECK_THROWS_AS(parse_param_range("alpha=a:b:c"), weinstein::UsageError);
}

TEST_CASE("run: exit 0, summary keys, byte-identical outputs for one seed") {
  const auto dir = scratch("run");
  std::ostringstream out, err;
  Overrides ov;
  ov.out = (dir / "a").string();
  REQUIRE(run_command(kConfigs + "/transform_suite.yaml", ov, out, err) == kExitPass);
  ov.out = (dir / "b").string();
  REQUIRE(run_command(kConfigs + "/transform_suite.yaml", ov, out, err) == kExitPass);
  for (const char* f : {"gaussian_pair.csv", "plancherel.csv"}) {
    const std::string a = slurp(dir / "a" / f);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(dir / "b" / f));
  }
  const auto summary = nlohmann::json::parse(slurp(dir / "a" / "summary.json"));
  for (const char* key : {"experiment", "params", "checks", "pass", "results", "config"}) CHECK(summary.contains(key));
  CHECK(summary["experiment"] == "TransformSuite");
  CHECK(summary["pass"] == true);
  CHECK(summary["params"]["sigma"] == 2.0);
  CHECK(summary["checks"].size() == 4u);
  CHECK(out.str().find("PASS gaussian_pair_rel_err") != std::string::npos);
}

TEST_CASE("run: schema error is exit 2, grid too small is exit 1") {
  const auto dir = scratch("exits");
  std::ostringstream out, err;
  CHECK(run_command(kConfigs + "/bad_alpha.yaml", {}, out, err) == kExitSchema);
  const auto small = write_text(dir / "small.yaml",
                                "experiment: Dispersion\nparams: {alpha: 0.5, d: 1}\n"
                                "grid: {axial_n: 64, half_width: 8, radial_n: 32, radial_extent: 8}\n"
                                "output: " + (dir / "out").string() +
                                    "\ndispersion: {s: 1, t_min: 1, t_max: 30, p: inf, samples: 6}\n");
  std::ostringstream out2, err2;
  CHECK(run_command(small, {}, out2, err2) == kExitFail);
  CHECK(err2.str().find("FAIL") != std::string::npos);
}

TEST_CASE("scan: Cartesian product across workers with derived seeds") {
  const auto dir = scratch("scan");
  std::ostringstream out, err;
  Overrides ov;
  ov.out = (dir / "scan").string();
  ov.workers = 2;
  const int code = scan_command(kConfigs + "/transform_suite.yaml", {"alpha=0:0.5:0.5", "seed=1:1:2"}, ov, out, err);
  const auto scan = nlohmann::json::parse(slurp(dir / "scan" / "scan.json"));
  REQUIRE(scan["runs"].size() == 4u);
  CHECK(scan["runs"][0]["point"] == "alpha=0_seed=1");
  CHECK(scan["runs"][3]["point"] == "alpha=0.5_seed=2");
  int passed = 0;
  for (const auto& run : scan["runs"]) {
    CHECK(fs::exists(run["output"].get<std::string>() + "/summary.json"));
    passed += run["exit_code"] == 0;
  }
  CHECK((code == kExitPass) == (passed == 4));
  std::ostringstream e2;
  CHECK(scan_command(kConfigs + "/transform_suite.yaml", {"alpha"}, ov, out, e2) == kExitSchema);
}
