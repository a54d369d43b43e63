#include <iostream>
#include <map>
#include <mutex>

#include "CLI11.hpp"
#include "cli/driver.hpp"
#include "weinstein/transform.hpp"

int main(int argc, char** argv) {
  CLI::App app{"swsim: Weinstein transform and Schrodinger-Weinstein experiments"};
  app.require_subcommand(1);

  swsim::Overrides ov;
  std::uint64_t seed = 0;
  int workers = 0;
  std::string out;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", out, "output directory (overrides the config)");
  };

  std::string config;
  std::vector<std::string> params;
  auto* run = app.add_subcommand("run", "run the experiment named in a config file");
  run->add_option("config", config, "YAML or JSON config")->required();
  add_flags(run);
  auto* validate = app.add_subcommand("validate", "check a config against the schema");
  validate->add_option("config", config, "YAML or JSON config")->required();
  auto* scan = app.add_subcommand("scan", "run a config over a parameter grid");
  scan->add_option("--param", params, "key=start:step:stop (repeatable)")->required();
  scan->add_option("config", config, "YAML or JSON config")->required();
  add_flags(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : swsim::kExitSchema;
  }

  // Repeated warnings (one per transform inside a time loop) are counted, not echoed.
  std::map<std::string, int> seen;
  std::mutex seen_mutex;
  weinstein::set_warning_handler([&](const std::string& msg) {
    std::lock_guard<std::mutex> lock(seen_mutex);
    const int n = ++seen[msg.substr(0, msg.find(':'))];
    if (n <= 3) std::cerr << "warning: " << msg << '\n';
  });
  auto report_suppressed = [&] {
    for (const auto& [origin, n] : seen) {
      if (n > 3) std::cerr << "warning: " << n - 3 << " further '" << origin << "' warnings suppressed\n";
    }
  };
  for (auto* sub : {run, scan}) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--workers")) ov.workers = workers;
    if (sub->count("--out")) ov.out = out;
  }
  int rc = 0;
  if (run->parsed()) {
    rc = swsim::run_command(config, ov, std::cout, std::cerr);
  } else if (validate->parsed()) {
    rc = swsim::validate_command(config, std::cout, std::cerr);
  } else {
    rc = swsim::scan_command(config, params, ov, std::cout, std::cerr);
  }
  report_suppressed();
  return rc;
}
