#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vhmc/bench.hpp"
#include "vhmc/config.hpp"
#include "vhmc/errors.hpp"
#include "vhmc/selftest.hpp"

namespace {

constexpr const char* kOutputEnv = "VHMC_OUTPUT_DIR";

struct Overrides {
  std::string config;
  std::string out;
  int workers = 0;
  std::optional<std::uint64_t> seed;
};

vhmc::ExperimentConfig load_with_overrides(const Overrides& o) {
  if (o.config.empty()) throw vhmc::ConfigError("no config given");
  if (!std::filesystem::exists(o.config)) throw vhmc::ConfigError("config not found: " + o.config);
  vhmc::ExperimentConfig cfg = vhmc::load_config_file(o.config);
  if (!o.out.empty()) {
    cfg.output_dir = o.out;
  } else if (const char* env = std::getenv(kOutputEnv); env && *env) {
    cfg.output_dir = env;
  }
  if (o.workers > 0) cfg.workers = o.workers;
  if (o.seed) cfg.master_seed = *o.seed;
  return cfg;
}

void print_summary(const std::vector<vhmc::SummaryRow>& rows) {
  std::cout << "metric,mean,std,count\n";
  for (const auto& r : rows)
    std::cout << r.metric << ',' << vhmc::format_double(r.mean) << ',' << vhmc::format_double(r.std) << ','
              << r.count << '\n';
}

int cmd_run(const Overrides& o) {
  const vhmc::ExperimentConfig cfg = load_with_overrides(o);
  const vhmc::RunReport report = vhmc::run_experiment(cfg);
  print_summary(report.summary);
  std::size_t failed = 0;
  for (const auto& r : report.replicates) failed += r.ok() ? 0 : 1;
  std::cerr << "wrote " << cfg.output_dir << " (" << report.replicates.size() - failed << " of "
            << report.replicates.size() << " replicates succeeded)\n";
  return 0;
}

int cmd_fit(const Overrides& o) {
  const vhmc::ExperimentConfig cfg = load_with_overrides(o);
  const vhmc::VariationalBuild build = vhmc::fit_experiment_mixture(cfg);
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / "mixture.cfg";
  std::ofstream out(path);
  if (!out) throw vhmc::Error("cannot write " + path.string());
  out << vhmc::mixture_to_text(build.q);
  std::cout << "modes found: " << build.modes.size() << "\nlog envelope: " << vhmc::format_double(build.q.log_envelope)
            << "\nwrote " << path.string() << "\n";
  return 0;
}

int cmd_report(const std::string& dir) {
  print_summary(vhmc::reaggregate(dir));
  std::cerr << "wrote " << (std::filesystem::path(dir) / "aggregate.csv").string() << "\n";
  return 0;
}

int cmd_selftest() {
  const auto cases = vhmc::run_selftest();
  int failures = 0;
  for (const auto& c : cases) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
    failures += c.passed ? 0 : 1;
  }
  std::cout << cases.size() - static_cast<std::size_t>(failures) << "/" << cases.size() << " checks passed\n";
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Langevin and variational Hamiltonian Monte Carlo experiments", "vhmc"};
  app.require_subcommand(1);

  Overrides run_opts;
  auto* run = app.add_subcommand("run", "Run an experiment config and write CSV reports");
  run->add_option("config,--config", run_opts.config, "Experiment config file (positional or --config)");
  run->add_option("--out", run_opts.out, std::string("Output directory (overrides ") + kOutputEnv + " and the config)");
  run->add_option("--workers", run_opts.workers, "Replicates run concurrently")->check(CLI::PositiveNumber);
  run->add_option("--seed", run_opts.seed, "Master seed override");

  Overrides fit_opts;
  auto* fit = app.add_subcommand("fit", "Fit and serialize the variational mixture of a config");
  fit->add_option("config,--config", fit_opts.config, "Experiment config file (positional or --config)");
  fit->add_option("--out", fit_opts.out, "Output directory for mixture.cfg");
  fit->add_option("--seed", fit_opts.seed, "Master seed override");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Re-aggregate report.csv into aggregate.csv");
  report->add_option("dir", report_dir, "Run output directory")->required();

  auto* selftest = app.add_subcommand("selftest", "Run the fast invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(run_opts);
    if (*fit) return cmd_fit(fit_opts);
    if (*report) return cmd_report(report_dir);
    if (*selftest) return cmd_selftest();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
