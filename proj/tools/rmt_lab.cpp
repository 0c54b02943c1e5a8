// rmt-lab: run the random-matrix experiments from the command line.
//
//   rmt-lab list                     catalog of experiment ids
//   rmt-lab run --experiment lsc     one experiment, CSV + JSON to --out
//   rmt-lab suite                    the full acceptance set
//
// Exit codes: 0 pass, 1 experiment failure, 2 invalid configuration.

#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rmt/experiments.hpp"

namespace {

rmt::ExperimentConfig load_config(const std::string& experiment,
                                  const std::string& config_path) {
  rmt::ExperimentConfig cfg = rmt::default_config(experiment);
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is) throw rmt::UnknownExperiment("cannot open config file " + config_path);
    rmt::ordered_json j = rmt::ordered_json::parse(is);
    rmt::ordered_json base = rmt::ordered_json(cfg);
    for (auto& [key, value] : j.items()) base[key] = value;  // flags beat file later
    cfg = base.get<rmt::ExperimentConfig>();
  }
  return cfg;
}

int run_one(const rmt::ExperimentConfig& cfg, bool quiet_tables = false) {
  const auto report = rmt::run_experiment(cfg);
  const auto files = rmt::write_report_files(report, cfg.out_dir);
  std::printf("%-14s %s  (%.1fs, seed %llu)\n", report.id.c_str(),
              report.passed() ? "PASS" : "FAIL", report.wall_seconds,
              static_cast<unsigned long long>(report.seed));
  if (!quiet_tables)
    for (const auto& c : report.checks)
      std::printf("    %-34s %12.5g %s %-12.5g %s\n", c.name.c_str(), c.value,
                  c.cmp.c_str(), c.threshold, c.pass ? "ok" : "FAIL");
  for (const auto& f : files) std::printf("    wrote %s\n", f.c_str());
  return report.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random-matrix universality laboratory"};
  app.require_subcommand(1);

  std::string experiment = "lsc", config_path, out_dir;
  uint64_t seed = 0;
  int threads = -1;
  int samples = -1;
  std::vector<int> n_override;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "JSON config file (flags override)");
    cmd->add_option("--seed", seed, "master seed (0 keeps the default)");
    cmd->add_option("--threads", threads, "worker threads (0 = all cores)");
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--samples", samples, "Monte Carlo samples / seeds");
    cmd->add_option("--N", n_override, "matrix size list override")->delimiter(',');
  };

  CLI::App* run = app.add_subcommand("run", "run one experiment");
  run->add_option("--experiment", experiment, "experiment id")->required();
  add_common(run);

  CLI::App* suite = app.add_subcommand("suite", "run the acceptance experiments");
  add_common(suite);

  CLI::App* list = app.add_subcommand("list", "list experiment ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const char* env_out = std::getenv("RMT_LAB_OUT");
  auto apply_overrides = [&](rmt::ExperimentConfig& cfg) {
    if (seed != 0) cfg.seed = seed;
    if (threads >= 0) cfg.threads = threads;
    if (samples > 0) cfg.samples = samples;
    if (!n_override.empty()) cfg.N_list = n_override;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    else if (env_out) cfg.out_dir = env_out;
  };

  try {
    if (list->parsed()) {
      std::printf("%-14s  %-58s  %s\n", "id", "description", "statement");
      for (const auto& e : rmt::experiment_catalog())
        std::printf("%-14s  %-58s  %s\n", e.id.c_str(), e.description.c_str(),
                    e.statement.c_str());
      return 0;
    }
    if (run->parsed()) {
      rmt::ExperimentConfig cfg = load_config(experiment, config_path);
      apply_overrides(cfg);
      return run_one(cfg);
    }
    // suite: the acceptance experiments in criterion order
    const std::vector<std::string> ids = {
        "identities", "semicircle", "lsc",        "rigidity",  "deloc",
        "flucavg",    "surmise",    "sine",       "dbm",       "fourmoment",
        "loggas-xval", "repulsion", "gap-local",  "band"};
    int failures = 0;
    for (const auto& id : ids) {
      rmt::ExperimentConfig cfg = load_config(id, config_path);
      apply_overrides(cfg);
      failures += run_one(cfg, true);
    }
    std::printf("suite: %d of %zu experiments failed\n", failures, ids.size());
    return failures == 0 ? 0 : 1;
  } catch (const rmt::UnknownExperiment& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
