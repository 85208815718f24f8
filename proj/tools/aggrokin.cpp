#include <CLI11.hpp>

#include <omp.h>

#include <iostream>
#include <string>

#include "aggrokin/config.hpp"
#include "aggrokin/errors.hpp"
#include "aggrokin/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"aggrokin: kinetic aggregation experiments"};
  std::string experiment, config, out = ".";
  int threads = 0;
  std::uint64_t seed = 0;

  std::string names;
  for (const auto& n : aggrokin::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("experiment", experiment, "one of: " + names)->required();
  app.add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out, "output directory");
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  auto* seed_opt = app.add_option("--seed", seed, "base RNG seed, overrides the config");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = aggrokin::parse_config(config);
    const auto want = aggrokin::experiment_from_string(experiment);
    if (want != cfg.experiment)
      throw aggrokin::Error(aggrokin::ErrorKind::configuration, "cli",
                            "experiment '" + experiment + "' does not match config experiment '" +
                                aggrokin::to_string(cfg.experiment) + "'");
    if (threads > 0) omp_set_num_threads(threads);
    aggrokin::RunOptions opts;
    opts.out_dir = out;
    opts.threads = threads;
    if (*seed_opt) opts.seed = seed;
    const int status = aggrokin::run_experiment(cfg, opts);
    std::cout << aggrokin::to_string(cfg.experiment) << ": " << (status == 0 ? "pass" : status == 1 ? "FAIL" : "error")
              << " (" << (opts.out_dir / "report.json").string() << ")\n";
    return status;
  } catch (const aggrokin::Error& e) {
    std::cerr << "aggrokin: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "aggrokin: " << e.what() << "\n";
    return 2;
  }
}
