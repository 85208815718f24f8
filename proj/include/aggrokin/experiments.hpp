#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggrokin/config.hpp"
#include "aggrokin/picard.hpp"

namespace aggrokin {

struct Check {
  std::string name;
  bool pass = false;
  nlohmann::json detail;
};

struct ExperimentReport {
  std::string experiment;
  nlohmann::json results = nlohmann::json::object();
  nlohmann::json tolerances = nlohmann::json::object();
  std::vector<Check> checks;
  std::vector<std::string> artifacts;

  bool pass() const;
  void check(std::string name, bool ok, nlohmann::json detail = nullptr);
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  int threads = 0;
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

/// Runs the recipe, writing artifacts into `out_dir`. Module errors propagate.
ExperimentReport execute(const ExperimentConfig& cfg, const RunOptions& opts);

/// Runs the recipe and writes `report.json` (config hash, input hashes,
/// tolerances, checks, results). Returns 0 iff every check passed, 1 if a
/// check failed and 2 if the run raised an error.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts);

/// Sup-norm difference between a Picard solution and the MOL solution
/// stepped onto the same time nodes (at most `max_dt` per substep).
double picard_mol_difference(const ModelParams& params, const Potential& p, const DensityField& u0,
                             const PicardResult& picard, double max_dt = 1e-3);

/// Hashes reported in report.json: SHA-256 of the canonical config JSON and
/// git blob ids of the config bytes and every referenced input file.
nlohmann::json input_hashes(const ExperimentConfig& cfg);

}  // namespace aggrokin
