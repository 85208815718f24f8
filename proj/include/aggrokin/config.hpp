#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/grid.hpp"

namespace aggrokin {

enum class Experiment {
  equilibria,
  meso_run,
  picard_run,
  bounded_check,
  comparison_check,
  stability_check,
  aggregation_run,
  front_fit,
  recurrence,
  micro_run,
  micro_meso_compare,
  fluctuation_demo,
  horizon,
};

std::string to_string(Experiment e);
Experiment experiment_from_string(const std::string& name);
const std::vector<std::string>& experiment_names();

/// Initial density: constant | bump(center, width, height, base) | step | file.
struct InitialSpec {
  enum class Type { constant, bump, step, file } type = Type::constant;
  double value = 0.0;
  // bump: base + height cos^2(pi r / (2 width)) for r = |x - center| < width
  std::array<double, 2> center{0.0, 0.0};
  double width = 1.0, height = 1.0, base = 0.0;
  // step: `inside` on the box [lo, hi], `outside` elsewhere
  std::array<double, 2> lo{0.0, 0.0}, hi{0.0, 0.0};
  double inside = 1.0, outside = 0.0;
  std::filesystem::path path;  ///< CSV `x,u`, linearly interpolated onto the grid (1D)

  DensityField build(const DomainGrid& grid) const;
  nlohmann::json to_json() const;
};

/// Experiment-specific numeric settings (the `run` object). Only the keys a
/// given experiment accepts may appear.
struct RunSettings {
  double t_end = 1.0;
  double dt = 0.0;  ///< 0 picks the solver default
  double report_every = 0.1;
  std::string format = "csv";  ///< snapshot format: csv | binary
  // picard
  double c = 0.0;  ///< 0 means max(u0)
  double tol = 1e-10;
  int nodes = 64;
  // stability
  double amplitude = 0.0;
  // aggregation / front fit
  std::array<double, 2> region{-1.0, 1.0};
  double b = 0.0;           ///< absolute level; 0 means b_factor * reference
  double b_factor = 1.1;
  std::string b_reference = "bhat_front";  ///< bhat_front | b_hat
  double kappa = 2.0;
  double u0_factor = 1.5;   ///< front-fit: u0 = u0_factor * b on the region
  std::vector<double> probes;
  std::vector<int> resolutions;
  // recurrence
  double d0 = 0.0;
  double c0 = 0.0;
  int K = 1000;
  // micro
  std::vector<double> snapshot_times;
  int replicas = 64;
  int bins = 20;
  std::vector<double> eps_list;
  double pair_r_max = 2.5;
  int pair_bins = 5;
  std::size_t initial_count = 0;
  double L = 10.0;
  int samples = 21;
  std::size_t cap = 0;
  // horizon
  double C0 = 1.0, C = 2.0;
  std::optional<double> c_phi;
  // comparison
  std::optional<InitialSpec> high;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::equilibria;
  ModelParams params;
  std::optional<Potential> potential;
  std::optional<double> beta;  ///< overrides beta(potential)
  std::optional<DomainGrid> grid;
  std::optional<InitialSpec> initial;
  std::uint64_t seed = 1;
  std::string output;
  RunSettings run;

  std::filesystem::path path;  ///< config file, empty when parsed from text
  std::string text;            ///< raw document bytes
  nlohmann::json raw;
  std::vector<std::filesystem::path> inputs;  ///< files the config references

  double beta_value() const;
};

/// Strict parse: unknown keys and wrong types raise ErrorKind::configuration
/// naming the key path and the expected type. Numeric fields are checked
/// against the preconditions of the chosen experiment.
ExperimentConfig parse_config(const std::filesystem::path& path);
ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {});

}  // namespace aggrokin
