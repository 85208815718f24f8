#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/errors.hpp"
#include "aggrokin/grid.hpp"
#include "aggrokin/particles.hpp"
#include "aggrokin/rng.hpp"

namespace aggrokin {

/// Binary indexed tree of nonnegative weights with prefix search.
class FenwickTree {
 public:
  void resize(std::size_t n);
  std::size_t size() const noexcept { return n_; }
  void set(std::size_t i, double w);
  double value(std::size_t i) const { return w_[i]; }
  double total() const noexcept { return total_; }
  /// Smallest i with w_0 + ... + w_i > target (clamped to the last slot).
  std::size_t find(double target) const;
  /// Recomputes sums from the stored weights, dropping accumulated rounding.
  void rebuild();

 private:
  std::size_t n_ = 0;
  std::size_t cap_ = 0;
  std::vector<double> w_, tree_;
  double total_ = 0.0;
};

struct Event {
  enum class Kind { birth, death } kind = Kind::birth;
  double wait = 0.0;
  Point where{0.0, 0.0};
  std::size_t index = 0;  ///< new particle (birth) or removed slot (death)
};

constexpr std::size_t default_population_cap = 10'000'000;

/// Particle configuration plus clock, RNG and rate bookkeeping for the
/// epsilon-scaled birth-and-death generator: births at total rate
/// (lambda/epsilon) L^d, deaths of x at rate m exp(-epsilon E(x)).
class SimState {
 public:
  SimState(const ModelParams& params, const Potential& p, double L, std::uint64_t seed,
           std::size_t cap = default_population_cap);

  const ParticleConfiguration& config() const noexcept { return config_; }
  const ModelParams& params() const noexcept { return params_; }
  double time() const noexcept { return t_; }
  void set_time(double t) noexcept { t_ = t; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t cap() const noexcept { return cap_; }
  Rng& rng() noexcept { return rng_; }

  double birth_rate() const noexcept { return birth_rate_; }
  double death_rate(std::size_t i) const { return rates_.value(i); }
  double total_death_rate() const noexcept { return rates_.total(); }
  double total_rate() const noexcept { return birth_rate_ + rates_.total(); }
  double recomputed_total_death_rate() const;

  void add_particle(const Point& x);
  void remove_particle(std::size_t i);

  /// Throws ErrorKind::consistency when cached energies deviate from a full
  /// recomputation by more than `tol` (relative). Returns the worst deviation.
  double audit(double tol = 1e-6) const;

  /// Applies one event after waiting `wait` (already drawn by the caller).
  Event fire(double wait);
  std::uint64_t events() const noexcept { return events_; }

 private:
  void refresh(std::span<const std::size_t> touched);

  ParticleConfiguration config_;
  ModelParams params_;
  double birth_rate_;
  double t_ = 0.0;
  std::uint64_t seed_;
  std::size_t cap_;
  Rng rng_;
  FenwickTree rates_;
  std::vector<std::size_t> touched_;
  std::uint64_t events_ = 0;
};

/// Exact next event: exponential wait with the total rate, then birth
/// (uniform location) or death (index drawn proportionally to its rate).
Event gillespie_step(SimState& state);

struct Snapshot {
  double t = 0.0;
  std::vector<Point> points;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::uint64_t events = 0;
  double t_reached = 0.0;
  bool capacity_hit = false;
};

/// Raised when the population exceeds the cap; carries everything recorded
/// up to that point.
class CapacityExceeded : public Error {
 public:
  CapacityExceeded(const std::string& what, RunResult partial)
      : Error(ErrorKind::capacity, "micro_sim", what), partial_(std::make_shared<RunResult>(std::move(partial))) {}
  const RunResult& partial() const noexcept { return *partial_; }

 private:
  std::shared_ptr<RunResult> partial_;
};

/// Runs to t_end, recording the configuration at each requested time (the
/// state just before the first event after it). Times must be sorted.
RunResult run(SimState& state, double t_end, std::span<const double> snapshot_times);

/// Poisson configuration with intensity u0(x)/epsilon, u0 the linear
/// interpolant of the grid field (1D) or its cell values (2D), sampled by
/// thinning against the maximum.
SimState init_poisson(const ModelParams& params, const Potential& p, const DensityField& u0, std::uint64_t seed,
                      std::size_t cap = default_population_cap);
/// Same with an explicit intensity function bounded by `max_u0` on [-L/2, L/2)^d.
SimState init_poisson(const ModelParams& params, const Potential& p, double L,
                      const std::function<double(const Point&)>& u0, double max_u0, std::uint64_t seed,
                      std::size_t cap = default_population_cap);

}  // namespace aggrokin
