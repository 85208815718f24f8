#include "aggrokin/micro_sim.hpp"

#include <algorithm>
#include <cmath>

namespace aggrokin {

namespace {

constexpr std::uint64_t rebuild_period = 1u << 16;

[[noreturn]] void capacity_error(const std::string& what) { throw Error(ErrorKind::capacity, "micro_sim", what); }

}  // namespace

void FenwickTree::resize(std::size_t n) {
  if (n > cap_) {
    std::size_t c = std::max<std::size_t>(cap_, 16);
    while (c < n) c <<= 1;
    cap_ = c;
    w_.resize(cap_, 0.0);
    for (std::size_t i = n_; i < cap_; ++i) w_[i] = 0.0;
    n_ = n;
    rebuild();
    return;
  }
  for (std::size_t i = n; i < n_; ++i) set(i, 0.0);
  n_ = n;
}

void FenwickTree::set(std::size_t i, double w) {
  const double delta = w - w_[i];
  if (delta == 0.0) return;
  w_[i] = w;
  total_ += delta;
  for (std::size_t k = i + 1; k <= cap_; k += k & (~k + 1)) tree_[k] += delta;
}

std::size_t FenwickTree::find(double target) const {
  std::size_t pos = 0;
  for (std::size_t step = cap_; step > 0; step >>= 1) {
    if (pos + step <= cap_ && tree_[pos + step] <= target) {
      pos += step;
      target -= tree_[pos];
    }
  }
  return std::min(pos, n_ - 1);
}

void FenwickTree::rebuild() {
  tree_.assign(cap_ + 1, 0.0);
  total_ = 0.0;
  for (std::size_t i = 0; i < cap_; ++i) {
    total_ += w_[i];
    tree_[i + 1] += w_[i];
    const std::size_t parent = (i + 1) + ((i + 1) & (~(i + 1) + 1));
    if (parent <= cap_) tree_[parent] += tree_[i + 1];
  }
}

SimState::SimState(const ModelParams& params, const Potential& p, double L, std::uint64_t seed, std::size_t cap)
    : config_(p, L), params_(params), seed_(seed), cap_(cap), rng_(seed) {
  params.validate();
  birth_rate_ = params.lambda / params.epsilon * (p.dim() == 1 ? L : L * L);
}

double SimState::recomputed_total_death_rate() const {
  double s = 0.0;
  for (std::size_t i = 0; i < config_.size(); ++i)
    s += params_.m * std::exp(-params_.epsilon * config_.energy(i));
  return s;
}

void SimState::refresh(std::span<const std::size_t> touched) {
  for (std::size_t j : touched) rates_.set(j, params_.m * std::exp(-params_.epsilon * config_.energy(j)));
}

void SimState::add_particle(const Point& x) {
  if (config_.size() >= cap_)
    capacity_error("population cap " + std::to_string(cap_) + " reached at t = " + std::to_string(t_));
  rates_.resize(config_.size() + 1);
  config_.add(x, &touched_);
  refresh(touched_);
}

void SimState::remove_particle(std::size_t i) {
  std::size_t moved_from = i;
  const std::size_t last = config_.size() - 1;
  config_.remove(i, &moved_from, &touched_);
  if (i != last) rates_.set(i, rates_.value(last));
  rates_.resize(config_.size());
  refresh(touched_);
}

double SimState::audit(double tol) const {
  const double worst = config_.audit();
  const double total = recomputed_total_death_rate();
  const double rate_err = std::abs(total - rates_.total()) / std::max(1e-300, std::abs(total));
  const double e = std::max(worst, config_.empty() ? 0.0 : rate_err);
  if (e > tol)
    throw Error(ErrorKind::consistency, "micro_sim",
                "rate audit failed: cached vs recomputed relative error " + std::to_string(e));
  return e;
}

Event SimState::fire(double wait) {
  Event ev;
  ev.wait = wait;
  t_ += wait;
  const double u = uniform01(rng_) * total_rate();
  if (u < birth_rate_ || config_.empty()) {
    ev.kind = Event::Kind::birth;
    const double L = config_.L();
    Point x{-0.5 * L + L * uniform01(rng_), 0.0};
    if (config_.dim() == 2) x[1] = -0.5 * L + L * uniform01(rng_);
    ev.where = x;
    add_particle(x);
    ev.index = config_.size() - 1;
  } else {
    ev.kind = Event::Kind::death;
    ev.index = rates_.find(u - birth_rate_);
    ev.where = config_.position(ev.index);
    remove_particle(ev.index);
  }
  if (++events_ % rebuild_period == 0) rates_.rebuild();
  return ev;
}

Event gillespie_step(SimState& state) {
  const double total = state.total_rate();
  if (!(total > 0.0) || !std::isfinite(total))
    throw Error(ErrorKind::consistency, "micro_sim", "total event rate is not finite and positive");
  return state.fire(exponential(state.rng(), total));
}

RunResult run(SimState& state, double t_end, std::span<const double> snapshot_times) {
  if (!(t_end > state.time())) throw Error(ErrorKind::domain, "micro_sim", "run needs t_end > current time");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end()))
    throw Error(ErrorKind::domain, "micro_sim", "snapshot times must be sorted");
  RunResult res;
  const std::uint64_t events0 = state.events();
  std::size_t next = 0;
  while (next < snapshot_times.size() && snapshot_times[next] < state.time()) ++next;
  auto emit_until = [&](double limit, bool inclusive) {
    while (next < snapshot_times.size() && snapshot_times[next] <= t_end &&
           (snapshot_times[next] < limit || (inclusive && snapshot_times[next] == limit))) {
      res.snapshots.push_back({snapshot_times[next], state.config().positions()});
      ++next;
    }
  };
  try {
    for (;;) {
      const double total = state.total_rate();
      if (!(total > 0.0) || !std::isfinite(total))
        throw Error(ErrorKind::consistency, "micro_sim", "total event rate is not finite and positive");
      const double wait = exponential(state.rng(), total);
      const double t_next = state.time() + wait;
      if (t_next > t_end) {
        emit_until(t_end, true);
        state.set_time(t_end);
        break;
      }
      // Snapshot times at or after the current time but before the event see the pre-event state.
      emit_until(t_next, true);
      state.fire(wait);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::capacity) throw;
    res.capacity_hit = true;
    res.events = state.events() - events0;
    res.t_reached = state.time();
    throw CapacityExceeded(e.what(), std::move(res));
  }
  res.events = state.events() - events0;
  res.t_reached = state.time();
  return res;
}

SimState init_poisson(const ModelParams& params, const Potential& p, double L,
                      const std::function<double(const Point&)>& u0, double max_u0, std::uint64_t seed,
                      std::size_t cap) {
  params.validate();
  SimState state(params, p, L, seed, cap);
  if (!(max_u0 >= 0.0)) throw Error(ErrorKind::domain, "micro_sim", "initial intensity must be nonnegative");
  if (max_u0 == 0.0) return state;
  const double vol = p.dim() == 1 ? L : L * L;
  const double candidates_mean = max_u0 / params.epsilon * vol;
  if (candidates_mean > static_cast<double>(cap))
    capacity_error("expected initial population " + std::to_string(candidates_mean) + " exceeds the cap");
  Rng& rng = state.rng();
  const std::uint64_t n = poisson(rng, candidates_mean);
  for (std::uint64_t k = 0; k < n; ++k) {
    Point x{-0.5 * L + L * uniform01(rng), 0.0};
    if (p.dim() == 2) x[1] = -0.5 * L + L * uniform01(rng);
    const double accept = u0(x) / max_u0;
    if (uniform01(rng) < accept) state.add_particle(x);
  }
  return state;
}

SimState init_poisson(const ModelParams& params, const Potential& p, const DensityField& u0, std::uint64_t seed,
                      std::size_t cap) {
  u0.validate();
  const auto& g = u0.grid;
  double mass = 0.0;
  for (double v : u0.values) mass += v * g.cell_volume();
  if (mass / params.epsilon > static_cast<double>(cap))
    capacity_error("expected initial population " + std::to_string(mass / params.epsilon) + " exceeds the cap");
  std::function<double(const Point&)> f;
  if (g.dim == 1)
    f = [&u0](const Point& x) { return interpolate(u0, x[0]); };
  else
    f = [&u0, &g](const Point& x) { return u0.values[g.nearest(x)]; };
  return init_poisson(params, p, g.L, f, u0.max(), seed, cap);
}

}  // namespace aggrokin
