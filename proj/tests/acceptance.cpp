// Acceptance suite. `acceptance N` runs criterion N (1..13), prints one
// PASS/FAIL line and exits 0 on PASS. `acceptance all` runs every criterion.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "aggrokin/aggregation.hpp"
#include "aggrokin/equilibria.hpp"
#include "aggrokin/experiments.hpp"
#include "aggrokin/front.hpp"
#include "aggrokin/meso_solver.hpp"
#include "aggrokin/micro_experiments.hpp"
#include "aggrokin/micro_sim.hpp"
#include "aggrokin/picard.hpp"
#include "aggrokin/regime_checks.hpp"
#include "oracles.hpp"

using namespace aggrokin;

namespace tol {
constexpr double root_residual = 1e-10;
constexpr double scalar_oracle = 1e-8;
constexpr double bounded = 1e-6;
constexpr double order = 1e-6;
constexpr double picard_mol = 1e-4;
constexpr double contraction = 0.6;
constexpr double window_margin = 0.5;
constexpr double stability_growth = 2.0;
constexpr double stability_decay = 0.1;
constexpr double growth_chain = 1e-6;
constexpr double front_factor = 1.05;
constexpr double front_stability = 0.2;
constexpr double asymptotic = 0.05;  // times ln K
constexpr double forms = 1e-10;
constexpr double poisson_sigmas = 4.0;
constexpr double z_max = 3.0;
constexpr double horizon_rel = 1e-14;
}  // namespace tol

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

using Rand = std::mt19937_64;

double uni(Rand& r, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(r); }
double log_uni(Rand& r, double lo, double hi) { return std::exp(uni(r, std::log(lo), std::log(hi))); }

Potential random_potential(Rand& r) {
  switch (std::uniform_int_distribution<int>(0, 2)(r)) {
    case 0: return Potential::indicator_box(uni(r, 0.3, 1.5), uni(r, 0.3, 2.0));
    case 1: return Potential::triangle(uni(r, 0.5, 2.0), uni(r, 0.3, 2.0));
    default: return Potential::truncated_gaussian(uni(r, 0.1, 0.4), uni(r, 0.3, 2.0));
  }
}

// lambda placed strictly inside the regulation regime.
ModelParams random_subcritical(Rand& r, double beta) {
  const double m = log_uni(r, 0.2, 5.0);
  return {m, uni(r, 0.05, 0.95) * m / (beta * std::exp(1.0)), 1.0};
}

const DomainGrid grid16{1, 16.0, 256};

// Smooth periodic field with values spanning exactly [lo, hi].
DensityField random_profile(Rand& r, const DomainGrid& g, double lo, double hi) {
  DensityField u(g);
  double amp[4], ph[4];
  for (int k = 0; k < 4; ++k) {
    amp[k] = uni(r, 0.0, 1.0) / (k + 1);
    ph[k] = uni(r, 0.0, 2.0 * M_PI);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    double s = 0.0;
    for (int k = 0; k < 4; ++k) s += amp[k] * std::cos(2.0 * M_PI * (k + 1) * g.node(i)[0] / g.L + ph[k]);
    u.values[i] = s;
  }
  const double a = u.min(), b = u.max();
  for (auto& v : u.values) v = lo + (hi - lo) * (v - a) / (b - a);
  return u;
}

Outcome c1_equilibria() {
  Rand r(101);
  double worst = 0.0;
  bool bracket = true;
  for (int i = 0; i < 1000; ++i) {
    const double m = log_uni(r, 0.01, 100.0), beta = log_uni(r, 0.01, 100.0);
    const double lambda = uni(r, 1e-3, 0.999) * m / (beta * std::exp(1.0));
    const auto eq = equilibria({m, lambda, 1.0}, beta);
    // Dimensionless residual of beta k e^{-beta k} = lambda beta / m.
    for (double k : {eq.kappa1, eq.kappa2})
      worst = std::max(worst, std::abs(beta * k * std::exp(-beta * k) - lambda * beta / m));
    bracket = bracket && eq.kappa1 < 1.0 / beta && 1.0 / beta < eq.kappa2;
  }
  return {worst < tol::root_residual && bracket,
          fmt("1000 draws, worst residual %.3g, bracketing %s", worst, bracket ? "ok" : "violated")};
}

Outcome c2_scalar_oracle() {
  Rand r(202);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto p = random_potential(r);
    const ModelParams params{log_uni(r, 0.2, 5.0), log_uni(r, 0.05, 5.0), 1.0};
    const double u0 = uni(r, 0.0, 3.0), b = beta(p);
    const auto traj = solve_mol(params, p, DensityField(grid16, u0), 1.0, default_dt(params, b), 1.0);
    const double ref = oracle::dopri5(
        [&](double, double y) { return params.lambda - params.m * y * std::exp(-b * y); }, u0, 0.0, 1.0);
    const auto& last = traj.snapshots.back();
    worst = std::max({worst, std::abs(last.max() - ref), std::abs(last.min() - ref)});
  }
  return {worst < tol::scalar_oracle, fmt("50 draws, sup error at t=1 %.3g", worst)};
}

Outcome c3_bounded() {
  Rand r(303);
  double worst_over = -1e300, worst_interval = -1e300;
  bool ok = true;
  for (int i = 0; i < 20; ++i) {
    const auto p = random_potential(r);
    const auto params = random_subcritical(r, beta(p));
    const auto eq = equilibria(params, beta(p));
    const auto a = check_bounded_regime(params, p, random_profile(r, grid16, 0.0, uni(r, 0.2, 1.0) * eq.kappa2), 10.0);
    worst_over = std::max(worst_over, a.max_value - eq.kappa2);
    ok = ok && a.max_value <= eq.kappa2 + tol::bounded && a.min_value >= -tol::bounded;
    const double c = eq.kappa1 + uni(r, 0.1, 1.0) * (eq.kappa2 - eq.kappa1);
    const auto b = check_bounded_regime(params, p, random_profile(r, grid16, eq.kappa1, c), 10.0);
    ok = ok && b.interval_variant;
    worst_interval = std::max({worst_interval, b.max_value - c, eq.kappa1 - b.min_value});
    ok = ok && b.max_value <= c + tol::bounded && b.min_value >= eq.kappa1 - tol::bounded;
  }
  return {ok, fmt("20 instances to t=10, max(u - kappa2) %.3g, interval excursion %.3g", worst_over, worst_interval)};
}

Outcome c4_comparison() {
  Rand r(404);
  double worst = -1e300;
  for (int i = 0; i < 20; ++i) {
    const auto p = random_potential(r);
    const auto params = random_subcritical(r, beta(p));
    const double k2 = equilibria(params, beta(p)).kappa2;
    const auto low = random_profile(r, grid16, 0.0, uni(r, 0.1, 0.8) * k2);
    auto high = low;
    const auto gap = random_profile(r, grid16, 0.0, uni(r, 0.01, 0.2) * k2);
    for (std::size_t j = 0; j < high.values.size(); ++j) high.values[j] = std::min(k2, high.values[j] + gap.values[j]);
    worst = std::max(worst, check_comparison(params, p, low, high, 10.0).max_violation);
  }
  return {worst <= tol::order, fmt("20 pairs to t=10, max(low - high) %.3g", worst)};
}

Outcome c5_picard() {
  Rand r(505);
  double worst_diff = 0.0, worst_ratio = 0.0, worst_lhs = 0.0;
  for (int i = 0; i < 20; ++i) {
    const auto p = random_potential(r);
    const double b = beta(p);
    const auto params = random_subcritical(r, b);
    const auto eq = equilibria(params, b);
    const auto u0 = random_profile(r, grid16, 0.0, uni(r, 0.2, 1.0) * eq.kappa2);
    const double c = std::max(u0.max(), eq.kappa1);
    const double T = picard_window(params, b, c);
    worst_lhs = std::max(worst_lhs, params.lambda * b * params.m * T * T / 2.0 + c * b * params.m * T);
    const auto res = solve_picard(params, p, u0, c, 1e-12, T, 128);
    worst_ratio = std::max(worst_ratio, res.worst_ratio);
    worst_diff = std::max(worst_diff, picard_mol_difference(params, p, u0, res));
  }
  const bool ok = worst_diff < tol::picard_mol && worst_ratio <= tol::contraction &&
                  worst_lhs <= tol::window_margin * (1.0 + 1e-12);
  return {ok, fmt("20 instances, sup|Picard - MOL| %.3g, contraction ratio %.3g, window lhs %.6g", worst_diff,
                  worst_ratio, worst_lhs)};
}

Outcome c6_stability() {
  Rand r(606);
  double worst_growth = 0.0, worst_final = 0.0;
  for (int i = 0; i < 10; ++i) {
    const auto p = random_potential(r);
    const auto params = random_subcritical(r, beta(p));
    const double k1 = equilibria(params, beta(p)).kappa1;
    const auto rep = check_stability(params, p, grid16, 0.05 * k1, 6060 + i);
    worst_growth = std::max(worst_growth, rep.max_deviation / rep.initial_deviation);
    worst_final = std::max(worst_final, rep.final_deviation / rep.initial_deviation);
  }
  return {worst_growth <= tol::stability_growth && worst_final < tol::stability_decay,
          fmt("10 instances, max deviation ratio %.4g, final ratio %.3g", worst_growth, worst_final)};
}

struct FrontSetup {
  ModelParams params{1.0, 1.0, 1.0};
  Potential phi = Potential::indicator_box(0.5, 1.0);
  RegionSupport A = RegionSupport::interval(-1.0, 1.0);
  double b = 1.1 * bhat_front({1.0, 1.0, 1.0});
  AggregationCertificate cert = make_certificate(params, phi, A, b, 2.0);

  DensityField initial(int n) const {
    DensityField u(DomainGrid{1, 64.0, n});
    for (std::size_t i = 0; i < u.grid.size(); ++i)
      if (A.contains(u.grid.node(i))) u.values[i] = 1.5 * b;
    return u;
  }
};

Outcome c7_growth() {
  const FrontSetup s;
  if (!s.cert.valid) return {false, "certificate invalid for b = 1.1 bhat"};
  FrontOptions o;
  o.stop_when_crossed = false;
  o.stop_at_wrap_guard = false;
  const auto tr = front_trace(s.params, s.phi, s.initial(1024), s.cert, {}, 20.0, o);
  const double lam = s.params.lambda, kappa = s.cert.kappa;
  const bool ok = tr.udot_min_A > lam / kappa && tr.udot_max_A <= lam && tr.gr_worst_scaled >= -tol::growth_chain &&
                  std::abs(tr.t_end - 20.0) < 1e-9;
  return {ok, fmt("t=%.4g, udot on A in [%.6g, %.6g] vs (%.3g, %.3g], Gr margin/(1+lt) %.3g", tr.t_end, tr.udot_min_A,
                  tr.udot_max_A, lam / kappa, lam, tr.gr_worst_scaled)};
}

Outcome c8_front() {
  const FrontSetup s;
  std::vector<double> probes;
  for (int k = 1; k <= 12; ++k) probes.push_back(1.0 + k);
  std::vector<double> A;
  double worst_ratio = 0.0;
  bool bound = true;
  for (int n : {512, 1024}) {
    FrontOptions o;
    const auto tr = front_trace(s.params, s.phi, s.initial(n), s.cert, probes, 400.0, o);
    FrontPredictor pred(s.params, s.b, 1.0);
    const auto fit = fit_front(tr, pred);
    for (std::size_t i = 0; i < fit.x.size(); ++i) {
      const double ratio = fit.measured[i] / fit.predicted[i];
      bound = bound && std::isfinite(ratio) && ratio <= tol::front_factor;
      worst_ratio = std::max(worst_ratio, std::isfinite(ratio) ? ratio : INFINITY);
    }
    A.push_back(fit.A);
  }
  const bool positive = A[0] > 0.0 && A[1] > 0.0;
  const bool stable = std::abs(A[1] - A[0]) <= tol::front_stability * std::abs(A[0]);
  return {bound && positive && stable,
          fmt("max t_level/prediction %.4g (bound %s), fitted |x|ln|x| coefficient %.4g (n=512) %.4g (n=1024): "
              "positive %s, stable %s",
              worst_ratio, bound ? "ok" : "violated", A[0], A[1], positive ? "yes" : "no", stable ? "yes" : "no")};
}

Outcome c9_recurrence() {
  bool ok = true;
  std::string detail;
  for (double mu : {0.0, -1.0, 1.0}) {
    const ModelParams p{1.0, 16.0 * std::exp(mu), 1.0};
    const double d0 = 4.0 * std::max(2.0, mu + 2.0);
    const auto seq = recurrence(p, d0, 10000);
    const auto ac = asymptotic_check(seq);
    const auto fa = compare_forms(p, d0, 10000);
    const bool forms = fa.step_discrepancy < tol::forms && fa.chain_discrepancy < tol::forms;
    const bool small = std::abs(ac.e_K) < tol::asymptotic * std::log(10000.0);
    const bool decays = std::abs(ac.e_half) < std::abs(ac.e_quarter) && std::abs(ac.e_K) < std::abs(ac.e_half);
    ok = ok && forms && small && decays;
    detail += fmt("%smu=%g: |e| %.3g -> %.3g -> %.3g (tol %.3g), forms %.2g", detail.empty() ? "" : "; ", mu,
                  std::abs(ac.e_quarter), std::abs(ac.e_half), std::abs(ac.e_K), tol::asymptotic * std::log(10000.0),
                  std::max(fa.step_discrepancy, fa.chain_discrepancy));
  }
  return {ok, detail};
}

Outcome c10_free_baseline() {
  const ModelParams params{1.0, 2.0, 1.0};
  const auto zero = Potential::zero();
  const double L = 10.0;
  const auto region = RegionSupport::interval(-2.5, 2.5);
  const double mean_ref = 2.0 * region.volume();
  const int R = 1000;
  const double times[] = {5.0};
  double s = 0.0, s2 = 0.0;
  for (int r = 0; r < R; ++r) {
    auto st = init_poisson(params, zero, L, [](const Point&) { return 2.0; }, 2.0, replica_seed(1010, r));
    const auto res = run(st, 5.0, times);
    std::size_t n = 0;
    for (const auto& x : res.snapshots.at(0).points) n += region.contains(x) ? 1 : 0;
    s += static_cast<double>(n);
    s2 += static_cast<double>(n) * static_cast<double>(n);
  }
  const double mean = s / R, var = (s2 - s * s / R) / (R - 1);
  // Poisson(mu): sd(mean) = sqrt(mu/R), sd(sample variance) ~ sqrt((mu + 2 mu^2)/R).
  const double z_mean = (mean - mean_ref) / std::sqrt(mean_ref / R);
  const double z_var = (var - mean_ref) / std::sqrt((mean_ref + 2.0 * mean_ref * mean_ref) / R);
  return {std::abs(z_mean) <= tol::poisson_sigmas && std::abs(z_var) <= tol::poisson_sigmas,
          fmt("1000 replicas, count mean %.4g (z %.2f), variance %.4g (z %.2f), expected %.4g", mean, z_mean, var, z_var,
              mean_ref)};
}

CompareReport micro_meso_runs() {
  const ModelParams params{1.0, 1.0, 1.0};
  const auto phi = Potential::indicator_box(0.5, 0.5);
  const DomainGrid g{1, 10.0, 256};
  DensityField u0(g, 0.5);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::abs(g.node(i)[0]);
    if (r < 1.0) u0.values[i] += 1.5 * std::pow(std::cos(M_PI * r / 2.0), 2);
  }
  CompareOptions o;
  o.eps_list = {1.0, 0.5, 0.25};
  o.t_end = 1.0;
  o.replicas = 128;
  o.seed = 20261019;
  o.density_bins = 20;
  o.pair_r_max = 2.5;
  o.pair_bins = 5;
  o.z_tolerance = tol::z_max;
  return micro_meso_compare(params, phi, u0, o);
}

Outcome c11_micro_meso() {
  const auto rep = micro_meso_runs();
  std::string d;
  for (const auto& r : rep.runs)
    d += fmt("%seps=%g: rms %.4g, max z %.2f", d.empty() ? "" : "; ", r.epsilon, r.discrepancy, r.max_z);
  return {rep.density_pass && rep.monotone_pass, d};
}

Outcome c12_chaos() {
  const auto rep = micro_meso_runs();
  const auto& last = rep.runs.back();
  std::string d = fmt("eps=%g, bins beyond the first:", last.epsilon);
  for (std::size_t b = 1; b < last.pairs.chaos_ratio.size(); ++b)
    d += fmt(" %.3f+-%.3f", last.pairs.chaos_ratio[b], last.pairs.ratio_stderr[b]);
  d += fmt("; max z %.2f", last.max_chaos_z);
  return {rep.chaos_pass, d};
}

Outcome c13_horizon() {
  Rand r(1313);
  double worst_rel = 0.0, worst_margin = -1e300;
  bool ordered = true;
  for (int i = 0; i < 1000; ++i) {
    const double lambda = log_uni(r, 1e-3, 100.0), cphi = uni(r, 0.0, 5.0), C = log_uni(r, 0.05, 20.0);
    const double C0 = uni(r, 0.01, 1.0) * C, beta = cphi + uni(r, 0.0, 3.0);
    const auto h = ovsjannikov_horizon({1.0, lambda, 1.0}, cphi, beta, C0, C);
    const double T = C0 * (C - C0) / (C * C * (std::exp(C * cphi) + lambda / C0));
    const double T1 = C0 * (C - C0) / (C * C * (std::exp(C * beta) + lambda / C0));
    worst_rel = std::max({worst_rel, std::abs(h.T - T) / T, T1 > 0 ? std::abs(h.T1 - T1) / T1 : std::abs(h.T1)});
    worst_margin = std::max(worst_margin, h.T - 1.0 / (1.0 + 2.0 * std::sqrt(lambda * cphi)));
    ordered = ordered && h.T1 <= h.T;
  }
  return {worst_rel <= tol::horizon_rel && worst_margin <= 0.0 && ordered,
          fmt("1000 draws, max relative deviation %.3g, max T - bound %.4g, T1 <= T %s", worst_rel, worst_margin,
              ordered ? "ok" : "violated")};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
    {"equilibrium and threshold suite", c1_equilibria},
    {"scalar-oracle equivalence", c2_scalar_oracle},
    {"boundedness", c3_bounded},
    {"comparison principle", c4_comparison},
    {"Picard vs MOL cross-validation", c5_picard},
    {"stability of kappa1", c6_stability},
    {"aggregation growth", c7_growth},
    {"front form", c8_front},
    {"recurrence asymptotics", c9_recurrence},
    {"free birth-death baseline", c10_free_baseline},
    {"micro vs meso convergence", c11_micro_meso},
    {"chaos factorization", c12_chaos},
    {"horizon formulas", c13_horizon},
};

bool run_one(int k) {
  const auto& [name, fn] = criteria[static_cast<std::size_t>(k - 1)];
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("raised: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("criterion %2d %s: %s (%.1f s) %s\n", k, o.pass ? "PASS" : "FAIL", name, secs, o.detail.c_str());
  std::fflush(stdout);
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  const std::string arg = argc > 1 ? argv[1] : "all";
  if (arg == "all") {
    bool all = true;
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) all = run_one(k) && all;
    return all ? 0 : 1;
  }
  const int k = std::atoi(arg.c_str());
  if (k < 1 || k > static_cast<int>(criteria.size())) {
    std::fprintf(stderr, "usage: acceptance [1-%zu|all]\n", criteria.size());
    return 2;
  }
  return run_one(k) ? 0 : 1;
}
