#include "aggrokin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <omp.h>

#include "aggrokin/aggregation.hpp"
#include "aggrokin/errors.hpp"
#include "aggrokin/estimators.hpp"
#include "aggrokin/front.hpp"
#include "aggrokin/io.hpp"
#include "aggrokin/meso_solver.hpp"
#include "aggrokin/micro_experiments.hpp"
#include "aggrokin/micro_sim.hpp"
#include "aggrokin/regime_checks.hpp"

namespace aggrokin {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string eps_tag(double eps) {
  std::string s = io::fmt(eps);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void run_equilibria(const ExperimentConfig& cfg, ExperimentReport& rep) {
  const double b = cfg.beta_value();
  const auto eq = equilibria(cfg.params, b);
  rep.results = to_json(eq, cfg.params, b);
  rep.tolerances["residual"] = 1e-10;
  if (!eq.has_roots()) return;
  rep.check("residual_kappa1", eq.residual1 < 1e-10, eq.residual1);
  rep.check("residual_kappa2", eq.residual2 < 1e-10, eq.residual2);
  if (eq.regime == Regime::subcritical)
    rep.check("roots_bracket_inverse_beta", eq.kappa1 < 1.0 / b && 1.0 / b < eq.kappa2,
              {{"kappa1", eq.kappa1}, {"inverse_beta", 1.0 / b}, {"kappa2", eq.kappa2}});
}

void run_meso(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  const auto& p = *cfg.potential;
  const auto u0 = cfg.initial->build(*cfg.grid);
  const double dt = cfg.run.dt > 0.0 ? cfg.run.dt : default_dt(cfg.params, beta(p));
  const auto traj = solve_mol(cfg.params, p, u0, cfg.run.t_end, dt, cfg.run.report_every);
  if (cfg.run.format == "binary") {
    io::write_snapshots_binary(out / "snapshots.bin", traj.snapshots,
                               {{"params", cfg.params.to_json()}, {"potential", p.to_json()}});
    rep.artifacts.push_back("snapshots.bin");
    rep.artifacts.push_back("snapshots.bin.json");
  } else {
    io::write_snapshots_csv(out / "snapshots.csv", traj.snapshots);
    rep.artifacts.push_back("snapshots.csv");
  }
  double worst_bound = -1e300;
  const double u0max = u0.max();
  for (const auto& s : traj.snapshots) worst_bound = std::max(worst_bound, s.max() - (u0max + cfg.params.lambda * s.time));
  rep.tolerances["positivity"] = traj.positivity_tolerance;
  rep.tolerances["upper_bound"] = 1e-6;
  rep.results = {{"dt", dt},
                 {"snapshots", traj.snapshots.size()},
                 {"min_value", traj.min_value},
                 {"final_max", traj.snapshots.back().max()},
                 {"final_min", traj.snapshots.back().min()}};
  rep.check("positivity", traj.positivity_ok, traj.min_value);
  rep.check("upper_a_priori_bound", worst_bound <= 1e-6, worst_bound);
}

void run_picard(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  const auto& p = *cfg.potential;
  const auto u0 = cfg.initial->build(*cfg.grid);
  const double b = beta(p);
  const auto eq = equilibria(cfg.params, b);
  if (!eq.has_roots()) throw Error(ErrorKind::configuration, "meso_solver", "picard-run needs lambda <= m/(beta e)");
  const double c = cfg.run.c > 0.0 ? cfg.run.c : std::max(u0.max(), eq.kappa1);
  const auto res = solve_picard(cfg.params, p, u0, c, cfg.run.tol, cfg.run.t_end, cfg.run.nodes);
  const double diff = picard_mol_difference(cfg.params, p, u0, res);
  const double T = res.window;
  const double lhs = cfg.params.lambda * b * cfg.params.m * T * T / 2.0 + c * b * cfg.params.m * T;
  std::vector<DensityField> snaps;
  for (std::size_t k = 0; k < res.solution.nodes(); k += std::max<std::size_t>(1, res.solution.nodes() / 50))
    snaps.push_back(res.solution.snapshot(k));
  snaps.push_back(res.solution.snapshot(res.solution.nodes() - 1));
  io::write_snapshots_csv(out / "picard_snapshots.csv", snaps);
  rep.artifacts.push_back("picard_snapshots.csv");
  rep.tolerances = {{"iteration_tol", cfg.run.tol}, {"mol_difference", 1e-4}, {"contraction_ratio", 0.6},
                    {"window_condition", 0.5}};
  rep.results = {{"c", c},
                 {"window", T},
                 {"window_condition_lhs", lhs},
                 {"iterations", res.iterations},
                 {"window_ratios", res.window_ratios},
                 {"worst_ratio", res.worst_ratio},
                 {"mol_sup_difference", diff}};
  rep.check("window_condition", lhs <= 0.5 * (1.0 + 1e-12), lhs);
  rep.check("contraction_ratio", res.worst_ratio <= 0.6, res.worst_ratio);
  rep.check("mol_agreement", diff < 1e-4, diff);
}

void run_bounded(const ExperimentConfig& cfg, ExperimentReport& rep) {
  const auto u0 = cfg.initial->build(*cfg.grid);
  const auto r = check_bounded_regime(cfg.params, *cfg.potential, u0, cfg.run.t_end, cfg.run.dt);
  rep.results = to_json(r);
  rep.tolerances["bound"] = r.tolerance;
  rep.check("bounded_by_kappa2", r.max_value <= r.kappa2 + r.tolerance, r.max_value);
  if (r.interval_variant)
    rep.check("invariant_interval", r.min_value >= r.kappa1 - r.tolerance && r.max_value <= r.c + r.tolerance,
              {{"min", r.min_value}, {"max", r.max_value}, {"c", r.c}});
  rep.check("positivity", r.min_value >= -1e-8, r.min_value);
}

void run_comparison(const ExperimentConfig& cfg, ExperimentReport& rep) {
  const auto low = cfg.initial->build(*cfg.grid);
  const auto high = cfg.run.high->build(*cfg.grid);
  const auto r = check_comparison(cfg.params, *cfg.potential, low, high, cfg.run.t_end, cfg.run.dt);
  rep.results = to_json(r);
  rep.tolerances["order"] = r.tolerance;
  rep.check("ordered", r.pass, r.max_violation);
}

void run_stability(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out, std::uint64_t seed) {
  const auto r = check_stability(cfg.params, *cfg.potential, *cfg.grid, cfg.run.amplitude, seed,
                                 cfg.run.t_end > 0.0 ? cfg.run.t_end : 0.0);
  io::CsvWriter w(out / "deviation.csv", {"t", "deviation"});
  for (const auto& [t, d] : r.history) w.row({t, d});
  rep.artifacts.push_back("deviation.csv");
  rep.results = to_json(r);
  rep.tolerances = {{"max_growth_factor", 2.0}, {"final_fraction", 0.1}};
  rep.check("bounded_by_twice_initial", r.bounded, r.max_deviation);
  rep.check("decays_below_ten_percent", r.decayed, r.final_deviation);
}

struct CertificateSetup {
  RegionSupport region;
  double phiA = 0.0;
  double b = 0.0;
  AggregationCertificate cert;
};

CertificateSetup certificate_for(const ExperimentConfig& cfg) {
  CertificateSetup s;
  s.region = RegionSupport::interval(cfg.run.region[0], cfg.run.region[1]);
  s.phiA = phi_A(*cfg.potential, s.region);
  if (cfg.run.b > 0.0) {
    s.b = cfg.run.b;
  } else {
    const double ref = cfg.run.b_reference == "b_hat" ? b_hat(cfg.params.lam_over_m(), s.phiA) : bhat_front(cfg.params);
    s.b = cfg.run.b_factor * ref;
  }
  s.cert = make_certificate(cfg.params, s.phiA, s.region, s.b, cfg.run.kappa);
  return s;
}

void run_aggregation(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  const auto setup = certificate_for(cfg);
  const auto& cert = setup.cert;
  rep.results["certificate"] = to_json(cert, cfg.params);
  if (!cert.valid) {
    std::string why;
    for (const auto& v : cert.violations) why += (why.empty() ? "" : "; ") + v;
    throw Error(ErrorKind::configuration, "equilibria", "aggregation certificate is invalid: " + why);
  }
  const auto u0 = cfg.initial->build(*cfg.grid);
  FrontOptions fo;
  fo.report_every = cfg.run.report_every;
  fo.dt = cfg.run.dt;
  fo.stop_when_crossed = false;
  fo.stop_at_wrap_guard = false;
  const auto tr = front_trace(cfg.params, *cfg.potential, u0, cert, cfg.run.probes, cfg.run.t_end, fo);
  if (!tr.probes.empty()) {
    tr.write_csv(out / "front.csv");
    rep.artifacts.push_back("front.csv");
  }
  const double lam = cfg.params.lambda, kappa = cert.kappa;
  rep.results["trace"] = tr.to_json();
  rep.tolerances = {{"gr_chain_scaled", 1e-6}};
  rep.check("udot_above_lambda_over_kappa", tr.udot_min_A > lam / kappa, tr.udot_min_A);
  rep.check("udot_at_most_lambda", tr.udot_max_A <= lam, tr.udot_max_A);
  rep.check("udot_at_least_v", tr.udot_min_A >= cert.v - 1e-9, {{"udot_min", tr.udot_min_A}, {"v", cert.v}});
  rep.check("growth_chain", tr.gr_worst_scaled >= -1e-6, tr.gr_worst_scaled);
}

void run_front_fit(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  const auto setup = certificate_for(cfg);
  const auto& cert = setup.cert;
  rep.results["certificate"] = to_json(cert, cfg.params);
  if (!cert.valid) throw Error(ErrorKind::configuration, "equilibria", "aggregation certificate is invalid");
  const double a = cfg.run.region[1];
  if (std::abs(cfg.run.region[0] + a) > 1e-12)
    throw Error(ErrorKind::configuration, "aggregation_analysis", "front-fit needs a symmetric region [-a, a]");
  std::vector<double> probes = cfg.run.probes;
  if (probes.empty())
    for (int k = 1; k <= 12; ++k) probes.push_back(a + k);
  std::vector<int> resolutions = cfg.run.resolutions;
  if (resolutions.empty()) resolutions = {cfg.grid->n, 2 * cfg.grid->n};

  std::vector<double> coeffs;
  json fits = json::array();
  bool bound_ok = true;
  for (int n : resolutions) {
    DomainGrid g = *cfg.grid;
    g.n = n;
    g.validate_for(*cfg.potential);
    DensityField u0(g);
    for (std::size_t i = 0; i < g.size(); ++i)
      if (setup.region.contains(g.node(i))) u0.values[i] = cfg.run.u0_factor * setup.b;
    FrontOptions fo;
    fo.report_every = cfg.run.report_every;
    fo.dt = cfg.run.dt;
    const auto tr = front_trace(cfg.params, *cfg.potential, u0, cert, probes, cfg.run.t_end, fo);
    FrontPredictor pred(cfg.params, setup.b, a);
    const auto fit = fit_front(tr, pred);
    tr.write_csv(out / ("front_n" + std::to_string(n) + ".csv"));
    rep.artifacts.push_back("front_n" + std::to_string(n) + ".csv");
    fits.push_back({{"n", n}, {"trace", tr.to_json()}, {"fit", fit.to_json()}});
    coeffs.push_back(fit.A);
    bound_ok = bound_ok && fit.upper_bound_holds;
  }
  rep.results["fits"] = fits;
  rep.tolerances = {{"upper_bound_factor", 1.05}, {"coefficient_stability", 0.2}};
  rep.check("front_upper_bound", bound_ok);
  const bool positive = std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c > 0.0; });
  rep.check("fit_coefficient_positive", positive, coeffs);
  bool stable = coeffs.size() >= 2;
  for (std::size_t i = 1; i < coeffs.size(); ++i)
    stable = stable && std::abs(coeffs[i] - coeffs[0]) <= 0.2 * std::abs(coeffs[0]);
  rep.check("fit_coefficient_stable", stable, coeffs);
}

void run_recurrence(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out) {
  const double d0 = cfg.run.d0 > 0.0 ? cfg.run.d0 : 4.0 * cfg.run.c0;
  const auto seq = recurrence(cfg.params, d0, cfg.run.K);
  seq.write_csv(out / "recurrence.csv");
  rep.artifacts.push_back("recurrence.csv");
  const auto forms = compare_forms(cfg.params, d0, cfg.run.K);
  bool increasing = true, positive = true;
  for (int k = 1; k <= seq.K(); ++k) {
    increasing = increasing && seq.d[static_cast<std::size_t>(k)] > seq.d[static_cast<std::size_t>(k - 1)];
    positive = positive && seq.t[static_cast<std::size_t>(k)] > 0.0;
  }
  rep.results = {{"sequence", seq.to_json()},
                 {"bhat_front", bhat_front(cfg.params)},
                 {"forms", {{"step_discrepancy", forms.step_discrepancy}, {"chain_discrepancy", forms.chain_discrepancy}}}};
  rep.tolerances = {{"residual", 1e-10}, {"forms", 1e-10}, {"asymptotic", "0.05 ln K"}};
  rep.check("residual", seq.max_residual < 1e-10, seq.max_residual);
  rep.check("forms_agree", forms.step_discrepancy < 1e-10, forms.step_discrepancy);
  rep.check("d_increasing", increasing);
  rep.check("t_positive", positive);
  if (seq.K() >= 100) {
    const auto ac = asymptotic_check(seq);
    rep.results["asymptotic"] = ac.to_json();
    rep.check("asymptotic_decay", ac.decays, {{"e_K/4", ac.e_quarter}, {"e_K/2", ac.e_half}, {"e_K", ac.e_K}});
    rep.check("asymptotic_small", ac.small, {{"e_K", ac.e_K}, {"tolerance", ac.tolerance}});
  }
}

void run_micro(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out, const RunOptions& opts,
               std::uint64_t seed) {
  const auto& p = *cfg.potential;
  const auto u0 = cfg.initial->build(*cfg.grid);
  std::vector<double> times = cfg.run.snapshot_times;
  if (times.empty()) times.push_back(cfg.run.t_end);
  std::sort(times.begin(), times.end());
  const int R = cfg.run.replicas;
  const std::size_t cap = cfg.run.cap > 0 ? cfg.run.cap : default_population_cap;
  std::vector<RunResult> results(static_cast<std::size_t>(R));
  std::vector<double> audits(static_cast<std::size_t>(R), 0.0);
  std::vector<int> capped(static_cast<std::size_t>(R), 0);
  std::exception_ptr failure;
  const int nt = opts.threads > 0 ? opts.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nt)
  for (int r = 0; r < R; ++r) {
    try {
      auto st = init_poisson(cfg.params, p, u0, replica_seed(seed, static_cast<std::uint64_t>(r)), cap);
      try {
        results[static_cast<std::size_t>(r)] = run(st, cfg.run.t_end, times);
      } catch (const CapacityExceeded& e) {
        results[static_cast<std::size_t>(r)] = e.partial();
        capped[static_cast<std::size_t>(r)] = 1;
      }
      if (st.config().size() <= 20000) audits[static_cast<std::size_t>(r)] = st.audit(1e300);
    } catch (...) {
#pragma omp critical(aggrokin_micro_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  const int dim = p.dim();
  {
    std::vector<std::string> header{"replica", "t", "x1"};
    if (dim == 2) header.push_back("x2");
    io::CsvWriter w(out / "snapshots.csv", header);
    for (int r = 0; r < R; ++r)
      for (const auto& s : results[static_cast<std::size_t>(r)].snapshots)
        for (const auto& x : s.points) {
          if (dim == 1)
            w.row({static_cast<double>(r), s.t, x[0]});
          else
            w.row({static_cast<double>(r), s.t, x[0], x[1]});
        }
  }
  io::write_json(out / "manifest.json", {{"params", cfg.params.to_json()},
                                         {"seed", seed},
                                         {"replica_seeds", "seed + replica"},
                                         {"potential", p.to_json()},
                                         {"epsilon", cfg.params.epsilon},
                                         {"L", cfg.grid->L},
                                         {"snapshot_times", times},
                                         {"replicas", R}});
  rep.artifacts.push_back("snapshots.csv");
  rep.artifacts.push_back("manifest.json");

  // Estimates at the last snapshot time, from replicas that reached it.
  ReplicaSet last;
  for (const auto& res : results)
    if (res.snapshots.size() == times.size()) last.push_back(res.snapshots.back().points);
  json est = nullptr;
  if (last.size() >= 8) {
    const auto dens = estimate_density(last, cfg.params.epsilon, cfg.grid->L, dim, cfg.run.bins);
    const double rmax = std::min(2.5, 0.5 * cfg.grid->L);
    const auto pairs = estimate_pair_correlation(last, cfg.params.epsilon, cfg.grid->L, dim, rmax, 10);
    dens.write_csv(out / "density.csv");
    pairs.write_csv(out / "pairs.csv");
    rep.artifacts.push_back("density.csv");
    rep.artifacts.push_back("pairs.csv");
    est = {{"density", to_json(dens)}, {"pairs", to_json(pairs)}};
  }
  std::uint64_t events = 0;
  for (const auto& r : results) events += r.events;
  double worst_audit = 0.0;
  for (double a : audits) worst_audit = std::max(worst_audit, a);
  int n_capped = 0;
  for (int c : capped) n_capped += c;
  rep.results = {{"events", events}, {"capped_replicas", n_capped}, {"worst_audit", worst_audit}, {"estimates", est}};
  rep.tolerances = {{"audit", 1e-6}};
  rep.check("energy_cache_audit", worst_audit <= 1e-6, worst_audit);
  rep.check("population_cap_not_hit", n_capped == 0, n_capped);
}

void run_compare(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out, const RunOptions& opts,
                 std::uint64_t seed) {
  CompareOptions co;
  co.eps_list = cfg.run.eps_list;
  co.t_end = cfg.run.t_end;
  co.replicas = cfg.run.replicas;
  co.seed = seed;
  co.density_bins = cfg.run.bins;
  co.pair_r_max = cfg.run.pair_r_max;
  co.pair_bins = cfg.run.pair_bins;
  co.threads = opts.threads;
  const auto cr = micro_meso_compare(cfg.params, *cfg.potential, cfg.initial->build(*cfg.grid), co);
  for (const auto& r : cr.runs) {
    const auto tag = eps_tag(r.epsilon);
    io::CsvWriter w(out / ("density_eps" + tag + ".csv"), {"bin_center", "value", "stderr", "meso", "z"});
    const auto c = r.density.centers();
    for (std::size_t i = 0; i < c.size(); ++i)
      w.row({c[i], r.density.k1[i], r.density.stderr_[i], r.meso[i], r.z[i]});
    r.pairs.write_csv(out / ("pairs_eps" + tag + ".csv"));
    rep.artifacts.push_back("density_eps" + tag + ".csv");
    rep.artifacts.push_back("pairs_eps" + tag + ".csv");
  }
  rep.results = cr.to_json();
  rep.tolerances = {{"z", co.z_tolerance}};
  const auto smallest = std::min_element(cr.runs.begin(), cr.runs.end(),
                                         [](const auto& a, const auto& b) { return a.epsilon < b.epsilon; });
  rep.check("density_within_3_stderr", cr.density_pass, smallest->max_z);
  rep.check("discrepancy_nonincreasing", cr.monotone_pass);
  rep.check("chaos_ratio_within_3_stderr", cr.chaos_pass, smallest->max_chaos_z);
}

void run_fluctuation(const ExperimentConfig& cfg, ExperimentReport& rep, const fs::path& out, const RunOptions& opts,
                     std::uint64_t seed) {
  const auto region = RegionSupport::interval(cfg.run.region[0], cfg.run.region[1]);
  GrowthOptions go;
  go.L = cfg.run.L;
  go.t_end = cfg.run.t_end;
  go.samples = cfg.run.samples;
  go.replicas = cfg.run.replicas;
  go.seed = seed;
  if (cfg.run.cap > 0) go.cap = cfg.run.cap;
  go.threads = opts.threads;
  const auto gr = fluctuation_growth_demo(cfg.params, *cfg.potential, region, cfg.run.initial_count, go);
  io::CsvWriter w(out / "growth.csv", {"t", "seeded_mean", "seeded_stderr", "baseline_mean", "baseline_stderr"});
  for (std::size_t k = 0; k < gr.seeded.times.size(); ++k)
    w.row({gr.seeded.times[k], gr.seeded.mean[k], gr.seeded.stderr_[k], gr.baseline.mean[k], gr.baseline.stderr_[k]});
  rep.artifacts.push_back("growth.csv");
  // A demonstration: the outcome is reported, not asserted.
  rep.results = gr.to_json();
}

void run_horizon(const ExperimentConfig& cfg, ExperimentReport& rep) {
  const double b = cfg.beta_value();
  const double cphi = cfg.run.c_phi ? *cfg.run.c_phi : c_phi(*cfg.potential);
  const auto h = ovsjannikov_horizon(cfg.params, cphi, b, cfg.run.C0, cfg.run.C);
  rep.results = {{"T", h.T}, {"T1", h.T1}, {"bound", h.bound}, {"c_phi", cphi}, {"beta", b},
                 {"C0", cfg.run.C0}, {"C", cfg.run.C}};
  rep.check("T_within_bound", h.bound_holds, {{"T", h.T}, {"bound", h.bound}});
  if (b >= cphi) rep.check("T1_at_most_T", h.T1 <= h.T);
}

}  // namespace

bool ExperimentReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

void ExperimentReport::check(std::string name, bool ok, nlohmann::json detail) {
  checks.push_back({std::move(name), ok, std::move(detail)});
}

double picard_mol_difference(const ModelParams& params, const Potential& p, const DensityField& u0,
                             const PicardResult& picard, double max_dt) {
  const auto& sol = picard.solution;
  if (sol.nodes() == 0) return 0.0;
  MolIntegrator integ(params, p, u0.grid);
  DensityField u = u0;
  double worst = kernels::max_abs_diff(u.values, sol.values[0]);
  for (std::size_t k = 1; k < sol.nodes(); ++k) {
    const double span = sol.times[k] - sol.times[k - 1];
    const int sub = std::max(1, static_cast<int>(std::ceil(span / max_dt - 1e-9)));
    for (int s = 0; s < sub; ++s) integ.step(u, span / sub);
    worst = std::max(worst, kernels::max_abs_diff(u.values, sol.values[k]));
  }
  return worst;
}

nlohmann::json input_hashes(const ExperimentConfig& cfg) {
  json files = json::object();
  std::string listing = io::git_blob_sha1(cfg.text) + " config\n";
  for (const auto& f : cfg.inputs) {
    const auto h = io::git_blob_sha1(io::read_text(f));
    files[f.string()] = h;
    listing += h + " " + f.string() + "\n";
  }
  return {{"config_hash", io::sha256_hex(cfg.raw.dump())},
          {"config_blob", io::git_blob_sha1(cfg.text)},
          {"input_files", files},
          {"input_hash", io::git_blob_sha1(listing)}};
}

ExperimentReport execute(const ExperimentConfig& cfg, const RunOptions& opts) {
  ExperimentReport rep;
  rep.experiment = to_string(cfg.experiment);
  const std::uint64_t seed = opts.seed.value_or(cfg.seed);
  const fs::path& out = opts.out_dir;
  fs::create_directories(out);
  switch (cfg.experiment) {
    case Experiment::equilibria: run_equilibria(cfg, rep); break;
    case Experiment::meso_run: run_meso(cfg, rep, out); break;
    case Experiment::picard_run: run_picard(cfg, rep, out); break;
    case Experiment::bounded_check: run_bounded(cfg, rep); break;
    case Experiment::comparison_check: run_comparison(cfg, rep); break;
    case Experiment::stability_check: run_stability(cfg, rep, out, seed); break;
    case Experiment::aggregation_run: run_aggregation(cfg, rep, out); break;
    case Experiment::front_fit: run_front_fit(cfg, rep, out); break;
    case Experiment::recurrence: run_recurrence(cfg, rep, out); break;
    case Experiment::micro_run: run_micro(cfg, rep, out, opts, seed); break;
    case Experiment::micro_meso_compare: run_compare(cfg, rep, out, opts, seed); break;
    case Experiment::fluctuation_demo: run_fluctuation(cfg, rep, out, opts, seed); break;
    case Experiment::horizon: run_horizon(cfg, rep); break;
  }
  return rep;
}

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opts) {
  json report = input_hashes(cfg);
  report["experiment"] = to_string(cfg.experiment);
  report["seed"] = opts.seed.value_or(cfg.seed);
  report["config"] = cfg.raw;
  int status = 0;
  try {
    const auto rep = execute(cfg, opts);
    json checks = json::array();
    for (const auto& c : rep.checks) checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    report["tolerances"] = rep.tolerances;
    report["checks"] = checks;
    report["results"] = rep.results;
    report["artifacts"] = rep.artifacts;
    report["pass"] = rep.pass();
    status = rep.pass() ? 0 : 1;
  } catch (const Error& e) {
    report["error"] = {{"kind", std::string(to_string(e.kind()))}, {"module", e.module()}, {"message", e.what()}};
    report["pass"] = false;
    status = 2;
    std::cerr << e.what() << "\n";
  }
  io::write_json(opts.out_dir / "report.json", report);
  return status;
}

}  // namespace aggrokin
