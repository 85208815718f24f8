#include "aggrokin/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aggrokin/errors.hpp"
#include "aggrokin/io.hpp"
#include "aggrokin/lambert_w.hpp"

namespace aggrokin {

namespace {

constexpr double step_length = 0.25;

[[noreturn]] void regime_error(const std::string& what) { throw Error(ErrorKind::regime, "aggregation_analysis", what); }

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

double step_root(double mu, double c_prev) {
  // ln d - d/4 = ln(4) + mu - c_prev, larger root d > 4.
  const double r = std::log(4.0) + mu - c_prev;
  auto g = [r](double d) { return std::log(d) - 0.25 * d - r; };
  double lo = 4.0, hi = 8.0;
  while (g(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 300 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  double d = 0.5 * (lo + hi);
  const double dg = 1.0 / d - 0.25;
  if (dg != 0.0) {
    const double polished = d - g(d) / dg;
    if (polished >= lo && polished <= hi) d = polished;
  }
  return 0.25 * d;
}

double step_log(double mu, double c_prev) {
  const double rhs = c_prev - mu;
  double c = rhs + std::log(std::max(rhs, 1.0)) + 1.0;
  for (int i = 0; i < 100; ++i) {
    const double f = c - std::log(c) - rhs;
    const double dc = f / (1.0 - 1.0 / c);
    c -= dc;
    if (c <= 1.0) c = 1.0 + 1e-8;
    if (std::abs(dc) <= 4.0 * std::numeric_limits<double>::epsilon() * c) break;
  }
  return c;
}

}  // namespace

double bhat_front(const ModelParams& params) {
  params.validate();
  const double y = params.lambda / (16.0 * params.m);
  if (y <= std::exp(-1.0)) return 4.0 * p_root_large(y);
  return std::max(4.0, 4.0 * std::log(y * std::numbers::e) + 1e-6);
}

double recurrence_step(double mu, double c_prev, RecurrenceForm form) {
  const double s = mu - c_prev;
  if (!(s <= -1.0))
    regime_error("recurrence step undefined: mu - c_{k-1} = " + io::fmt(s) + " > -1 (argument outside W_{-1} domain)");
  switch (form) {
    case RecurrenceForm::root: return step_root(mu, c_prev);
    case RecurrenceForm::log: return step_log(mu, c_prev);
    case RecurrenceForm::lambert: return -lambert_wm1_neg_exp(s);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double RecurrenceSequence::asymptote(int k) const {
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const double kk = k;
  return kk * std::log(kk) + kk * std::log(std::log(kk)) - (mu + 1.0) * kk;
}

RecurrenceSequence recurrence(const ModelParams& params, double d0, int K, RecurrenceForm form) {
  params.validate();
  if (K < 1) throw Error(ErrorKind::domain, "aggregation_analysis", "recurrence needs K >= 1");
  const double floor = bhat_front(params);
  if (!(d0 > floor))
    throw Error(ErrorKind::domain, "aggregation_analysis",
                "recurrence needs d0 > b_hat = " + io::fmt(floor) + ", got " + io::fmt(d0));
  RecurrenceSequence seq;
  seq.mu = std::log(params.lambda / (16.0 * params.m));
  seq.lambda = params.lambda;
  seq.c.reserve(static_cast<std::size_t>(K) + 1);
  seq.c.push_back(d0 / 4.0);
  for (int k = 1; k <= K; ++k) {
    const double prev = seq.c.back();
    const double ck = recurrence_step(seq.mu, prev, form);
    seq.max_residual = std::max(seq.max_residual, std::abs(ck - std::log(ck) + seq.mu - prev) / std::max(1.0, ck));
    seq.c.push_back(ck);
  }
  seq.d.resize(seq.c.size());
  seq.t.assign(seq.c.size(), 0.0);
  for (std::size_t k = 0; k < seq.c.size(); ++k) {
    seq.d[k] = 4.0 * seq.c[k];
    if (k > 0) seq.t[k] = 2.0 / params.lambda * (seq.d[k] - seq.d[k - 1]);
  }
  return seq;
}

FormAgreement compare_forms(const ModelParams& params, double d0, int K) {
  const auto lw = recurrence(params, d0, K, RecurrenceForm::lambert);
  const auto lg = recurrence(params, d0, K, RecurrenceForm::log);
  const auto rt = recurrence(params, d0, K, RecurrenceForm::root);
  FormAgreement out;
  for (int k = 1; k <= K; ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double ref = lw.c[i];
    out.chain_discrepancy = std::max({out.chain_discrepancy, rel(lg.c[i], ref), rel(rt.c[i], ref)});
    const double a = recurrence_step(lw.mu, lw.c[i - 1], RecurrenceForm::log);
    const double b = recurrence_step(lw.mu, lw.c[i - 1], RecurrenceForm::root);
    out.step_discrepancy = std::max({out.step_discrepancy, rel(a, ref), rel(b, ref)});
  }
  return out;
}

void RecurrenceSequence::write_csv(const std::filesystem::path& path) const {
  io::CsvWriter w(path, {"k", "d_k", "c_k", "t_k", "asymptote", "error"});
  for (int k = 0; k <= K(); ++k) {
    const auto i = static_cast<std::size_t>(k);
    const double a = asymptote(k);
    w.row({static_cast<double>(k), d[i], c[i], t[i], a, c[i] - a});
  }
}

nlohmann::json RecurrenceSequence::to_json() const {
  return {{"mu", mu}, {"lambda", lambda}, {"K", K()}, {"d0", d.front()}, {"d_K", d.back()},
          {"c_K", c.back()}, {"max_residual", max_residual}};
}

AsymptoticReport asymptotic_check(const RecurrenceSequence& seq) {
  const int K = seq.K();
  if (K < 100) throw Error(ErrorKind::insufficient_data, "aggregation_analysis", "asymptotic check needs K >= 100");
  AsymptoticReport r;
  r.K = K;
  r.e_quarter = seq.error(K / 4);
  r.e_half = seq.error(K / 2);
  r.e_K = seq.error(K);
  r.tolerance = 0.05 * std::log(static_cast<double>(K));
  r.leading_ratio = seq.c.back() / (K * std::log(static_cast<double>(K)));
  r.decays = std::abs(r.e_K) < std::abs(r.e_half) && std::abs(r.e_half) < std::abs(r.e_quarter);
  r.small = std::abs(r.e_K) < r.tolerance;
  r.last_quartile_monotone = true;
  for (int k = 3 * K / 4 + 1; k <= K; ++k)
    if (std::abs(seq.error(k)) > std::abs(seq.error(k - 1))) {
      r.last_quartile_monotone = false;
      break;
    }
  r.pass = r.decays && r.small;
  return r;
}

nlohmann::json AsymptoticReport::to_json() const {
  return {{"K", K},
          {"e_K_over_4", e_quarter},
          {"e_K_over_2", e_half},
          {"e_K", e_K},
          {"tolerance", tolerance},
          {"leading_ratio", leading_ratio},
          {"decays", decays},
          {"within_tolerance", small},
          {"last_quartile_monotone", last_quartile_monotone},
          {"pass", pass}};
}

FrontPredictor::FrontPredictor(const ModelParams& params, double d0, double a)
    : seq_(recurrence(params, d0, 1)), a_(a) {
  if (!(a >= 0.0)) throw Error(ErrorKind::domain, "aggregation_analysis", "region half-width must be nonnegative");
}

int FrontPredictor::steps(double x) const {
  const double over = std::abs(x) - a_;
  if (over <= 0.0) return 0;
  return static_cast<int>(std::ceil(over / step_length - 1e-12));
}

void FrontPredictor::extend(int k) {
  while (seq_.K() < k) {
    const double ck = recurrence_step(seq_.mu, seq_.c.back(), RecurrenceForm::lambert);
    seq_.c.push_back(ck);
    seq_.d.push_back(4.0 * ck);
    seq_.t.push_back(2.0 / seq_.lambda * (seq_.d.back() - seq_.d[seq_.d.size() - 2]));
  }
}

double FrontPredictor::operator()(double x) {
  const int k = steps(x);
  extend(k);
  return 2.0 / seq_.lambda * (seq_.d[static_cast<std::size_t>(k)] - seq_.d.front());
}

double predicted_front_time(const ModelParams& params, double d0, double a, double x) {
  FrontPredictor f(params, d0, a);
  return f(x);
}

FrontFitReport fit_front(const FrontTrace& trace, FrontPredictor& predicted) {
  if (trace.probes.size() < 4)
    throw Error(ErrorKind::insufficient_data, "aggregation_analysis", "front fit needs at least 4 probes");
  FrontFitReport r;
  r.upper_bound_holds = true;
  double s11 = 0, s12 = 0, s22 = 0, y1 = 0, y2 = 0;
  for (std::size_t k = 0; k < trace.probes.size(); ++k) {
    const double x = trace.probes[k], t = trace.t_level[k], p = predicted(x);
    r.x.push_back(x);
    r.measured.push_back(t);
    r.predicted.push_back(p);
    if (std::isnan(t)) {
      r.upper_bound_holds = false;
      r.worst_ratio = std::numeric_limits<double>::infinity();
      continue;
    }
    if (p > 0.0) r.worst_ratio = std::max(r.worst_ratio, t / p);
    if (t > p * (1.0 + r.tolerance)) r.upper_bound_holds = false;
    const double ax = std::abs(x), f1 = ax * std::log(ax), f2 = ax;
    s11 += f1 * f1;
    s12 += f1 * f2;
    s22 += f2 * f2;
    y1 += f1 * t;
    y2 += f2 * t;
  }
  const double det = s11 * s22 - s12 * s12;
  if (det != 0.0) {
    r.A = (y1 * s22 - y2 * s12) / det;
    r.B = (s11 * y2 - s12 * y1) / det;
    double ss = 0.0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < r.x.size(); ++k) {
      if (std::isnan(r.measured[k])) continue;
      const double ax = std::abs(r.x[k]);
      const double e = r.measured[k] - (r.A * ax * std::log(ax) + r.B * ax);
      ss += e * e;
      ++used;
    }
    r.rms_residual = used ? std::sqrt(ss / static_cast<double>(used)) : 0.0;
  }
  return r;
}

nlohmann::json FrontFitReport::to_json() const {
  nlohmann::json m = nlohmann::json::array();
  for (double t : measured) m.push_back(std::isnan(t) ? nlohmann::json(nullptr) : nlohmann::json(t));
  return {{"x", x},
          {"measured", m},
          {"predicted", predicted},
          {"tolerance", tolerance},
          {"worst_ratio", std::isfinite(worst_ratio) ? nlohmann::json(worst_ratio) : nlohmann::json(nullptr)},
          {"upper_bound_holds", upper_bound_holds},
          {"A", A},
          {"B", B},
          {"rms_residual", rms_residual}};
}

double theta_x_inverse(const ModelParams& params, double s_x, double theta) {
  params.validate();
  if (!(s_x > 0.0)) throw Error(ErrorKind::domain, "aggregation_analysis", "s_x must be positive");
  const double z = s_x * params.lam_over_m() * theta;
  if (!(z > 0.0) || z > std::exp(-1.0))
    throw Error(ErrorKind::certificate_domain, "aggregation_analysis",
                "theta outside the range of Theta_x: s_x (lambda/m) theta = " + io::fmt(z) + " must lie in (0, 1/e]");
  return -lambert_w(Branch::negative, -z) / s_x;
}

double offregion_front_time(const ModelParams& params, const AggregationCertificate& cert, double s_x) {
  if (!cert.valid)
    throw Error(ErrorKind::configuration, "aggregation_analysis", "off-region prediction needs a valid certificate");
  const double bx = theta_x_inverse(params, s_x, cert.theta_of_b);
  return (bx - cert.b) / cert.v;
}

}  // namespace aggrokin
