#include "aggrokin/equilibria.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "aggrokin/errors.hpp"

namespace aggrokin {

namespace {

const double inv_e = std::exp(-1.0);

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorKind::domain, "equilibria", what); }

double p(double r) { return r * std::exp(-r); }

double bisect_p(double y, double lo, double hi, bool increasing) {
  // p is increasing on (0, 1] and decreasing on [1, inf).
  for (int i = 0; i < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++i) {
    const double mid = 0.5 * (lo + hi);
    const bool below = p(mid) < y;
    if (below == increasing)
      lo = mid;
    else
      hi = mid;
  }
  double r = 0.5 * (lo + hi);
  const double dp = std::exp(-r) * (1.0 - r);
  if (dp != 0.0) {
    const double polished = r - (p(r) - y) / dp;
    if (polished >= lo && polished <= hi) r = polished;
  }
  return r;
}

}  // namespace

void ModelParams::validate() const {
  if (!(m > 0.0) || !std::isfinite(m)) domain_error("mortality m must be positive");
  if (!(lambda > 0.0) || !std::isfinite(lambda)) domain_error("birth intensity lambda must be positive");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) domain_error("epsilon must lie in (0, 1]");
}

nlohmann::json ModelParams::to_json() const { return {{"m", m}, {"lambda", lambda}, {"epsilon", epsilon}}; }

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
  }
  return "unknown";
}

EquilibriumPair equilibria(const ModelParams& params, double beta) {
  params.validate();
  if (!(beta > 0.0)) domain_error("equilibria need beta > 0");
  const double z = params.lambda * beta / params.m;
  EquilibriumPair eq;
  auto residual = [&](double k) { return std::abs(params.lambda - params.m * k * std::exp(-beta * k)); };
  if (z > inv_e) {
    eq.regime = Regime::supercritical;
    return eq;
  }
  if (z == inv_e) {
    eq.regime = Regime::critical;
    eq.kappa1 = eq.kappa2 = 1.0 / beta;
  } else {
    eq.regime = Regime::subcritical;
    eq.kappa1 = -lambert_w(Branch::principal, -z) / beta;
    eq.kappa2 = -lambert_w(Branch::negative, -z) / beta;
  }
  eq.residual1 = residual(eq.kappa1);
  eq.residual2 = residual(eq.kappa2);
  return eq;
}

nlohmann::json to_json(const EquilibriumPair& eq, const ModelParams& params, double beta) {
  return {{"params", params.to_json()},     {"beta", beta},
          {"regime", to_string(eq.regime)}, {"threshold", params.m / (beta * std::numbers::e)},
          {"kappa1", eq.kappa1},            {"kappa2", eq.kappa2},
          {"residual1", eq.residual1},      {"residual2", eq.residual2}};
}

double p_root_small(double y) {
  if (!(y > 0.0) || y > inv_e) domain_error("r e^{-r} = y needs 0 < y <= 1/e");
  return bisect_p(y, 0.0, 1.0, true);
}

double p_root_large(double y) {
  if (!(y > 0.0) || y > inv_e) domain_error("r e^{-r} = y needs 0 < y <= 1/e");
  double hi = 51.0;
  while (p(hi) > y) hi = 1.0 + 2.0 * (hi - 1.0);
  return bisect_p(y, 1.0, hi, false);
}

double b_of_theta(double lam_over_m, double phi_A, double theta) {
  if (!(phi_A > 0.0)) domain_error("phi_A must be positive");
  if (!(theta > 0.0)) domain_error("theta must be positive");
  return p_root_large(phi_A * lam_over_m * theta) / phi_A;
}

double b_hat(double lam_over_m, double phi_A) {
  if (!(phi_A > 0.0)) domain_error("b_hat needs phi_A > 0");
  if (lam_over_m * phi_A / 4.0 <= inv_e) return b_of_theta(lam_over_m, phi_A, 0.25);
  return 1.0 / phi_A;
}

double theta_of_b(double lam_over_m, double phi_A, double b) {
  const double floor = b_hat(lam_over_m, phi_A);
  if (b < floor * (1.0 - 1e-12))
    throw Error(ErrorKind::certificate_domain, "equilibria",
                "Theta(b) needs b >= b_hat = " + std::to_string(floor) + ", got b = " + std::to_string(b));
  return b * std::exp(-phi_A * b) / lam_over_m;
}

double growth_speed(const ModelParams& params, double phi_A, double b, double kappa) {
  return params.lambda - kappa * params.m * b * std::exp(-phi_A * b);
}

AggregationCertificate make_certificate(const ModelParams& params, const Potential& potential,
                                        const RegionSupport& region, double b, double kappa) {
  return make_certificate(params, phi_A(potential, region), region, b, kappa);
}

AggregationCertificate make_certificate(const ModelParams& params, double phiA, const RegionSupport& region,
                                        double b, double kappa) {
  params.validate();
  AggregationCertificate c;
  c.region = region;
  c.phi_A = phiA;
  c.b = b;
  c.kappa = kappa;
  if (!(phiA > 0.0)) {
    c.violations.emplace_back("phi_A > 0");
    return c;
  }
  const double lm = params.lam_over_m();
  c.b_hat = b_hat(lm, phiA);
  c.theta_of_b = b * std::exp(-phiA * b) / lm;
  c.v = growth_speed(params, phiA, b, kappa);
  if (!(b >= c.b_hat)) c.violations.emplace_back("b >= b_hat");
  if (!(kappa > 1.0)) c.violations.emplace_back("kappa > 1");
  if (!(b * std::exp(-phiA * b) < lm * (1.0 / kappa) * (1.0 - 1.0 / kappa)))
    c.violations.emplace_back("b e^{-phi_A b} < (lambda/m) kappa^{-1} (1 - kappa^{-1})");
  c.valid = c.violations.empty();
  return c;
}

nlohmann::json to_json(const AggregationCertificate& c, const ModelParams& params) {
  nlohmann::json region{{"dim", c.region.dim}, {"lo", c.region.lo}, {"hi", c.region.hi}};
  const double bb_residual = c.b * std::exp(-c.phi_A * c.b) -
                             params.lam_over_m() * (1.0 / c.kappa) * (1.0 - 1.0 / c.kappa);
  return {{"params", params.to_json()},
          {"region", region},
          {"phi_A", c.phi_A},
          {"b", c.b},
          {"kappa", c.kappa},
          {"b_hat", c.b_hat},
          {"theta_of_b", c.theta_of_b},
          {"v", c.v},
          {"valid", c.valid},
          {"violations", c.violations},
          {"Bb_margin", bb_residual},
          {"v_identity_residual",
           std::abs(c.v - params.lambda * (1.0 - c.kappa * c.theta_of_b))}};
}

Horizon ovsjannikov_horizon(const ModelParams& params, double cphi, double beta, double C0, double C) {
  params.validate();
  if (!(C0 > 0.0) || !(C >= C0)) domain_error("horizon needs C >= C0 > 0");
  if (!(cphi >= 0.0) || !(beta >= 0.0)) domain_error("horizon constants must be nonnegative");
  auto formula = [&](double exponent_constant) {
    return C0 * (C - C0) / (C * C * (std::exp(C * exponent_constant) + params.lambda / C0));
  };
  Horizon h;
  h.T = formula(cphi);
  h.T1 = formula(beta);
  h.bound = 1.0 / (1.0 + 2.0 * std::sqrt(params.lambda * cphi));
  h.bound_holds = h.T <= h.bound;
  return h;
}

}  // namespace aggrokin
