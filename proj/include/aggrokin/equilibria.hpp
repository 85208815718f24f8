#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "aggrokin/lambert_w.hpp"
#include "aggrokin/potential.hpp"

namespace aggrokin {

/// Mortality m, birth intensity lambda and Vlasov scale epsilon.
struct ModelParams {
  double m = 1.0;
  double lambda = 1.0;
  double epsilon = 1.0;

  double lam_over_m() const noexcept { return lambda / m; }
  void validate() const;
  nlohmann::json to_json() const;
};

enum class Regime { subcritical, critical, supercritical };
std::string to_string(Regime regime);

/// Constant solutions of lambda = m u exp(-beta u).
struct EquilibriumPair {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  Regime regime = Regime::supercritical;
  double residual1 = 0.0;
  double residual2 = 0.0;

  bool has_roots() const noexcept { return regime != Regime::supercritical; }
};

EquilibriumPair equilibria(const ModelParams& params, double beta);
nlohmann::json to_json(const EquilibriumPair& eq, const ModelParams& params, double beta);

/// Roots of r*exp(-r) = y (0 < y <= 1/e) by bracketed bisection to 1e-12 and
/// one Newton polish. `small` is in (0, 1], `large` in [1, inf).
double p_root_small(double y);
double p_root_large(double y);

/// Larger root b of b*exp(-phi_A*b) = (lambda/m) * theta.
double b_of_theta(double lam_over_m, double phi_A, double theta);
/// Minimal admissible certificate level: larger root of b e^{-phi_A b} = lambda/(4m)
/// when lambda*phi_A/(4m) <= 1/e, otherwise 1/phi_A.
double b_hat(double lam_over_m, double phi_A);
/// Theta(b) = (m/lambda) b exp(-phi_A b), defined for b >= b_hat.
double theta_of_b(double lam_over_m, double phi_A, double b);
/// v(b, kappa) = lambda - kappa m b exp(-phi_A b).
double growth_speed(const ModelParams& params, double phi_A, double b, double kappa);

struct AggregationCertificate {
  RegionSupport region;
  double phi_A = 0.0;
  double b = 0.0;
  double kappa = 0.0;
  double b_hat = 0.0;
  double theta_of_b = 0.0;
  double v = 0.0;
  bool valid = false;
  /// Names of the violated clauses; empty iff valid.
  std::vector<std::string> violations;
};

AggregationCertificate make_certificate(const ModelParams& params, const Potential& potential,
                                        const RegionSupport& region, double b, double kappa);
/// Same, with Phi_A supplied by the caller (e.g. measured on a grid).
AggregationCertificate make_certificate(const ModelParams& params, double phi_A, const RegionSupport& region,
                                        double b, double kappa);
nlohmann::json to_json(const AggregationCertificate& cert, const ModelParams& params);

struct Horizon {
  double T = 0.0;
  double T1 = 0.0;
  double bound = 0.0;  ///< (1 + 2 sqrt(lambda C_phi))^{-1}
  bool bound_holds = false;
};

/// Existence horizons T(C0, C) (with C_phi) and T1(C0, C) (with beta) for the
/// correlation-function evolution.
Horizon ovsjannikov_horizon(const ModelParams& params, double c_phi, double beta, double C0, double C);

}  // namespace aggrokin
