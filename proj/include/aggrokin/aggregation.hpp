#pragma once

#include <filesystem>
#include <vector>

#include <json.hpp>

#include "aggrokin/equilibria.hpp"
#include "aggrokin/front.hpp"

namespace aggrokin {

/// Threshold for the front construction with the unit indicator kernel: the
/// larger root of b e^{-b/4} = lambda/(4m) when lambda <= 16m/e, otherwise
/// 4 ln(lambda e / (16 m)) + 1e-6 (the smallest b >= 4 with
/// lambda < (16m/e) e^{b/4}, plus margin).
double bhat_front(const ModelParams& params);

enum class RecurrenceForm {
  root,     ///< bracketed root of ln d - d/4 = ln(lambda/(4m)) - d_{k-1}/4
  log,      ///< Newton on c - ln c = c_{k-1} - mu
  lambert,  ///< c = -W_{-1}(-exp(mu - c_{k-1}))
};

struct RecurrenceSequence {
  double mu = 0.0;  ///< ln(lambda/(16 m))
  double lambda = 1.0;
  std::vector<double> d;  ///< d_0..d_K
  std::vector<double> c;  ///< d_k / 4
  std::vector<double> t;  ///< t_0 = 0, t_k = (2/lambda)(d_k - d_{k-1})
  double max_residual = 0.0;  ///< |c_k - ln c_k + mu - c_{k-1}| / max(1, c_k)

  int K() const noexcept { return static_cast<int>(d.size()) - 1; }
  /// k ln k + k ln ln k - (mu + 1) k; NaN for k < 2.
  double asymptote(int k) const;
  double error(int k) const { return c[static_cast<std::size_t>(k)] - asymptote(k); }

  void write_csv(const std::filesystem::path& path) const;
  nlohmann::json to_json() const;
};

/// One recurrence step from c_prev; throws ErrorKind::regime if the step has no larger root.
double recurrence_step(double mu, double c_prev, RecurrenceForm form);

RecurrenceSequence recurrence(const ModelParams& params, double d0, int K,
                              RecurrenceForm form = RecurrenceForm::lambert);

struct FormAgreement {
  double step_discrepancy = 0.0;   ///< max one-step disagreement from identical inputs, relative to max(1, c)
  double chain_discrepancy = 0.0;  ///< max disagreement of independently iterated sequences, same scale
};
FormAgreement compare_forms(const ModelParams& params, double d0, int K);

struct AsymptoticReport {
  int K = 0;
  double e_quarter = 0.0, e_half = 0.0, e_K = 0.0;
  double tolerance = 0.0;  ///< 0.05 ln K
  double leading_ratio = 0.0;  ///< c_K / (K ln K)
  bool decays = false;
  bool small = false;
  bool last_quartile_monotone = false;
  bool pass = false;
  nlohmann::json to_json() const;
};

AsymptoticReport asymptotic_check(const RecurrenceSequence& seq);

/// Front-time prediction for A = [-a, a]: k(x) = ceil((|x| - a)/(1/4)) steps
/// of the recurrence, t(x) = (2/lambda)(d_{k(x)} - d_0).
class FrontPredictor {
 public:
  FrontPredictor(const ModelParams& params, double d0, double a);

  int steps(double x) const;
  double operator()(double x);
  double a() const noexcept { return a_; }
  double d0() const noexcept { return seq_.d.front(); }

 private:
  void extend(int k);
  RecurrenceSequence seq_;
  double a_;
};

double predicted_front_time(const ModelParams& params, double d0, double a, double x);

struct FrontFitReport {
  std::vector<double> x, measured, predicted;
  double tolerance = 0.05;
  double worst_ratio = 0.0;  ///< max measured / predicted
  bool upper_bound_holds = false;
  double A = 0.0;  ///< coefficient of |x| ln|x|
  double B = 0.0;  ///< coefficient of |x|
  double rms_residual = 0.0;
  nlohmann::json to_json() const;
};

/// Compares measured level-crossing times with the prediction and fits
/// t = A |x| ln|x| + B |x| by least squares. Needs at least 4 probes.
FrontFitReport fit_front(const FrontTrace& trace, FrontPredictor& predicted);

/// Larger root b(x) of b e^{-s_x b} = (lambda/m) theta.
double theta_x_inverse(const ModelParams& params, double s_x, double theta);
/// Off-region front time (b(x) - b) / v(b, kappa) for a point with s_A(x) = s_x.
double offregion_front_time(const ModelParams& params, const AggregationCertificate& cert, double s_x);

}  // namespace aggrokin
