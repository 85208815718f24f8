#include "aggrokin/lambert_w.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "aggrokin/errors.hpp"

namespace aggrokin {

namespace {

constexpr int max_iterations = 100;
const double inv_e = std::exp(-1.0);

double branch_point_seed(double x, double sign) {
  // w ~ -1 + p - p^2/3 + 11 p^3/72 with p = +-sqrt(2(e x + 1))
  const double p = sign * std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

double halley(double w, double x) {
  for (int i = 0; i < max_iterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(w))) break;
  }
  return w;
}

}  // namespace

double lambert_w(Branch branch, double x) {
  if (std::isnan(x)) throw Error(ErrorKind::domain, "equilibria", "lambert_w of NaN");
  // Arguments within rounding of the branch point are snapped to it.
  if (x < -inv_e) {
    if (x < -inv_e * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()))
      throw Error(ErrorKind::domain, "equilibria", "lambert_w argument below -1/e");
    x = -inv_e;
  }
  if (x == -inv_e) return -1.0;

  if (branch == Branch::principal) {
    if (x == 0.0) return 0.0;
    double w;
    if (x < -0.25)
      w = branch_point_seed(x, 1.0);
    else if (std::abs(x) < 0.25)
      w = x - x * x + 1.5 * x * x * x;
    else if (x > 3.0) {
      const double l1 = std::log(x), l2 = std::log(l1);
      w = l1 - l2 + l2 / l1;
    } else
      w = std::log1p(x) * 0.75;
    return halley(w, x);
  }

  if (x >= 0.0) throw Error(ErrorKind::domain, "equilibria", "negative-branch lambert_w requires -1/e <= x < 0");
  double w;
  if (x < -0.25) {
    w = branch_point_seed(x, -1.0);
  } else {
    const double l1 = std::log(-x), l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = halley(w, x);
  return std::min(w, -1.0);
}

double lambert_wm1_neg_exp(double s) {
  if (!(s <= -1.0 + 1e-15)) throw Error(ErrorKind::domain, "equilibria", "W_{-1}(-e^s) requires s <= -1");
  if (s > -30.0) return lambert_w(Branch::negative, -std::exp(s));
  // w = -y with y - ln y = -s, y > 1; Newton converges quadratically from the
  // asymptotic seed because y is far from the branch point here.
  double y = -s + std::log(-s);
  for (int i = 0; i < max_iterations; ++i) {
    const double f = y - std::log(y) + s;
    const double step = f / (1.0 - 1.0 / y);
    y -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() * y) break;
  }
  return -y;
}

}  // namespace aggrokin
