#pragma once

namespace aggrokin {

enum class Branch { principal, negative };

/// Real Lambert W: the solution w of w*exp(w) = x on the requested branch.
/// Principal branch: x >= -1/e, w >= -1. Negative branch: -1/e <= x < 0, w <= -1.
/// Halley iteration from branch-specific seeds; throws ErrorKind::domain
/// outside the branch domain.
double lambert_w(Branch branch, double x);

/// W_{-1}(-exp(s)) for s <= -1, evaluated without forming exp(s), so that
/// arguments far below the double range (s ~ -1e5) remain usable.
double lambert_wm1_neg_exp(double s);

}  // namespace aggrokin
