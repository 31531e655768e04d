#pragma once

#include <optional>

#include "poiseiv/distributions.hpp"
#include "poiseiv/naive_fit.hpp"

namespace poiseiv {

/// Generating model: covariate law X, independent error law U and true
/// coefficients. The observed covariate is W = X + U; X and U themselves
/// are never observed.
struct EivModel {
  DistSpec x;
  DistSpec u;
  ModelParams beta;
};

/// Checks coefficient finiteness and that the true slope lies inside the
/// covariate MGF domain.
void validate(const EivModel& model);

/// Population limit of the naive estimator together with its asymptotic
/// bias. The asymptotic MSE is the componentwise squared bias: the limiting
/// variance of a consistent estimator of the limit is zero.
struct BiasReport {
  ModelParams limit;
  Vec2 bias;
  Vec2 asy_mse;
};

/// Residual of the population score identity linking the true slope t to a
/// candidate limit slope s:
///
///   K_X'(s) + K_U'(s) - E[U] - K_X'(t).
///
/// Strictly increasing in s whenever var(W) > 0; its unique zero is the
/// limit slope of the naive estimator.
double slope_residual(const DistSpec& x, const DistSpec& u, double true_slope,
                      double naive_slope);

struct SlopeLimitDetail {
  double naive_slope = 0.0;
  bool closed_form = false;
  /// Residual evaluations spent by the generic root search (0 for closed
  /// forms).
  int iterations = 0;
  /// Second quadratic root for a gamma covariate with a normal error. It
  /// always lies at or beyond the covariate MGF boundary, which is why it is
  /// rejected; kept for diagnostics.
  std::optional<double> rejected_root;
  std::optional<double> discriminant;
};

/// Limit slope of the naive estimator as a function of the true slope.
///
/// Closed forms cover a gamma covariate with a normal error and a gamma
/// covariate with a gamma error sharing the rate (exact rate equality);
/// a zero-variance error returns the slope unchanged. Every other pair
/// falls back to a bracketing search on slope_residual: expand from zero
/// toward the domain boundary (stopping 1e-9 inside a finite end), then
/// bisect to |residual| <= 1e-12.
SlopeLimitDetail naive_slope_limit_detail(const DistSpec& x, const DistSpec& u,
                                          double true_slope);
double naive_slope_limit(const DistSpec& x, const DistSpec& u, double true_slope);

/// Full naive limit: limit slope, the matching intercept
/// beta0 + K_X(beta1) - K_W(limit slope), asymptotic bias and MSE.
BiasReport naive_limit(const EivModel& model);

}  // namespace poiseiv
