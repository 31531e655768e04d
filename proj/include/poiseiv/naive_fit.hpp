#pragma once

#include <limits>
#include <optional>

#include "poiseiv/dataset.hpp"

namespace poiseiv {

/// Regression coefficient pair (intercept, slope).
struct ModelParams {
  double beta0 = 0.0;
  double beta1 = 0.0;
};

struct Vec2 {
  double c0 = 0.0;
  double c1 = 0.0;

  double norm() const;
};

struct Mat2 {
  double m00 = 0.0, m01 = 0.0;
  double m10 = 0.0, m11 = 0.0;
};

/// Result of solving the mean score equation on observed data.
struct NaiveEstimate {
  ModelParams params;
  int iterations = 0;
  bool converged = false;
  double score_norm = std::numeric_limits<double>::infinity();
};

struct FitOptions {
  /// Default start: beta0 = log(mean(y) + 1e-10), beta1 = 0.
  std::optional<ModelParams> init;
  double tol = 1e-10;
  int max_iter = 100;
};

/// Mean score (1/n) sum_i (y_i - exp(b0 + b1 w_i)) (1, w_i)'.
/// Throws OverflowError when a linear predictor exceeds the safe exponent
/// bound instead of silently saturating.
Vec2 score(const ModelParams& coeffs, const Dataset& data);

/// Derivative of the mean score in the coefficients; symmetric and negative
/// definite whenever w is non-constant.
Mat2 score_jacobian(const ModelParams& coeffs, const Dataset& data);

/// Damped Newton solve of score(b) = 0: full steps halved until the score
/// norm decreases (at most 30 halvings per step). All-zero counts are
/// rejected with AllZeroCountsError since no finite intercept solves the
/// first score component. Non-convergence is reported through the returned
/// diagnostics, not an exception.
NaiveEstimate fit_naive(const Dataset& data, const FitOptions& options = {});

}  // namespace poiseiv
