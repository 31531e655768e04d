#pragma once

#include <span>

#include "poiseiv/bias_map.hpp"

namespace poiseiv {

struct SlopeInversionDetail {
  double true_slope = 0.0;
  bool closed_form = false;
  int iterations = 0;
};

/// Inverse of the limit-slope map: recovers the true slope whose naive
/// limit equals the given slope. Closed forms mirror the two supported
/// example families; other pairs solve K_X'(t) = K_W'(s) - E[U] by monotone
/// root finding. NoRootError when the right-hand side falls outside the
/// range of K_X' on its domain.
SlopeInversionDetail invert_naive_slope_detail(const DistSpec& x, const DistSpec& u,
                                               double naive_slope);
double invert_naive_slope(const DistSpec& x, const DistSpec& u, double naive_slope);

/// Consistent estimate derived from a naive fit under the given laws.
struct CorrectedEstimate {
  ModelParams params;
  NaiveEstimate naive;
  /// Laws actually used by the correction (moment-estimated or known).
  DistSpec x_used;
  DistSpec u_used;
  bool closed_form = false;
  int inversion_iterations = 0;
};

/// Inverts the slope and adjusts the intercept by
/// log(M_W(naive slope) / M_X(corrected slope)). With a zero-variance error
/// the result equals the naive estimate exactly. DomainError when the naive
/// slope leaves the admissible region: correction is infeasible for this
/// sample and the caller must decide how to account for it.
CorrectedEstimate correct_estimate(const NaiveEstimate& naive, const DistSpec& x,
                                   const DistSpec& u);

/// Gamma covariate parameters recovered from observed w.
struct MomentEstimate {
  double shape = 0.0;
  double rate = 0.0;
};

/// Moment-method covariate fit when the error is normal with known variance:
///   rate  = mean(w) / (var(w) - sigma2),
///   shape = mean(w) * rate,
/// with the 1/n variance convention. DegenerateMomentError when the implied
/// covariate variance or a parameter is non-positive.
MomentEstimate estimate_nuisance_normal_error(std::span<const double> w, double sigma2);

/// Moment-method covariate fit when the error is gamma with known shape and
/// a rate shared with the covariate:
///   rate  = mean(w) / var(w),
///   shape = mean(w) * rate - error_shape.
MomentEstimate estimate_nuisance_gamma_error(std::span<const double> w,
                                             double error_shape);

}  // namespace poiseiv
