#include "poiseiv/corrected_fit.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <utility>

#include "monotone_root.hpp"
#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

constexpr double kResidualTol = 1e-12;

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void require_inside(const MgfDomain& dom, double t, const char* what) {
  if (!dom.contains(t)) {
    throw DomainError(std::string(what) + " " + fmt_g(t) + " outside the admissible interval (" +
                      fmt_g(dom.lo) + ", " + fmt_g(dom.hi) + ")");
  }
}

std::pair<double, double> sample_moments(std::span<const double> w) {
  if (w.size() < 2) throw std::invalid_argument("need at least two observations");
  const double n = static_cast<double>(w.size());
  double m1 = 0.0;
  for (const double v : w) m1 += v;
  m1 /= n;
  double m2 = 0.0;
  for (const double v : w) {
    const double d = v - m1;
    m2 += d * d;
  }
  m2 /= n;  // 1/n convention, not 1/(n-1)
  return {m1, m2};
}

}  // namespace

SlopeInversionDetail invert_naive_slope_detail(const DistSpec& x, const DistSpec& u,
                                               double naive_slope) {
  require_inside(mgf_domain(x).intersect(mgf_domain(u)), naive_slope, "naive slope");

  SlopeInversionDetail out;
  if (variance(u) == 0.0) {
    out.true_slope = naive_slope;
    out.closed_form = true;
    return out;
  }

  if (x.kind() == DistKind::gamma && u.kind() == DistKind::normal) {
    const double shape = x.gamma_shape();
    const double rate = x.gamma_rate();
    const double evar = u.normal_variance();
    const double den = evar * naive_slope * naive_slope - rate * evar * naive_slope - shape;
    // den = -(rate - slope) * (implied K_X'); it is negative exactly when
    // the implied cumulant derivative is attainable for a gamma covariate.
    if (!(den < 0.0))
      throw NoRootError("implied cumulant derivative is not positive; the slope " +
                        fmt_g(naive_slope) + " is not a naive limit under these laws");
    const double num =
        evar * rate * naive_slope * naive_slope - (shape + rate * rate * evar) * naive_slope;
    out.true_slope = num / den;
    out.closed_form = true;
    return out;
  }

  if (x.kind() == DistKind::gamma && u.kind() == DistKind::gamma &&
      x.gamma_rate() == u.gamma_rate()) {
    const double k1 = x.gamma_shape();
    const double k2 = u.gamma_shape();
    const double rate = x.gamma_rate();
    const double den = k1 * rate + k2 * naive_slope;
    if (!(den > 0.0))
      throw NoRootError("implied cumulant derivative is not positive; the slope " +
                        fmt_g(naive_slope) + " is not a naive limit under these laws");
    out.true_slope = (k1 + k2) * naive_slope * rate / den;
    out.closed_form = true;
    return out;
  }

  // Generic pair: solve K_X'(t) = K_W'(s) - E[U]; the left side is strictly
  // increasing, so the root is unique when it exists.
  const double target = cgf_prime(x, naive_slope) + cgf_prime(u, naive_slope) - mean(u);
  auto residual = [&](double t) { return cgf_prime(x, t) - target; };
  const auto root = detail::find_increasing_root(residual, mgf_domain(x), kResidualTol);
  out.true_slope = root.root;
  out.iterations = root.evaluations;
  return out;
}

double invert_naive_slope(const DistSpec& x, const DistSpec& u, double naive_slope) {
  return invert_naive_slope_detail(x, u, naive_slope).true_slope;
}

CorrectedEstimate correct_estimate(const NaiveEstimate& naive, const DistSpec& x,
                                   const DistSpec& u) {
  const double naive_slope = naive.params.beta1;
  require_inside(mgf_domain(x).intersect(mgf_domain(u)), naive_slope, "naive slope");

  const auto inversion = invert_naive_slope_detail(x, u, naive_slope);
  const double corrected_slope = inversion.true_slope;
  require_inside(mgf_domain(x), corrected_slope, "corrected slope");

  // Intercept adjustment log(M_W(naive slope) / M_X(corrected slope)) =
  // K_X(naive) - K_X(corrected) + K_U(naive), grouped so a zero-variance
  // error leaves the naive intercept untouched exactly.
  const double adjustment =
      (cgf(x, naive_slope) - cgf(x, corrected_slope)) + cgf(u, naive_slope);
  const double corrected_intercept = naive.params.beta0 + adjustment;

  CorrectedEstimate out{
      .params = {corrected_intercept, corrected_slope},
      .naive = naive,
      .x_used = x,
      .u_used = u,
      .closed_form = inversion.closed_form,
      .inversion_iterations = inversion.iterations,
  };
  return out;
}

MomentEstimate estimate_nuisance_normal_error(std::span<const double> w, double sigma2) {
  if (!(std::isfinite(sigma2) && sigma2 >= 0.0))
    throw std::invalid_argument("error variance must be finite and non-negative");
  const auto [m1, m2] = sample_moments(w);
  const double implied_var = m2 - sigma2;
  if (!(implied_var > 0.0))
    throw DegenerateMomentError("sample variance " + fmt_g(m2) +
                                " does not exceed the error variance " + fmt_g(sigma2));
  const double rate = m1 / implied_var;
  const double shape = m1 * rate;
  if (!(rate > 0.0 && shape > 0.0))
    throw DegenerateMomentError("non-positive moment estimates (mean of w is " + fmt_g(m1) + ")");
  return {shape, rate};
}

MomentEstimate estimate_nuisance_gamma_error(std::span<const double> w, double error_shape) {
  if (!(std::isfinite(error_shape) && error_shape > 0.0))
    throw std::invalid_argument("error shape must be finite and positive");
  const auto [m1, m2] = sample_moments(w);
  if (!(m2 > 0.0)) throw DegenerateMomentError("sample variance of w is not positive");
  const double rate = m1 / m2;
  const double shape = m1 * rate - error_shape;
  if (!(rate > 0.0))
    throw DegenerateMomentError("non-positive rate estimate (mean of w is " + fmt_g(m1) + ")");
  if (!(shape > 0.0))
    throw DegenerateMomentError("implied covariate shape " + fmt_g(shape) +
                                " is not positive (error shape " + fmt_g(error_shape) +
                                " too large)");
  return {shape, rate};
}

}  // namespace poiseiv
