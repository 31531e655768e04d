#include "poiseiv/bias_map.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

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

MgfDomain joint_domain(const DistSpec& x, const DistSpec& u) {
  return mgf_domain(x).intersect(mgf_domain(u));
}

void require_inside(const MgfDomain& dom, double t, const char* what) {
  if (!dom.contains(t)) {
    throw DomainError(std::string(what) + " " + fmt_g(t) + " outside the admissible interval (" +
                      fmt_g(dom.lo) + ", " + fmt_g(dom.hi) + ")");
  }
}

bool is_gamma_normal(const DistSpec& x, const DistSpec& u) {
  return x.kind() == DistKind::gamma && u.kind() == DistKind::normal;
}

bool is_shared_rate_gammas(const DistSpec& x, const DistSpec& u) {
  return x.kind() == DistKind::gamma && u.kind() == DistKind::gamma &&
         x.gamma_rate() == u.gamma_rate();
}

}  // namespace

void validate(const EivModel& model) {
  if (!std::isfinite(model.beta.beta0) || !std::isfinite(model.beta.beta1))
    throw std::invalid_argument("coefficients must be finite");
  require_inside(mgf_domain(model.x), model.beta.beta1, "true slope");
}

double slope_residual(const DistSpec& x, const DistSpec& u, double true_slope,
                      double naive_slope) {
  require_inside(mgf_domain(x), true_slope, "true slope");
  require_inside(joint_domain(x, u), naive_slope, "naive slope");
  // Grouped so that the equal-slope and zero-slope cases cancel exactly.
  return (cgf_prime(x, naive_slope) - cgf_prime(x, true_slope)) +
         (cgf_prime(u, naive_slope) - mean(u));
}

SlopeLimitDetail naive_slope_limit_detail(const DistSpec& x, const DistSpec& u,
                                          double true_slope) {
  require_inside(mgf_domain(x), true_slope, "true slope");

  SlopeLimitDetail out;
  if (variance(u) == 0.0) {
    // No error, no attenuation; the estimating equation is the likelihood
    // equation for the true covariate.
    out.naive_slope = true_slope;
    out.closed_form = true;
    return out;
  }

  if (is_gamma_normal(x, u)) {
    const double shape = x.gamma_shape();
    const double rate = x.gamma_rate();
    const double evar = u.normal_variance();
    const double gap = rate - true_slope;  // > 0 inside the domain
    const double a = gap * rate * evar;
    const double disc = (a - shape) * (a - shape) + 4.0 * gap * gap * evar * shape;
    const double root = std::sqrt(disc);
    // Smaller quadratic root, written through the root product so the
    // subtraction a + shape - sqrt(disc) never cancels.
    out.naive_slope = 2.0 * shape * true_slope / (a + shape + root);
    out.closed_form = true;
    out.discriminant = disc;
    out.rejected_root = (a + shape + root) / (2.0 * gap * evar);
    return out;
  }

  if (is_shared_rate_gammas(x, u)) {
    const double k1 = x.gamma_shape();
    const double k2 = u.gamma_shape();
    const double rate = x.gamma_rate();
    out.naive_slope = k1 * rate * true_slope / (k1 * rate + k2 * (rate - true_slope));
    out.closed_form = true;
    return out;
  }

  // Generic pair: the residual is strictly increasing in the candidate
  // slope (var(W) > 0 here), so its zero is unique.
  const double target = cgf_prime(x, true_slope) + mean(u);
  auto residual = [&](double s) { return cgf_prime(x, s) + cgf_prime(u, s) - target; };
  const auto root = detail::find_increasing_root(residual, joint_domain(x, u), kResidualTol);
  out.naive_slope = root.root;
  out.iterations = root.evaluations;
  return out;
}

double naive_slope_limit(const DistSpec& x, const DistSpec& u, double true_slope) {
  return naive_slope_limit_detail(x, u, true_slope).naive_slope;
}

BiasReport naive_limit(const EivModel& model) {
  validate(model);
  const auto detail = naive_slope_limit_detail(model.x, model.u, model.beta.beta1);
  const double limit_slope = detail.naive_slope;
  require_inside(joint_domain(model.x, model.u), limit_slope, "limit slope");

  // Intercept limit: beta0 + K_X(beta1) - K_X(limit) - K_U(limit), with the
  // shift computed on its own so a zero-variance error yields zero exactly.
  const double intercept_shift = (cgf(model.x, model.beta.beta1) - cgf(model.x, limit_slope)) -
                                 cgf(model.u, limit_slope);
  const double limit_intercept = model.beta.beta0 + intercept_shift;

  BiasReport report;
  report.limit = {limit_intercept, limit_slope};
  report.bias = {intercept_shift, limit_slope - model.beta.beta1};
  report.asy_mse = {report.bias.c0 * report.bias.c0, report.bias.c1 * report.bias.c1};
  return report;
}

}  // namespace poiseiv
