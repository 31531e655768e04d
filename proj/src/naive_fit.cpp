#include "poiseiv/naive_fit.hpp"

#include <cmath>
#include <stdexcept>

#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

// Exponent bound keeping exp() inside the double range with margin.
constexpr double kMaxExponent = 700.0;

struct Eval {
  Vec2 s;
  Mat2 jac;
  bool overflow = false;
};

Eval eval_score(const ModelParams& b, const Dataset& data, bool need_jacobian) {
  const auto& y = data.y();
  const auto& w = data.w();
  const double n = static_cast<double>(data.size());

  double s0 = 0.0, s1 = 0.0;
  double j00 = 0.0, j01 = 0.0, j11 = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double eta = b.beta0 + b.beta1 * w[i];
    if (eta > kMaxExponent) {
      Eval out;
      out.overflow = true;
      return out;
    }
    const double mu = std::exp(eta);
    const double r = static_cast<double>(y[i]) - mu;
    s0 += r;
    s1 += r * w[i];
    if (need_jacobian) {
      j00 += mu;
      j01 += mu * w[i];
      j11 += mu * w[i] * w[i];
    }
  }

  Eval out;
  out.s = {s0 / n, s1 / n};
  if (need_jacobian) out.jac = {-j00 / n, -j01 / n, -j01 / n, -j11 / n};
  return out;
}

void check_params(const ModelParams& p) {
  if (!std::isfinite(p.beta0) || !std::isfinite(p.beta1))
    throw std::invalid_argument("coefficients must be finite");
}

}  // namespace

double Vec2::norm() const { return std::hypot(c0, c1); }

Vec2 score(const ModelParams& coeffs, const Dataset& data) {
  check_params(coeffs);
  const Eval e = eval_score(coeffs, data, false);
  if (e.overflow)
    throw OverflowError("a linear predictor exceeds 700; exp would leave the double range");
  return e.s;
}

Mat2 score_jacobian(const ModelParams& coeffs, const Dataset& data) {
  check_params(coeffs);
  const Eval e = eval_score(coeffs, data, true);
  if (e.overflow)
    throw OverflowError("a linear predictor exceeds 700; exp would leave the double range");
  return e.jac;
}

NaiveEstimate fit_naive(const Dataset& data, const FitOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");

  double count_sum = 0.0;
  bool any_positive = false;
  for (const auto v : data.y()) {
    if (v > 0) any_positive = true;
    count_sum += static_cast<double>(v);
  }
  if (!any_positive)
    throw AllZeroCountsError("all counts are zero; the score equation has no finite root");

  ModelParams b;
  if (options.init) {
    b = *options.init;
    check_params(b);
  } else {
    b = {std::log(count_sum / static_cast<double>(data.size()) + 1e-10), 0.0};
  }

  Eval cur = eval_score(b, data, true);
  if (cur.overflow)
    throw OverflowError("a linear predictor exceeds 700 at the starting point");
  double score_norm = cur.s.norm();

  int iter = 0;
  while (score_norm > options.tol && iter < options.max_iter) {
    const Mat2& jac = cur.jac;
    const double det = jac.m00 * jac.m11 - jac.m01 * jac.m10;
    if (!(std::abs(det) > 1e-300) || !std::isfinite(det)) break;

    // Newton direction: solve jac * d = -s.
    const double d0 = (-cur.s.c0 * jac.m11 + cur.s.c1 * jac.m01) / det;
    const double d1 = (cur.s.c0 * jac.m10 - cur.s.c1 * jac.m00) / det;

    double step = 1.0;
    bool accepted = false;
    ModelParams cand;
    Eval cand_eval;
    for (int halving = 0; halving <= 30; ++halving) {
      cand = {b.beta0 + step * d0, b.beta1 + step * d1};
      cand_eval = eval_score(cand, data, true);
      if (!cand_eval.overflow) {
        const double cand_norm = cand_eval.s.norm();
        if (cand_norm < score_norm) {
          accepted = true;
          score_norm = cand_norm;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stalled; report diagnostics below

    b = cand;
    cur = cand_eval;
    ++iter;
  }

  NaiveEstimate out;
  out.params = b;
  out.iterations = iter;
  out.score_norm = score_norm;
  out.converged = score_norm <= options.tol;
  return out;
}

}  // namespace poiseiv
