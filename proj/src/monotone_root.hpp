#pragma once

#include <cmath>

#include "poiseiv/distributions.hpp"
#include "poiseiv/errors.hpp"

namespace poiseiv::detail {

struct RootResult {
  double root = 0.0;
  int evaluations = 0;
};

// Zero of a strictly increasing function on an open interval containing 0.
// Brackets by geometric expansion from 0 toward the relevant interval end
// (a finite end is approached no closer than 1e-9), then bisects. Throws
// NoRootError when no sign change exists inside the probed range.
template <class F>
RootResult find_increasing_root(F&& f, const MgfDomain& domain, double f_tol) {
  constexpr double kMargin = 1e-9;
  int evals = 0;
  auto eval = [&](double t) {
    ++evals;
    return f(t);
  };

  const double f0 = eval(0.0);
  if (std::abs(f0) <= f_tol) return {0.0, evals};

  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  if (f0 < 0.0) {
    lo = 0.0;
    if (std::isinf(domain.hi)) {
      for (double t = 1.0; t <= 1e18; t *= 2.0) {
        if (eval(t) >= 0.0) {
          hi = t;
          bracketed = true;
          break;
        }
        lo = t;
      }
    } else {
      for (double gap = 0.5 * domain.hi;; gap *= 0.5) {
        const bool last = gap <= kMargin;
        const double t = domain.hi - (last ? kMargin : gap);
        if (eval(t) >= 0.0) {
          hi = t;
          bracketed = true;
          break;
        }
        lo = t;
        if (last) break;
      }
    }
  } else {
    hi = 0.0;
    if (std::isinf(domain.lo)) {
      for (double t = -1.0; t >= -1e18; t *= 2.0) {
        if (eval(t) <= 0.0) {
          lo = t;
          bracketed = true;
          break;
        }
        hi = t;
      }
    } else {
      for (double gap = -0.5 * domain.lo;; gap *= 0.5) {
        const bool last = gap <= kMargin;
        const double t = domain.lo + (last ? kMargin : gap);
        if (eval(t) <= 0.0) {
          lo = t;
          bracketed = true;
          break;
        }
        hi = t;
        if (last) break;
      }
    }
  }
  if (!bracketed)
    throw NoRootError("no sign change inside the admissible interval; no root exists");

  double best = 0.5 * (lo + hi);
  double best_abs = std::abs(eval(best));
  for (int i = 0; i < 300 && best_abs > f_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;  // interval exhausted at machine precision
    const double fm = eval(mid);
    const double fm_abs = std::abs(fm);
    if (fm_abs < best_abs) {
      best = mid;
      best_abs = fm_abs;
    }
    if (fm_abs <= f_tol) break;
    if (fm < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {best, evals};
}

}  // namespace poiseiv::detail
