// Test-only oracles, independent of the library code paths they check:
// quadrature for gamma MGF values, central finite differences, plain
// bisection, a profiled-score solver for the two-parameter fit, and a
// tolerance helper for values quoted at a fixed number of significant
// figures.

#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>

#include "poiseiv/dataset.hpp"

namespace oracles {

// Integral of exp(t x) against the Gamma(shape, rate) density by composite
// Simpson on [0, L] with L far past the decay scale. Requires shape >= 1 and
// t < rate.
inline double gamma_mgf_quadrature(double shape, double rate, double t) {
  if (!(t < rate)) throw std::invalid_argument("t must be below the rate");
  const double decay = rate - t;
  const double upper = 80.0 / decay;
  const int intervals = 200000;  // even
  const double h = upper / intervals;
  const double log_norm = shape * std::log(rate) - std::lgamma(shape);
  auto integrand = [&](double x) {
    if (x <= 0.0) return 0.0;
    return std::exp(log_norm + (shape - 1.0) * std::log(x) - decay * x);
  };
  double acc = integrand(0.0) + integrand(upper);
  for (int i = 1; i < intervals; ++i) {
    acc += integrand(i * h) * (i % 2 == 0 ? 2.0 : 4.0);
  }
  return acc * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double t,
                                 double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

// Plain bisection for a function with f(lo) and f(hi) of opposite signs.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iterations = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (!(flo * fhi <= 0.0)) throw std::invalid_argument("bisect: no sign change");
  for (int i = 0; i < iterations; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    const double fm = f(mid);
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
      fhi = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Profile the intercept out of the two-equation score system: the first
// component forces exp(b0) = sum(y) / sum(exp(b1 w)); the remaining
// one-dimensional equation in the slope is solved by bisection.
inline double profiled_slope_score(const poiseiv::Dataset& data, double slope) {
  double ysum = 0.0, esum = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    ysum += static_cast<double>(data.y()[i]);
    esum += std::exp(slope * data.w()[i]);
  }
  const double scale = ysum / esum;  // exp(profiled intercept)
  double g = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    g += (static_cast<double>(data.y()[i]) - scale * std::exp(slope * data.w()[i])) * data.w()[i];
  }
  return g;
}

// Half a unit in the last place of a value quoted at `figures`
// significant figures (slightly inflated for the printer's own rounding).
inline double sig_fig_tolerance(double reference, int figures) {
  const double magnitude = std::floor(std::log10(std::abs(reference)));
  return 0.51 * std::pow(10.0, magnitude - figures + 1);
}

inline bool matches_reference(double actual, double reference, int figures = 4) {
  return std::abs(actual - reference) <= sig_fig_tolerance(reference, figures);
}

}  // namespace oracles
