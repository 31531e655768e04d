#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "poiseiv/corrected_fit.hpp"
#include "poiseiv/errors.hpp"
#include "poiseiv/sim_harness.hpp"

using namespace poiseiv;

namespace {

const DistSpec kGammaX = DistSpec::gamma(2.0, 1.2);

std::vector<double> grid(double lo, double hi, int points = 50) {
  std::vector<double> out;
  for (int i = 0; i < points; ++i) out.push_back(lo + (hi - lo) * (i + 0.5) / points);
  return out;
}

// Independent inversion: bisect K_X'(t) - (K_W'(slope) - E[U]) over the
// covariate domain.
double oracle_invert(const DistSpec& x, const DistSpec& u, double naive_slope) {
  const double target = cgf_prime(x, naive_slope) + cgf_prime(u, naive_slope) - mean(u);
  const double hi = std::min(mgf_domain(x).hi, 1e6) - 1e-9;
  return oracles::bisect([&](double t) { return cgf_prime(x, t) - target; }, -50.0, hi);
}

NaiveEstimate as_estimate(ModelParams p) {
  NaiveEstimate est;
  est.params = p;
  est.converged = true;
  est.score_norm = 0.0;
  return est;
}

}  // namespace

TEST_CASE("slope inversion closed forms") {
  SUBCASE("zero maps to zero") {
    CHECK(invert_naive_slope(kGammaX, DistSpec::normal(0.0, 0.5), 0.0) == 0.0);
    CHECK(invert_naive_slope(kGammaX, DistSpec::gamma(0.72, 1.2), 0.0) == 0.0);
  }

  SUBCASE("reference limits invert to the true slope") {
    // shared-rate gamma pair, exact limit slope 0.72/3.048
    CHECK(invert_naive_slope(kGammaX, DistSpec::gamma(0.72, 1.2), 0.72 / 3.048) ==
          doctest::Approx(0.3).epsilon(1e-12));
    // rounded reference values recover the slope at their own precision
    CHECK(std::abs(invert_naive_slope(kGammaX, DistSpec::gamma(0.72, 1.2), 0.236220) - 0.3) <=
          1e-4);
    CHECK(std::abs(invert_naive_slope(kGammaX, DistSpec::normal(0.0, 0.5), 0.24703) - 0.3) <=
          1e-4);
  }

  SUBCASE("degenerate error is the identity") {
    const auto d = invert_naive_slope_detail(kGammaX, DistSpec::degenerate_zero(), 0.42);
    CHECK(d.true_slope == 0.42);
    CHECK(d.closed_form);
  }

  SUBCASE("out-of-range slopes raise NoRootError") {
    // Far-negative slopes push the implied cumulant derivative below zero.
    CHECK_THROWS_AS(invert_naive_slope(kGammaX, DistSpec::normal(0.0, 1.0), -10.0), NoRootError);
    CHECK_THROWS_AS(invert_naive_slope(kGammaX, DistSpec::gamma(0.72, 1.2), -4.0), NoRootError);
  }

  SUBCASE("domain check on the naive slope itself") {
    CHECK_THROWS_AS(invert_naive_slope(kGammaX, DistSpec::normal(0.0, 1.0), 1.2), DomainError);
    CHECK_THROWS_AS(invert_naive_slope(kGammaX, DistSpec::gamma(0.72, 1.2), 1.25), DomainError);
  }
}

TEST_CASE("inversion agrees with the independent oracle") {
  SUBCASE("closed forms") {
    for (const double evar : {0.05, 0.5, 2.0}) {
      const DistSpec u = DistSpec::normal(0.0, evar);
      for (const double s : grid(-0.4, 1.1)) {
        CHECK(std::abs(invert_naive_slope(kGammaX, u, s) - oracle_invert(kGammaX, u, s)) <=
              1e-10);
      }
    }
    for (const double k2 : {0.072, 0.72, 2.88}) {
      const DistSpec u = DistSpec::gamma(k2, 1.2);
      for (const double s : grid(-0.4, 1.1)) {
        CHECK(std::abs(invert_naive_slope(kGammaX, u, s) - oracle_invert(kGammaX, u, s)) <=
              1e-10);
      }
    }
  }

  SUBCASE("generic path: gammas with different rates") {
    const DistSpec u = DistSpec::gamma(0.72, 1.5);
    for (const double s : grid(0.0, 1.1, 20)) {
      const auto d = invert_naive_slope_detail(kGammaX, u, s);
      CHECK_FALSE(d.closed_form);
      CHECK(std::abs(d.true_slope - oracle_invert(kGammaX, u, s)) <= 1e-10);
    }
  }

  SUBCASE("generic path: normal covariate has a linear inverse") {
    const DistSpec x = DistSpec::normal(1.0, 2.0);
    const DistSpec u = DistSpec::normal(0.0, 1.0);
    for (const double s : {-1.0, -0.1, 0.6, 2.5}) {
      const double expected = s * (2.0 + 1.0) / 2.0;
      CHECK(invert_naive_slope(x, u, s) == doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("round trips between the limit map and its inverse") {
  SUBCASE("gamma + normal across a nuisance grid") {
    for (const double evar : {0.05, 0.2, 0.5, 1.0, 2.0}) {
      const DistSpec u = DistSpec::normal(0.0, evar);
      for (const double b1 : grid(-2.0, 1.15)) {
        const double mapped = naive_slope_limit(kGammaX, u, b1);
        CHECK(std::abs(invert_naive_slope(kGammaX, u, mapped) - b1) <= 1e-8);
      }
      for (const double s : grid(-0.5, 1.15)) {
        const double inverted = invert_naive_slope(kGammaX, u, s);
        CHECK(std::abs(naive_slope_limit(kGammaX, u, inverted) - s) <= 1e-8);
      }
    }
  }

  SUBCASE("gamma + gamma across a nuisance grid") {
    for (const double k2 : {0.072, 0.3, 0.72, 1.5, 2.88}) {
      const DistSpec u = DistSpec::gamma(k2, 1.2);
      for (const double b1 : grid(-2.0, 1.15)) {
        const double mapped = naive_slope_limit(kGammaX, u, b1);
        CHECK(std::abs(invert_naive_slope(kGammaX, u, mapped) - b1) <= 1e-8);
      }
      for (const double s : grid(-0.5, 1.15)) {
        const double inverted = invert_naive_slope(kGammaX, u, s);
        CHECK(std::abs(naive_slope_limit(kGammaX, u, inverted) - s) <= 1e-8);
      }
    }
  }
}

TEST_CASE("correct_estimate") {
  SUBCASE("zero estimate stays zero") {
    for (const auto& u : {DistSpec::normal(0.0, 0.5), DistSpec::gamma(0.72, 1.2)}) {
      const auto ce = correct_estimate(as_estimate({0.0, 0.0}), kGammaX, u);
      CHECK(ce.params.beta0 == 0.0);
      CHECK(ce.params.beta1 == 0.0);
    }
  }

  SUBCASE("applying the correction to the exact limit recovers the truth") {
    for (const auto& u : {DistSpec::normal(0.0, 2.0), DistSpec::gamma(2.88, 1.2)}) {
      const EivModel model{kGammaX, u, {0.2, 0.3}};
      const BiasReport limit = naive_limit(model);
      const auto ce = correct_estimate(as_estimate(limit.limit), kGammaX, u);
      CHECK(std::abs(ce.params.beta0 - 0.2) <= 1e-8);
      CHECK(std::abs(ce.params.beta1 - 0.3) <= 1e-8);
      CHECK(ce.closed_form);
    }
  }

  SUBCASE("intercept round trip across a 5x5 coefficient grid") {
    const std::vector<double> beta0s = {-1.0, 0.0, 0.2, 1.0, 2.0};
    const std::vector<double> beta1s = {-0.5, 0.0, 0.15, 0.3, 0.45};
    for (const auto& u : {DistSpec::normal(0.0, 0.5), DistSpec::gamma(0.72, 1.2)}) {
      for (const double b0 : beta0s) {
        for (const double b1 : beta1s) {
          const BiasReport limit = naive_limit({kGammaX, u, {b0, b1}});
          const auto ce = correct_estimate(as_estimate(limit.limit), kGammaX, u);
          CHECK(std::abs(ce.params.beta0 - b0) <= 1e-8);
          CHECK(std::abs(ce.params.beta1 - b1) <= 1e-8);
        }
      }
    }
  }

  SUBCASE("degenerate error returns the naive estimate exactly") {
    const auto naive = as_estimate({0.17, 0.23});
    const auto ce = correct_estimate(naive, kGammaX, DistSpec::degenerate_zero());
    CHECK(ce.params.beta0 == naive.params.beta0);
    CHECK(ce.params.beta1 == naive.params.beta1);
  }

  SUBCASE("infeasible slope fails loudly") {
    CHECK_THROWS_AS(correct_estimate(as_estimate({0.0, 1.2}), kGammaX, DistSpec::normal(0.0, 0.5)),
                    DomainError);
    CHECK_THROWS_AS(correct_estimate(as_estimate({0.0, 1.3}), kGammaX, DistSpec::gamma(0.72, 1.2)),
                    DomainError);
  }
}

TEST_CASE("moment-method nuisance estimation") {
  SUBCASE("normal error formulas on constructed moments") {
    // two points with mean 2 and 1/n variance 1.4
    const double dev = std::sqrt(1.4);
    const std::vector<double> w = {2.0 - dev, 2.0 + dev};
    const auto est = estimate_nuisance_normal_error(w, 0.5);
    CHECK(est.rate == doctest::Approx(2.0 / 0.9).epsilon(1e-12));
    CHECK(est.shape == doctest::Approx(2.0 * 2.0 / 0.9).epsilon(1e-12));
  }

  SUBCASE("gamma error formulas on constructed moments") {
    // population moments of the shared-rate pair: mean 2.72/1.2, var 2.72/1.44
    const double m = 2.72 / 1.2;
    const double dev = std::sqrt(2.72 / 1.44);
    const std::vector<double> w = {m - dev, m + dev};
    const auto est = estimate_nuisance_gamma_error(w, 0.72);
    CHECK(est.rate == doctest::Approx(1.2).epsilon(1e-12));
    CHECK(est.shape == doctest::Approx(2.0).epsilon(1e-10));
  }

  SUBCASE("guards") {
    const double dev = std::sqrt(0.4);
    const std::vector<double> small_var = {2.0 - dev, 2.0 + dev};
    CHECK_THROWS_AS(estimate_nuisance_normal_error(small_var, 0.5), DegenerateMomentError);
    const std::vector<double> w = {2.0, 2.4};
    CHECK_THROWS_AS(estimate_nuisance_gamma_error(w, 500.0), DegenerateMomentError);
    const std::vector<double> one = {2.0};
    CHECK_THROWS_AS(estimate_nuisance_normal_error(one, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(estimate_nuisance_normal_error(w, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(estimate_nuisance_gamma_error(w, 0.0), std::invalid_argument);
  }

  SUBCASE("consistency at large n") {
    RngEngine eng = make_stream(777, 0);
    const EivModel m1{kGammaX, DistSpec::normal(0.0, 0.5), {0.0, 0.0}};
    const auto x1 = sample(m1.x, eng, 1000000);
    const auto u1 = sample(m1.u, eng, 1000000);
    std::vector<double> w1(x1.size());
    for (std::size_t i = 0; i < w1.size(); ++i) w1[i] = x1[i] + u1[i];
    const auto e1 = estimate_nuisance_normal_error(w1, 0.5);
    CHECK(std::abs(e1.shape - 2.0) < 0.05);
    CHECK(std::abs(e1.rate - 1.2) < 0.05);

    const auto x2 = sample(kGammaX, eng, 1000000);
    const auto u2 = sample(DistSpec::gamma(2.88, 1.2), eng, 1000000);
    std::vector<double> w2(x2.size());
    for (std::size_t i = 0; i < w2.size(); ++i) w2[i] = x2[i] + u2[i];
    const auto e2 = estimate_nuisance_gamma_error(w2, 2.88);
    CHECK(std::abs(e2.shape - 2.0) < 0.05);
    CHECK(std::abs(e2.rate - 1.2) < 0.05);
  }
}
