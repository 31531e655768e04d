#include "poiseiv/sim_harness.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

constexpr double kMaxExponent = 700.0;

struct RepOutcome {
  bool ok = false;
  ModelParams naive;
  ModelParams corrected;
};

// One replication: generate, fit, resolve nuisance laws, correct. Failures
// of any stage mark the replication as failed; exceptions never escape so
// the replication loop can run inside a parallel region.
RepOutcome run_replication(const SimConfig& config, std::uint64_t index) {
  RepOutcome out;
  try {
    RngEngine engine = make_stream(config.seed, index);
    const Dataset data = generate_dataset(config.model, config.n, engine);

    const NaiveEstimate naive = fit_naive(data);
    if (!naive.converged) return out;

    DistSpec x_used = config.model.x;
    DistSpec u_used = config.model.u;
    if (config.nuisance == NuisanceMode::moment) {
      switch (config.model.u.kind()) {
        case DistKind::normal: {
          const double sigma2 = *config.error_param;
          const MomentEstimate est = estimate_nuisance_normal_error(data.w(), sigma2);
          x_used = DistSpec::gamma(est.shape, est.rate);
          u_used = DistSpec::normal(0.0, sigma2);
          break;
        }
        case DistKind::gamma: {
          const double error_shape = *config.error_param;
          const MomentEstimate est = estimate_nuisance_gamma_error(data.w(), error_shape);
          x_used = DistSpec::gamma(est.shape, est.rate);
          u_used = DistSpec::gamma(error_shape, est.rate);
          break;
        }
        case DistKind::degenerate_zero: {
          const MomentEstimate est = estimate_nuisance_normal_error(data.w(), 0.0);
          x_used = DistSpec::gamma(est.shape, est.rate);
          u_used = DistSpec::degenerate_zero();
          break;
        }
      }
    }

    const CorrectedEstimate corrected = correct_estimate(naive, x_used, u_used);
    out.naive = naive.params;
    out.corrected = corrected.params;
    out.ok = true;
  } catch (const std::exception&) {
    // counted as a failed replication
  }
  return out;
}

void summarize(const std::vector<ModelParams>& estimates, const ModelParams& truth, Vec2& bias,
               Mat2& mse, Vec2& se) {
  const double m = static_cast<double>(estimates.size());
  double mean0 = 0.0, mean1 = 0.0;
  for (const auto& p : estimates) {
    mean0 += p.beta0;
    mean1 += p.beta1;
  }
  mean0 /= m;
  mean1 /= m;
  bias = {mean0 - truth.beta0, mean1 - truth.beta1};

  double q00 = 0.0, q01 = 0.0, q11 = 0.0;
  double v0 = 0.0, v1 = 0.0;
  for (const auto& p : estimates) {
    const double d0 = p.beta0 - truth.beta0;
    const double d1 = p.beta1 - truth.beta1;
    q00 += d0 * d0;
    q01 += d0 * d1;
    q11 += d1 * d1;
    const double e0 = p.beta0 - mean0;
    const double e1 = p.beta1 - mean1;
    v0 += e0 * e0;
    v1 += e1 * e1;
  }
  mse = {q00 / m, q01 / m, q01 / m, q11 / m};
  if (estimates.size() > 1) {
    se = {std::sqrt(v0 / (m - 1.0) / m), std::sqrt(v1 / (m - 1.0) / m)};
  } else {
    se = {0.0, 0.0};
  }
}

SimReport aggregate(const SimConfig& config, const std::vector<RepOutcome>& outcomes) {
  SimReport report;
  report.theory = naive_limit(config.model);
  report.replications = outcomes.size();

  std::vector<ModelParams> naive;
  std::vector<ModelParams> corrected;
  naive.reserve(outcomes.size());
  corrected.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    if (o.ok) {
      naive.push_back(o.naive);
      corrected.push_back(o.corrected);
    }
  }
  report.successful = naive.size();
  report.failed_replications = outcomes.size() - naive.size();
  if (report.failed_replications * 2 > outcomes.size()) {
    throw SimulationError("more than half of the replications failed (" +
                          std::to_string(report.failed_replications) + " of " +
                          std::to_string(outcomes.size()) + ")");
  }

  summarize(naive, config.model.beta, report.bias_naive, report.mse_naive, report.mc_se_naive);
  summarize(corrected, config.model.beta, report.bias_corrected, report.mse_corrected,
            report.mc_se_corrected);
  return report;
}

}  // namespace

void validate(const SimConfig& config) {
  try {
    validate(config.model);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("invalid model: ") + e.what());
  }
  if (config.n < 2) throw ConfigError("sample size must be at least 2");
  if (config.mc < 1) throw ConfigError("replication count must be at least 1");
  if (config.nuisance == NuisanceMode::moment &&
      config.model.u.kind() != DistKind::degenerate_zero) {
    if (!config.error_param)
      throw ConfigError("moment nuisance mode requires the known error parameter");
    const double p = *config.error_param;
    if (config.model.u.kind() == DistKind::normal && !(std::isfinite(p) && p >= 0.0))
      throw ConfigError("known error variance must be finite and non-negative");
    if (config.model.u.kind() == DistKind::gamma && !(std::isfinite(p) && p > 0.0))
      throw ConfigError("known error shape must be finite and positive");
  }
}

Dataset generate_dataset(const EivModel& model, std::size_t n, RngEngine& engine) {
  validate(model);
  const std::vector<double> x = sample(model.x, engine, n);
  const std::vector<double> u = sample(model.u, engine, n);

  std::vector<std::int64_t> y(n);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double eta = model.beta.beta0 + model.beta.beta1 * x[i];
    if (eta > kMaxExponent)
      throw OverflowError("Poisson rate exponent exceeds 700 during generation");
    y[i] = std::poisson_distribution<std::int64_t>(std::exp(eta))(engine);
    w[i] = x[i] + u[i];
  }
  return Dataset(std::move(y), std::move(w));
}

SimReport run_monte_carlo(const SimConfig& config, int threads) {
  validate(config);
  std::vector<RepOutcome> outcomes(config.mc);
  const long long total = static_cast<long long>(config.mc);
#ifdef _OPENMP
  const int workers = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#else
  (void)threads;
#endif
  for (long long i = 0; i < total; ++i) {
    outcomes[static_cast<std::size_t>(i)] =
        run_replication(config, static_cast<std::uint64_t>(i));
  }
  return aggregate(config, outcomes);
}

SimReport run_monte_carlo_serial(const SimConfig& config) {
  validate(config);
  std::vector<RepOutcome> outcomes(config.mc);
  for (std::size_t i = 0; i < config.mc; ++i) {
    outcomes[i] = run_replication(config, static_cast<std::uint64_t>(i));
  }
  return aggregate(config, outcomes);
}

std::vector<TheoryRow> compare_with_theory(const SimConfig& config, int threads) {
  const SimReport report = run_monte_carlo(config, threads);

  TheoryRow naive;
  naive.estimator = "naive";
  naive.asy_bias = report.theory.bias;
  naive.mc_bias = report.bias_naive;
  naive.asy_mse = report.theory.asy_mse;
  naive.mc_mse = {report.mse_naive.m00, report.mse_naive.m11};
  naive.mc_se = report.mc_se_naive;
  naive.successful = report.successful;
  naive.failed = report.failed_replications;

  TheoryRow corrected;
  corrected.estimator = "corrected";
  corrected.asy_bias = {0.0, 0.0};
  corrected.mc_bias = report.bias_corrected;
  corrected.asy_mse = {0.0, 0.0};
  corrected.mc_mse = {report.mse_corrected.m00, report.mse_corrected.m11};
  corrected.mc_se = report.mc_se_corrected;
  corrected.successful = report.successful;
  corrected.failed = report.failed_replications;

  return {naive, corrected};
}

}  // namespace poiseiv
