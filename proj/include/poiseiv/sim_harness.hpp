#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "poiseiv/corrected_fit.hpp"

namespace poiseiv {

enum class NuisanceMode { known, moment };

/// One Monte Carlo experiment: generating model, sample size, replication
/// count, master seed and how the correction obtains the covariate law.
struct SimConfig {
  EivModel model;
  std::size_t n = 500;
  std::size_t mc = 1000;
  std::uint64_t seed = 1;
  NuisanceMode nuisance = NuisanceMode::known;
  /// Known error parameter for moment estimation: the variance for a normal
  /// error, the shape for a gamma error. Required in moment mode unless the
  /// error law is degenerate.
  std::optional<double> error_param;
};

/// Throws ConfigError on an unusable configuration.
void validate(const SimConfig& config);

struct SimReport {
  Vec2 bias_naive;
  Vec2 bias_corrected;
  Mat2 mse_naive;
  Mat2 mse_corrected;
  /// Monte Carlo standard errors of the bias estimates (sample standard
  /// deviation of the per-replication estimates over sqrt(successful)).
  Vec2 mc_se_naive;
  Vec2 mc_se_corrected;
  BiasReport theory;
  std::size_t replications = 0;
  std::size_t successful = 0;
  std::size_t failed_replications = 0;
};

/// Draws (y, w): x and u from their laws, then y Poisson with rate
/// exp(beta0 + beta1 x) and w = x + u. The latent draws are discarded.
Dataset generate_dataset(const EivModel& model, std::size_t n, RngEngine& engine);

/// Runs the experiment. Each replication gets its own deterministic
/// substream derived from (seed, replication index) and failed replications
/// (non-convergent fit, degenerate moments, infeasible correction) are
/// dropped from the averages and counted, so the report does not depend on
/// thread count or execution order. threads <= 0 uses all available
/// workers. SimulationError when more than half of the replications fail.
SimReport run_monte_carlo(const SimConfig& config, int threads = 0);

/// Single-threaded reference of run_monte_carlo; same outputs bit for bit.
SimReport run_monte_carlo_serial(const SimConfig& config);

/// Theory-versus-simulation summary, one row per estimator. The corrected
/// estimator is consistent, so its theoretical bias and MSE are zero.
struct TheoryRow {
  std::string estimator;
  Vec2 asy_bias;
  Vec2 mc_bias;
  Vec2 asy_mse;
  Vec2 mc_mse;  // MSE matrix diagonal
  Vec2 mc_se;
  std::size_t successful = 0;
  std::size_t failed = 0;
};

std::vector<TheoryRow> compare_with_theory(const SimConfig& config, int threads = 0);

}  // namespace poiseiv
