#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "poiseiv/sim_harness.hpp"

namespace poiseiv {

/// Parsed scenario file: one base experiment plus a grid of error laws.
///
/// Grammar: one "key = value" pair per line, '#' starts a comment, blank
/// lines ignored. Keys: schema_version (must be 1), seed, n, mc, beta0,
/// beta1, x, u, nuisance (known|moment). "u" may repeat or hold a
/// comma-separated list; every other key must appear exactly once.
struct Scenario {
  int schema_version = 1;
  std::uint64_t seed = 1;
  std::size_t n = 500;
  std::size_t mc = 1000;
  ModelParams beta;
  DistSpec x = DistSpec::degenerate_zero();
  std::vector<std::pair<std::string, DistSpec>> errors;  // label, law
  NuisanceMode nuisance = NuisanceMode::known;
};

Scenario parse_scenario(std::istream& in);
Scenario parse_scenario_file(const std::string& path);

struct ScenarioCase {
  std::string label;
  SimConfig config;
};

/// One case per error law. Case i uses master seed scenario.seed + i so the
/// cases draw distinct streams; in moment mode the known error parameter is
/// taken from the error law itself (variance for normal, shape for gamma).
std::vector<ScenarioCase> expand(const Scenario& scenario);

}  // namespace poiseiv
