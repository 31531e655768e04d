#include "poiseiv/scenario.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>

#include "poiseiv/errors.hpp"

namespace poiseiv {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

[[noreturn]] void fail(std::size_t lineno, const std::string& what) {
  throw ParseError("scenario line " + std::to_string(lineno) + ": " + what);
}

template <class T>
T parse_integral(std::string_view token, std::size_t lineno, const char* key) {
  T out{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    fail(lineno, std::string(key) + ": '" + std::string(token) + "' is not a valid integer");
  return out;
}

double parse_real(std::string_view token, std::size_t lineno, const char* key) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), out);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty())
    fail(lineno, std::string(key) + ": '" + std::string(token) + "' is not a valid number");
  return out;
}

}  // namespace

Scenario parse_scenario(std::istream& in) {
  Scenario sc;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;

  auto once = [&](const std::string& key, std::size_t at) {
    if (!seen.insert(key).second) fail(at, "duplicate key '" + key + "'");
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
    const std::string key(trim(body.substr(0, eq)));
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty() || value.empty()) fail(lineno, "expected 'key = value'");

    if (key == "schema_version") {
      once(key, lineno);
      sc.schema_version = parse_integral<int>(value, lineno, "schema_version");
      if (sc.schema_version != 1)
        fail(lineno, "unsupported schema_version " + std::to_string(sc.schema_version));
    } else if (key == "seed") {
      once(key, lineno);
      sc.seed = parse_integral<std::uint64_t>(value, lineno, "seed");
    } else if (key == "n") {
      once(key, lineno);
      sc.n = parse_integral<std::size_t>(value, lineno, "n");
    } else if (key == "mc") {
      once(key, lineno);
      sc.mc = parse_integral<std::size_t>(value, lineno, "mc");
    } else if (key == "beta0") {
      once(key, lineno);
      sc.beta.beta0 = parse_real(value, lineno, "beta0");
    } else if (key == "beta1") {
      once(key, lineno);
      sc.beta.beta1 = parse_real(value, lineno, "beta1");
    } else if (key == "x") {
      once(key, lineno);
      try {
        sc.x = parse_dist_spec(value);
      } catch (const std::exception& e) {
        fail(lineno, e.what());
      }
    } else if (key == "u") {
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view token =
            trim(comma == std::string_view::npos ? rest : rest.substr(0, comma));
        if (token.empty()) fail(lineno, "empty entry in the error law list");
        try {
          sc.errors.emplace_back(std::string(token), parse_dist_spec(token));
        } catch (const std::exception& e) {
          fail(lineno, e.what());
        }
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    } else if (key == "nuisance") {
      once(key, lineno);
      if (value == "known") {
        sc.nuisance = NuisanceMode::known;
      } else if (value == "moment") {
        sc.nuisance = NuisanceMode::moment;
      } else {
        fail(lineno, "nuisance must be 'known' or 'moment'");
      }
    } else {
      fail(lineno, "unknown key '" + key + "'");
    }
  }

  for (const char* required :
       {"schema_version", "seed", "n", "mc", "beta0", "beta1", "x", "nuisance"}) {
    if (!seen.count(required))
      throw ParseError(std::string("scenario is missing required key '") + required + "'");
  }
  if (sc.errors.empty()) throw ParseError("scenario declares no error law 'u'");
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return parse_scenario(in);
}

std::vector<ScenarioCase> expand(const Scenario& scenario) {
  std::vector<ScenarioCase> cases;
  cases.reserve(scenario.errors.size());
  for (std::size_t i = 0; i < scenario.errors.size(); ++i) {
    const auto& [label, law] = scenario.errors[i];
    SimConfig config{
        .model = {scenario.x, law, scenario.beta},
        .n = scenario.n,
        .mc = scenario.mc,
        .seed = scenario.seed + i,
        .nuisance = scenario.nuisance,
        .error_param = std::nullopt,
    };
    if (scenario.nuisance == NuisanceMode::moment) {
      switch (law.kind()) {
        case DistKind::normal:
          config.error_param = law.normal_variance();
          break;
        case DistKind::gamma:
          config.error_param = law.gamma_shape();
          break;
        case DistKind::degenerate_zero:
          break;
      }
    }
    cases.push_back({label, std::move(config)});
  }
  return cases;
}

}  // namespace poiseiv
