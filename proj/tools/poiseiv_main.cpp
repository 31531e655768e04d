// Command-line front end: naive fitting with optional bias correction,
// theoretical asymptotic bias, and seeded Monte Carlo simulation.
//
// Exit codes: 0 success; 2 usage/parse/configuration errors; 3 data-dependent
// estimation failures (non-convergence, all-zero counts, infeasible
// correction, degenerate moments, exponent overflow, excessive replication
// failures). Only the result document goes to standard output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "poiseiv/dataset.hpp"
#include "poiseiv/errors.hpp"
#include "poiseiv/report.hpp"
#include "poiseiv/scenario.hpp"

namespace {

using namespace poiseiv;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file '" + out_path + "'");
  out << text << "\n";
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file '" + path + "'");
  out << text;
}

struct FitArgs {
  std::string csv_path;
  std::string x_law;
  std::string u_law;
  bool correct = false;
  std::string nuisance = "known";
  std::optional<double> error_param;
  double tol = 1e-10;
  int max_iter = 100;
  std::string out_path;
};

int run_fit(const FitArgs& args) {
  Dataset data = [&] {
    try {
      return read_dataset_csv_file(args.csv_path);
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("invalid dataset: ") + e.what());
    }
  }();

  std::optional<DistSpec> x_law, u_law;
  if (args.correct) {
    x_law = parse_dist_spec(args.x_law);
    u_law = parse_dist_spec(args.u_law);
    if (args.nuisance == "moment" && x_law->kind() != DistKind::gamma)
      throw ConfigError("moment nuisance estimation fits a gamma covariate; --x must be gamma");
  }

  FitOptions fit_options;
  fit_options.tol = args.tol;
  fit_options.max_iter = args.max_iter;
  const NaiveEstimate naive = fit_naive(data, fit_options);

  int exit_code = 0;
  std::optional<CorrectedEstimate> corrected;
  std::optional<MomentEstimate> moments;
  if (!naive.converged) {
    std::cerr << "error: naive fit did not converge after " << naive.iterations
              << " iterations (score norm " << format_full(naive.score_norm) << ")\n";
    exit_code = 3;
  } else if (args.correct) {
    try {
      DistSpec x_used = *x_law;
      DistSpec u_used = *u_law;
      if (args.nuisance == "moment") {
        switch (u_law->kind()) {
          case DistKind::normal: {
            const double sigma2 = args.error_param.value_or(u_law->normal_variance());
            moments = estimate_nuisance_normal_error(data.w(), sigma2);
            x_used = DistSpec::gamma(moments->shape, moments->rate);
            u_used = DistSpec::normal(0.0, sigma2);
            break;
          }
          case DistKind::gamma: {
            const double shape = args.error_param.value_or(u_law->gamma_shape());
            moments = estimate_nuisance_gamma_error(data.w(), shape);
            x_used = DistSpec::gamma(moments->shape, moments->rate);
            u_used = DistSpec::gamma(shape, moments->rate);
            break;
          }
          case DistKind::degenerate_zero: {
            moments = estimate_nuisance_normal_error(data.w(), 0.0);
            x_used = DistSpec::gamma(moments->shape, moments->rate);
            u_used = DistSpec::degenerate_zero();
            break;
          }
        }
      }
      corrected = correct_estimate(naive, x_used, u_used);
    } catch (const Error& e) {
      std::cerr << "error: correction infeasible: " << e.what() << "\n";
      exit_code = 3;
    }
  }

  JsonWriter json;
  json.begin_object();
  json.key("schema_version").value(1);
  json.key("command").value("fit");
  json.key("input").value(args.csv_path);
  json.key("n").value(static_cast<std::uint64_t>(data.size()));
  json.key("naive").begin_object();
  json.key("beta0").value(naive.params.beta0);
  json.key("beta1").value(naive.params.beta1);
  json.key("iterations").value(naive.iterations);
  json.key("converged").value(naive.converged);
  json.key("score_norm").value(naive.score_norm);
  json.end_object();
  if (corrected) {
    json.key("corrected").begin_object();
    json.key("beta0").value(corrected->params.beta0);
    json.key("beta1").value(corrected->params.beta1);
    json.key("closed_form").value(corrected->closed_form);
    json.key("inversion_iterations").value(corrected->inversion_iterations);
    json.key("x_used").value(format_dist_spec(corrected->x_used));
    json.key("u_used").value(format_dist_spec(corrected->u_used));
    json.key("nuisance_mode").value(args.nuisance);
    if (moments) {
      json.key("moment_estimate").begin_object();
      json.key("shape").value(moments->shape);
      json.key("rate").value(moments->rate);
      json.end_object();
    }
    json.end_object();
  }
  json.end_object();
  emit(json.str(), args.out_path);
  return exit_code;
}

struct BiasArgs {
  std::string x_law;
  std::string u_law;
  double beta0 = 0.0;
  double beta1 = 0.0;
  std::string out_path;
};

int run_bias(const BiasArgs& args) {
  const DistSpec x = parse_dist_spec(args.x_law);
  const DistSpec u = parse_dist_spec(args.u_law);
  const EivModel model{x, u, {args.beta0, args.beta1}};
  const SlopeLimitDetail detail = naive_slope_limit_detail(x, u, args.beta1);
  const BiasReport report = naive_limit(model);

  JsonWriter json;
  json.begin_object();
  json.key("schema_version").value(1);
  json.key("command").value("bias");
  json.key("x").value(format_dist_spec(x));
  json.key("u").value(format_dist_spec(u));
  json.key("beta0").value(args.beta0);
  json.key("beta1").value(args.beta1);
  json.key("limit").begin_object();
  json.key("beta0").value(report.limit.beta0);
  json.key("beta1").value(report.limit.beta1);
  json.end_object();
  json.key("asy_bias").begin_object();
  json.key("beta0").value(report.bias.c0);
  json.key("beta1").value(report.bias.c1);
  json.end_object();
  json.key("asy_mse").begin_object();
  json.key("beta0").value(report.asy_mse.c0);
  json.key("beta1").value(report.asy_mse.c1);
  json.end_object();
  json.key("method").begin_object();
  json.key("closed_form").value(detail.closed_form);
  json.key("iterations").value(detail.iterations);
  json.end_object();
  json.end_object();
  emit(json.str(), args.out_path);
  return 0;
}

struct SimulateArgs {
  std::string scenario_path;
  std::string out_path;
  std::string report_path;
  int threads = 0;
  std::optional<std::uint64_t> seed;
};

void print_human_table(const Scenario& scenario, const std::vector<LabeledRows>& cases) {
  for (const auto& c : cases) {
    const std::size_t failed = c.rows.empty() ? 0 : c.rows.front().failed;
    std::printf("u = %s   (n=%zu, mc=%zu, nuisance=%s, failed=%zu)\n", c.label.c_str(),
                scenario.n, scenario.mc,
                scenario.nuisance == NuisanceMode::moment ? "moment" : "known", failed);
    std::printf("  %-10s %12s %12s %12s %12s %12s %12s %12s %12s\n", "estimator", "asy.bias b0",
                "mc.bias b0", "asy.bias b1", "mc.bias b1", "asy.mse b0", "mc.mse b0",
                "asy.mse b1", "mc.mse b1");
    for (const auto& row : c.rows) {
      std::printf("  %-10s %12s %12s %12s %12s %12s %12s %12s %12s\n", row.estimator.c_str(),
                  format_brief(row.asy_bias.c0).c_str(), format_brief(row.mc_bias.c0).c_str(),
                  format_brief(row.asy_bias.c1).c_str(), format_brief(row.mc_bias.c1).c_str(),
                  format_brief(row.asy_mse.c0).c_str(), format_brief(row.mc_mse.c0).c_str(),
                  format_brief(row.asy_mse.c1).c_str(), format_brief(row.mc_mse.c1).c_str());
    }
    std::printf("\n");
  }
}

std::string report_json(const std::string& scenario_path, const Scenario& scenario,
                        const std::vector<ScenarioCase>& cases,
                        const std::vector<LabeledRows>& results) {
  JsonWriter json;
  json.begin_object();
  json.key("schema_version").value(1);
  json.key("command").value("simulate");
  json.key("scenario").value(scenario_path);
  json.key("seed").value(scenario.seed);
  json.key("n").value(static_cast<std::uint64_t>(scenario.n));
  json.key("mc").value(static_cast<std::uint64_t>(scenario.mc));
  json.key("x").value(format_dist_spec(scenario.x));
  json.key("nuisance_mode").value(scenario.nuisance == NuisanceMode::moment ? "moment" : "known");
  json.key("cases").begin_array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    json.begin_object();
    json.key("u").value(results[i].label);
    json.key("seed").value(cases[i].config.seed);
    json.key("rows").begin_array();
    for (const auto& row : results[i].rows) {
      json.begin_object();
      json.key("estimator").value(row.estimator);
      json.key("asy_bias_beta0").value(row.asy_bias.c0);
      json.key("asy_bias_beta1").value(row.asy_bias.c1);
      json.key("mc_bias_beta0").value(row.mc_bias.c0);
      json.key("mc_bias_beta1").value(row.mc_bias.c1);
      json.key("asy_mse_beta0").value(row.asy_mse.c0);
      json.key("asy_mse_beta1").value(row.asy_mse.c1);
      json.key("mc_mse_beta0").value(row.mc_mse.c0);
      json.key("mc_mse_beta1").value(row.mc_mse.c1);
      json.key("mc_se_beta0").value(row.mc_se.c0);
      json.key("mc_se_beta1").value(row.mc_se.c1);
      json.key("successful").value(static_cast<std::uint64_t>(row.successful));
      json.key("failed").value(static_cast<std::uint64_t>(row.failed));
      json.end_object();
    }
    json.end_array();
    json.end_object();
  }
  json.end_array();
  json.end_object();
  return json.str();
}

int run_simulate(const SimulateArgs& args) {
  Scenario scenario = parse_scenario_file(args.scenario_path);
  if (args.seed) scenario.seed = *args.seed;
  const std::vector<ScenarioCase> cases = expand(scenario);

  std::vector<LabeledRows> results;
  results.reserve(cases.size());
  for (const auto& c : cases) {
    results.push_back({c.label, compare_with_theory(c.config, args.threads)});
  }

  write_file(args.out_path, theory_table_csv(results));
  if (!args.report_path.empty())
    write_file(args.report_path, report_json(args.scenario_path, scenario, cases, results) + "\n");
  print_human_table(scenario, results);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Poisson regression with a mismeasured covariate: naive estimator, asymptotic "
               "bias, bias-corrected estimator and Monte Carlo studies"};
  app.require_subcommand(1);

  FitArgs fit_args;
  auto* fit_cmd = app.add_subcommand("fit", "Fit the naive estimator from a y,w CSV file, "
                                            "optionally applying the bias correction");
  fit_cmd->add_option("csv", fit_args.csv_path, "input CSV with a 'y,w' header")->required();
  auto* fit_x = fit_cmd->add_option("--x", fit_args.x_law,
                                    "covariate law (gamma:<shape>:<rate>, "
                                    "normal:<mean>:<variance>, degenerate)");
  auto* fit_u = fit_cmd->add_option("--u", fit_args.u_law, "error law");
  auto* fit_correct = fit_cmd->add_flag("--correct", fit_args.correct,
                                        "apply the bias correction (requires --x and --u)");
  fit_correct->needs(fit_x)->needs(fit_u);
  fit_cmd->add_option("--nuisance", fit_args.nuisance, "covariate law source for the correction")
      ->check(CLI::IsMember({"known", "moment"}))
      ->capture_default_str();
  fit_cmd->add_option("--error-param", fit_args.error_param,
                      "known error parameter for moment estimation (variance for a normal "
                      "error, shape for a gamma error); defaults to the value in --u");
  fit_cmd->add_option("--tol", fit_args.tol, "score norm tolerance")->capture_default_str();
  fit_cmd->add_option("--max-iter", fit_args.max_iter, "Newton iteration cap")
      ->capture_default_str();
  fit_cmd->add_option("--out", fit_args.out_path, "write the JSON report here instead of stdout");

  BiasArgs bias_args;
  auto* bias_cmd =
      app.add_subcommand("bias", "Asymptotic bias and MSE of the naive estimator for a model");
  bias_cmd->add_option("--x", bias_args.x_law, "covariate law")->required();
  bias_cmd->add_option("--u", bias_args.u_law, "error law")->required();
  bias_cmd->add_option("--beta0", bias_args.beta0, "true intercept")->required();
  bias_cmd->add_option("--beta1", bias_args.beta1, "true slope")->required();
  bias_cmd->add_option("--out", bias_args.out_path, "write the JSON report here instead of stdout");

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a Monte Carlo scenario file and compare "
                                                 "estimates with the asymptotic theory");
  sim_cmd->add_option("scenario", sim_args.scenario_path, "scenario file")->required();
  sim_cmd->add_option("--out", sim_args.out_path, "output CSV table")->required();
  sim_cmd->add_option("--report", sim_args.report_path, "also write a JSON report");
  sim_cmd->add_option("--threads", sim_args.threads,
                      "worker threads for replications (0 = all available)")
      ->capture_default_str();
  sim_cmd->add_option("--seed", sim_args.seed, "override the scenario master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (fit_cmd->parsed()) return run_fit(fit_args);
    if (bias_cmd->parsed()) return run_bias(bias_args);
    return run_simulate(sim_args);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    // For fit the domain breach is a property of the sample, not the inputs.
    return fit_cmd->parsed() ? 3 : 2;
  } catch (const NoRootError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return fit_cmd->parsed() ? 3 : 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const AllZeroCountsError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
