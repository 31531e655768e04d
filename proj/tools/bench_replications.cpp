// Benchmark: serial reference replication loop versus the OpenMP-parallel
// one, checking that both produce identical reports.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "poiseiv/sim_harness.hpp"

namespace {

using namespace poiseiv;

double run_ms(const std::function<SimReport()>& fn, SimReport& out) {
  const auto start = std::chrono::steady_clock::now();
  out = fn();
  const auto stop = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(stop - start).count();
}

bool same_report(const SimReport& a, const SimReport& b) {
  return std::memcmp(&a.bias_naive, &b.bias_naive, sizeof(Vec2)) == 0 &&
         std::memcmp(&a.bias_corrected, &b.bias_corrected, sizeof(Vec2)) == 0 &&
         std::memcmp(&a.mse_naive, &b.mse_naive, sizeof(Mat2)) == 0 &&
         std::memcmp(&a.mse_corrected, &b.mse_corrected, sizeof(Mat2)) == 0 &&
         a.failed_replications == b.failed_replications;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Replication-loop benchmark: serial reference vs OpenMP"};
  std::size_t n = 500;
  std::size_t mc = 4000;
  app.add_option("--n", n, "sample size per replication")->capture_default_str();
  app.add_option("--mc", mc, "replication count")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  const SimConfig config{
      .model = {DistSpec::gamma(2.0, 1.2), DistSpec::normal(0.0, 0.5), {0.2, 0.3}},
      .n = n,
      .mc = mc,
      .seed = 987654321,
      .nuisance = NuisanceMode::moment,
      .error_param = 0.5,
  };

  std::printf("replications: %zu, sample size: %zu\n", mc, n);

  SimReport reference;
  const double serial_ms = run_ms([&] { return run_monte_carlo_serial(config); }, reference);
  std::printf("serial reference: %10.1f ms\n", serial_ms);

#ifdef _OPENMP
  const int max_threads = omp_get_max_threads();
#else
  const int max_threads = 1;
  std::printf("(built without OpenMP; parallel path runs serially)\n");
#endif

  std::printf("%8s %12s %9s %10s\n", "threads", "time_ms", "speedup", "identical");
  for (int t = 1; t <= max_threads; t *= 2) {
    SimReport parallel;
    const double ms = run_ms([&] { return run_monte_carlo(config, t); }, parallel);
    std::printf("%8d %12.1f %9.2f %10s\n", t, ms, serial_ms / ms,
                same_report(reference, parallel) ? "yes" : "NO");
  }
  return 0;
}
