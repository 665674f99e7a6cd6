// Timing comparison of the serial reference kernels against the OpenMP
// variants, plus a bitwise agreement check on the shared workload.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#include "ethde/kernels.hpp"

using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = Clock::now();
    f();
    best = std::min(best, ms_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int threads = argc > 1 ? std::atoi(argv[1]) : 4;
  ethde::kernels::set_threads(threads);

  std::mt19937_64 rng(12345);
  std::normal_distribution<double> gauss(0.0, 3.0);

  const int n_samples = 200000, n_grid = 4096;
  std::vector<double> samples(n_samples), weights(n_samples), grid(n_grid);
  for (auto& s : samples) s = gauss(rng);
  std::sort(samples.begin(), samples.end());
  for (auto& w : weights) w = gauss(rng);
  for (int i = 0; i < n_grid; ++i) grid[i] = -12.0 + 24.0 * i / (n_grid - 1);
  const double h = 0.05;

  struct Case {
    const char* name;
    std::vector<double> (*serial)(const std::vector<double>&,
                                  const std::vector<double>&,
                                  const std::vector<double>&, double);
    std::vector<double> (*omp)(const std::vector<double>&,
                               const std::vector<double>&,
                               const std::vector<double>&, double);
  };

  std::printf("%-22s %10s %10s %8s  %s\n", "kernel", "serial ms", "omp ms",
              "speedup", "bitwise");

  // kde_density has a different arity; handle it first
  {
    std::vector<double> a, b;
    double ts = time_best_of(
        3, [&] { a = ethde::kernels::serial::kde_density(samples, grid, h); });
    ethde::kernels::set_backend(ethde::kernels::Backend::openmp);
    double tp =
        time_best_of(3, [&] { b = ethde::kernels::kde_density(samples, grid, h); });
    std::printf("%-22s %10.2f %10.2f %8.2f  %s\n", "kde_density", ts, tp, ts / tp,
                a == b ? "yes" : "NO");
  }

  const Case cases[] = {
      {"broaden_transitions", &ethde::kernels::serial::broaden_transitions,
       &ethde::kernels::broaden_transitions},
      {"pole_sum_real", &ethde::kernels::serial::pole_sum_real,
       &ethde::kernels::pole_sum_real},
  };
  for (const auto& c : cases) {
    std::vector<double> a, b;
    double ts = time_best_of(3, [&] { a = c.serial(samples, weights, grid, h); });
    double tp = time_best_of(3, [&] { b = c.omp(samples, weights, grid, h); });
    std::printf("%-22s %10.2f %10.2f %8.2f  %s\n", c.name, ts, tp, ts / tp,
                a == b ? "yes" : "NO");
  }
  return 0;
}
