#pragma once

#include <vector>

#include "ethde/linalg.hpp"

// Data-parallel inner loops shared by the spectral, statistics and series
// code paths. Every kernel has a serial reference and an OpenMP variant that
// partitions over independent output elements only, so results are
// bit-identical for any thread count. bench_kernels compares the two.

namespace ethde::kernels {

enum class Backend { serial, openmp };

Backend backend();
void set_backend(Backend b);
void set_threads(int n);
int threads();

/// Gaussian kernel density of the samples at each evaluation point:
/// rho(x) = sum_i exp(-(x-s_i)^2 / (2h^2)) / (h sqrt(2 pi)).
/// Samples must be sorted ascending; the kernel is truncated at 10h.
std::vector<double> kde_density(const std::vector<double>& sorted_samples,
                                const std::vector<double>& eval_points, double h);

/// Accumulates unit-mass Gaussian-broadened transition weights on a grid:
/// out(w) = sum_i weight_i * g_eta(w - omega_i), truncated at 10 eta.
/// Transitions must be sorted ascending in omega.
std::vector<double> broaden_transitions(const std::vector<double>& sorted_omegas,
                                        const std::vector<double>& weights,
                                        const std::vector<double>& grid,
                                        double eta);

/// Pole sum for the real part of the retarded Green's function:
/// out(w) = sum_i (weight_i / 2 pi) (w - omega_i) / ((w - omega_i)^2 + eta^2).
std::vector<double> pole_sum_real(const std::vector<double>& omegas,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& grid, double eta);

// Explicit serial references (exposed for tests and the benchmark).
namespace serial {
std::vector<double> kde_density(const std::vector<double>& sorted_samples,
                                const std::vector<double>& eval_points, double h);
std::vector<double> broaden_transitions(const std::vector<double>& sorted_omegas,
                                        const std::vector<double>& weights,
                                        const std::vector<double>& grid,
                                        double eta);
std::vector<double> pole_sum_real(const std::vector<double>& omegas,
                                  const std::vector<double>& weights,
                                  const std::vector<double>& grid, double eta);
}  // namespace serial

}  // namespace ethde::kernels
