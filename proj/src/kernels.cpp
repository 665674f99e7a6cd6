#include "ethde/kernels.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>

namespace ethde::kernels {

namespace {
Backend g_backend = Backend::openmp;
constexpr double kCutoffSigmas = 10.0;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}  // namespace

Backend backend() { return g_backend; }
void set_backend(Backend b) { g_backend = b; }
void set_threads(int n) { omp_set_num_threads(n); }
int threads() { return omp_get_max_threads(); }

namespace serial {

std::vector<double> kde_density(const std::vector<double>& s,
                                const std::vector<double>& x, double h) {
  std::vector<double> out(x.size(), 0.0);
  const double cut = kCutoffSigmas * h;
  const double norm = kInvSqrt2Pi / h;
  for (size_t p = 0; p < x.size(); ++p) {
    auto lo = std::lower_bound(s.begin(), s.end(), x[p] - cut);
    auto hi = std::upper_bound(s.begin(), s.end(), x[p] + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      double z = (x[p] - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[p] = acc * norm;
  }
  return out;
}

std::vector<double> broaden_transitions(const std::vector<double>& w,
                                        const std::vector<double>& wt,
                                        const std::vector<double>& grid,
                                        double eta) {
  std::vector<double> out(grid.size(), 0.0);
  const double cut = kCutoffSigmas * eta;
  const double norm = kInvSqrt2Pi / eta;
  for (size_t p = 0; p < grid.size(); ++p) {
    auto lo = std::lower_bound(w.begin(), w.end(), grid[p] - cut);
    auto hi = std::upper_bound(w.begin(), w.end(), grid[p] + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      double z = (grid[p] - *it) / eta;
      acc += wt[it - w.begin()] * std::exp(-0.5 * z * z);
    }
    out[p] = acc * norm;
  }
  return out;
}

std::vector<double> pole_sum_real(const std::vector<double>& w,
                                  const std::vector<double>& wt,
                                  const std::vector<double>& grid, double eta) {
  std::vector<double> out(grid.size(), 0.0);
  const double inv2pi = 1.0 / (2.0 * M_PI);
  for (size_t p = 0; p < grid.size(); ++p) {
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      double d = grid[p] - w[i];
      acc += wt[i] * d / (d * d + eta * eta);
    }
    out[p] = acc * inv2pi;
  }
  return out;
}

}  // namespace serial

// OpenMP variants parallelize over grid points; the per-point reduction
// order matches the serial code exactly.

std::vector<double> kde_density(const std::vector<double>& s,
                                const std::vector<double>& x, double h) {
  if (g_backend == Backend::serial) return serial::kde_density(s, x, h);
  std::vector<double> out(x.size(), 0.0);
  const double cut = kCutoffSigmas * h;
  const double norm = kInvSqrt2Pi / h;
#pragma omp parallel for schedule(static)
  for (long p = 0; p < static_cast<long>(x.size()); ++p) {
    auto lo = std::lower_bound(s.begin(), s.end(), x[p] - cut);
    auto hi = std::upper_bound(s.begin(), s.end(), x[p] + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      double z = (x[p] - *it) / h;
      acc += std::exp(-0.5 * z * z);
    }
    out[p] = acc * norm;
  }
  return out;
}

std::vector<double> broaden_transitions(const std::vector<double>& w,
                                        const std::vector<double>& wt,
                                        const std::vector<double>& grid,
                                        double eta) {
  if (g_backend == Backend::serial)
    return serial::broaden_transitions(w, wt, grid, eta);
  std::vector<double> out(grid.size(), 0.0);
  const double cut = kCutoffSigmas * eta;
  const double norm = kInvSqrt2Pi / eta;
#pragma omp parallel for schedule(static)
  for (long p = 0; p < static_cast<long>(grid.size()); ++p) {
    auto lo = std::lower_bound(w.begin(), w.end(), grid[p] - cut);
    auto hi = std::upper_bound(w.begin(), w.end(), grid[p] + cut);
    double acc = 0.0;
    for (auto it = lo; it != hi; ++it) {
      double z = (grid[p] - *it) / eta;
      acc += wt[it - w.begin()] * std::exp(-0.5 * z * z);
    }
    out[p] = acc * norm;
  }
  return out;
}

std::vector<double> pole_sum_real(const std::vector<double>& w,
                                  const std::vector<double>& wt,
                                  const std::vector<double>& grid, double eta) {
  if (g_backend == Backend::serial) return serial::pole_sum_real(w, wt, grid, eta);
  std::vector<double> out(grid.size(), 0.0);
  const double inv2pi = 1.0 / (2.0 * M_PI);
#pragma omp parallel for schedule(static)
  for (long p = 0; p < static_cast<long>(grid.size()); ++p) {
    double acc = 0.0;
    for (size_t i = 0; i < w.size(); ++i) {
      double d = grid[p] - w[i];
      acc += wt[i] * d / (d * d + eta * eta);
    }
    out[p] = acc * inv2pi;
  }
  return out;
}

}  // namespace ethde::kernels
