#include "ethde/response.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ethde/kernels.hpp"

namespace ethde {

std::vector<double> make_symmetric_grid(double max_abs_omega, int points_per_side) {
  std::vector<double> g;
  g.reserve(2 * points_per_side + 1);
  const double step = max_abs_omega / points_per_side;
  for (int i = -points_per_side; i <= points_per_side; ++i) g.push_back(i * step);
  return g;
}

double SpectralFunction::max_transition_frequency() const {
  return lehmann_omegas.empty() ? 0.0 : std::abs(lehmann_omegas.back());
}

SpectralFunction spectral_function(const EigenbasisObservable& obs,
                                   const InitialState& state,
                                   const std::vector<double>& grid, double eta) {
  if (state.kind == InitialState::Kind::eigenstate)
    throw std::invalid_argument(
        "spectral_function: eigenstate input is not stationary as a mixture; "
        "use the delta-kick series for eigenstates");
  if (eta <= 0) throw std::invalid_argument("spectral_function: eta > 0 required");
  if (state.weights.size() != obs.dim())
    throw DimensionError("spectral_function: state dimension mismatch");

  const Eigen::Index dim = obs.dim();
  const VectorR& E = obs.energies();
  const VectorR& p = state.weights;
  const MatrixC& O = obs.matrix();

  SpectralFunction out;
  out.grid = grid;
  out.eta = eta;
  out.state = state;

  // collect each (n,m) pair once as an exactly antisymmetric +-w couple
  std::vector<std::pair<double, double>> trans;
  for (Eigen::Index n = 0; n < dim; ++n) {
    for (Eigen::Index m = n + 1; m < dim; ++m) {
      double w = 2.0 * M_PI * (p(n) - p(m)) * std::norm(O(n, m));
      if (w == 0.0) continue;
      double omega = E(m) - E(n);
      trans.emplace_back(omega, w);
      trans.emplace_back(-omega, -w);
    }
  }
  std::sort(trans.begin(), trans.end());
  out.lehmann_omegas.reserve(trans.size());
  out.lehmann_weights.reserve(trans.size());
  for (auto& [omega, w] : trans) {
    out.lehmann_omegas.push_back(omega);
    out.lehmann_weights.push_back(w);
  }

  out.values = kernels::broaden_transitions(out.lehmann_omegas,
                                            out.lehmann_weights, grid, eta);
  return out;
}

Complex retarded_green(const SpectralFunction& spec, double omega) {
  double a = 0.0;
  const double inv = 1.0 / (spec.eta * std::sqrt(2.0 * M_PI));
  for (size_t i = 0; i < spec.lehmann_omegas.size(); ++i) {
    double z = (omega - spec.lehmann_omegas[i]) / spec.eta;
    if (std::abs(z) < 10.0)
      a += spec.lehmann_weights[i] * std::exp(-0.5 * z * z) * inv;
  }
  double re = 0.0;
  for (size_t i = 0; i < spec.lehmann_omegas.size(); ++i) {
    double d = omega - spec.lehmann_omegas[i];
    re += spec.lehmann_weights[i] * d / (d * d + spec.eta * spec.eta);
  }
  return Complex(re / (2.0 * M_PI), -0.5 * a);
}

std::vector<Complex> retarded_green_grid(const SpectralFunction& spec) {
  auto re = kernels::pole_sum_real(spec.lehmann_omegas, spec.lehmann_weights,
                                   spec.grid, spec.eta);
  std::vector<Complex> g(spec.grid.size());
  for (size_t i = 0; i < spec.grid.size(); ++i)
    g[i] = Complex(re[i], -0.5 * spec.values[i]);
  return g;
}

DeltaELinear delta_e_linear(const SpectralFunction& spec, const Pulse& pulse) {
  DeltaELinear out{0.0, 0.0};

  double required = spec.max_transition_frequency() + 5.0 * spec.eta;
  if (spec.grid.empty() || spec.grid.front() > -required ||
      spec.grid.back() < required)
    throw std::invalid_argument(
        "delta_e_linear: grid does not cover the spectral support; need at "
        "least [-" + std::to_string(required) + ", " + std::to_string(required) +
        "]");

  for (size_t i = 0; i < spec.lehmann_omegas.size(); ++i) {
    double w = spec.lehmann_omegas[i];
    if (w <= 0.0) continue;
    out.lehmann += w * std::norm(pulse.fourier(w)) * spec.lehmann_weights[i];
  }

  // Broadened route: the integrand w |lambda|^2 A is even, so integrate the
  // whole symmetric grid and halve; broadening leakage across w = 0 then
  // cancels instead of biasing the result.
  std::vector<double> f(spec.grid.size());
  for (size_t i = 0; i < spec.grid.size(); ++i)
    f[i] = spec.grid[i] * std::norm(pulse.fourier(spec.grid[i])) * spec.values[i];
  double acc = 0.0;
  for (size_t i = 0; i + 1 < spec.grid.size(); ++i)
    acc += 0.5 * (f[i] + f[i + 1]) * (spec.grid[i + 1] - spec.grid[i]);
  out.broadened = 0.5 * acc;
  return out;
}

}  // namespace ethde
