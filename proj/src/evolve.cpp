#include "ethde/evolve.hpp"

#include <cmath>
#include <stdexcept>

namespace ethde {

double EvolutionConfig::resolve_dt(double max_abs_energy, double support) const {
  if (support <= 0)
    throw std::invalid_argument("resolve_dt: pulse support must be positive");
  double step = dt;
  if (step <= 0.0) step = 0.01 / std::max(max_abs_energy, 1e-12);
  int steps = std::max(1, static_cast<int>(std::ceil(support / step - 1e-9)));
  step = support / steps;
  if (step * max_abs_energy > 0.1 + 1e-12)
    throw std::invalid_argument("resolve_dt: dt * max|E| > 0.1, unresolved phases");
  return step;
}

KickOperator::KickOperator(const EigenbasisObservable& obs) {
  HermitianMatrix O(obs.matrix());
  Eigensystem eig = diagonalize(O);
  d = eig.energies;
  V = eig.basis;
  E = obs.energies();
}

MatrixC KickOperator::apply(double theta, const MatrixC& columns) const {
  if (columns.rows() != dim())
    throw DimensionError("KickOperator::apply: dimension mismatch");
  MatrixC w = V.adjoint() * columns;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index k = 0; k < w.rows(); ++k)
      w(k, j) *= std::exp(Complex(0.0, -theta * d(k)));
  return V * w;
}

namespace {

VectorR column_delta_e(const MatrixC& columns, const VectorR& E,
                       const std::vector<Eigen::Index>& states) {
  VectorR de(static_cast<Eigen::Index>(states.size()));
  for (size_t j = 0; j < states.size(); ++j) {
    double e = 0.0;
    for (Eigen::Index k = 0; k < E.size(); ++k)
      e += E(k) * std::norm(columns(k, static_cast<Eigen::Index>(j)));
    de(static_cast<Eigen::Index>(j)) = e - E(states[j]);
  }
  return de;
}

MatrixC basis_columns(Eigen::Index dim, const std::vector<Eigen::Index>& states) {
  MatrixC cols = MatrixC::Zero(dim, static_cast<Eigen::Index>(states.size()));
  for (size_t j = 0; j < states.size(); ++j) {
    if (states[j] < 0 || states[j] >= dim)
      throw std::invalid_argument("state index out of range");
    cols(states[j], static_cast<Eigen::Index>(j)) = 1.0;
  }
  return cols;
}

std::vector<Eigen::Index> all_states(Eigen::Index dim) {
  std::vector<Eigen::Index> s(dim);
  for (Eigen::Index n = 0; n < dim; ++n) s[n] = n;
  return s;
}

}  // namespace

UnitaryMatrix kick_evolve(const HermitianMatrix& H0, const HermitianMatrix& O,
                          double lambda) {
  if (H0.dim() != O.dim()) throw DimensionError("kick_evolve: dimension mismatch");
  return unitary_from_hermitian(O, lambda);
}

double delta_e_exact(const UnitaryMatrix& U, const InitialState& state,
                     const HermitianMatrix& H0, const Eigensystem& eig) {
  if (U.dim() != eig.dim() || H0.dim() != eig.dim())
    throw DimensionError("delta_e_exact: dimension mismatch");
  const Eigen::Index dim = eig.dim();

  auto energy_after = [&](Eigen::Index n) {
    VectorC psi = U.mat() * eig.basis.col(n);
    VectorC comp = eig.basis.adjoint() * psi;
    double e = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k)
      e += eig.energies(k) * std::norm(comp(k));
    return e;
  };

  if (state.kind == InitialState::Kind::eigenstate)
    return energy_after(state.index) - eig.energies(state.index);

  if (state.weights.size() != dim)
    throw DimensionError("delta_e_exact: state dimension mismatch");
  // rotate once: W = V^dag U V, then per-column weighted sums
  MatrixC W = eig.basis.adjoint() * (U.mat() * eig.basis);
  double acc = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n) {
    if (state.weights(n) == 0.0) continue;
    double e = 0.0;
    for (Eigen::Index k = 0; k < dim; ++k)
      e += eig.energies(k) * std::norm(W(k, n));
    acc += state.weights(n) * (e - eig.energies(n));
  }
  return acc;
}

VectorR delta_e_kick(const KickOperator& kick, double lambda,
                     const std::vector<Eigen::Index>& states) {
  // columns of e^{-i lambda O} for the selected states only: thin GEMM
  // against the conjugated eigenvector rows
  MatrixC sel(kick.dim(), static_cast<Eigen::Index>(states.size()));
  for (size_t j = 0; j < states.size(); ++j) {
    if (states[j] < 0 || states[j] >= kick.dim())
      throw std::invalid_argument("delta_e_kick: state index out of range");
    sel.col(static_cast<Eigen::Index>(j)) = kick.V.row(states[j]).adjoint();
  }
  for (Eigen::Index j = 0; j < sel.cols(); ++j)
    for (Eigen::Index k = 0; k < sel.rows(); ++k)
      sel(k, j) *= std::exp(Complex(0.0, -lambda * kick.d(k)));
  MatrixC cols = kick.V * sel;
  return column_delta_e(cols, kick.E, states);
}

double delta_e_kick_state(const KickOperator& kick, double lambda,
                          const InitialState& state) {
  if (state.kind == InitialState::Kind::eigenstate) {
    VectorR de = delta_e_kick(kick, lambda, {state.index});
    return de(0);
  }
  if (state.weights.size() != kick.dim())
    throw DimensionError("delta_e_kick_state: state dimension mismatch");
  VectorR de = delta_e_kick(kick, lambda, all_states(kick.dim()));
  double acc = 0.0;
  for (Eigen::Index n = 0; n < kick.dim(); ++n) acc += state.weights(n) * de(n);
  return acc;
}

double kick_commutator_response(const EigenbasisObservable& obs, double lambda,
                                const VectorR& weights) {
  const Eigen::Index dim = obs.dim();
  if (weights.size() != dim)
    throw DimensionError("kick_commutator_response: weight dimension mismatch");
  const VectorR& E = obs.energies();
  const MatrixC& O = obs.matrix();

  MatrixC B(dim, dim);  // [H0, O] in the eigenbasis
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) B(i, j) = (E(i) - E(j)) * O(i, j);

  KickOperator kick(obs);
  MatrixC C = kick.apply(lambda, MatrixC::Identity(dim, dim));  // e^{-i lambda O}
  MatrixC M = C.adjoint() * B * C;

  double acc = 0.0;
  for (Eigen::Index n = 0; n < dim; ++n)
    acc += weights(n) * std::real(Complex(0.0, -lambda) * M(n, n));
  return acc;
}

PulseEvolution pulse_evolve(const EigenbasisObservable& obs, const Pulse& pulse,
                            const std::vector<Eigen::Index>& states,
                            const EvolutionConfig& cfg) {
  const VectorR& E = obs.energies();
  double max_e = std::max(std::abs(E(0)), std::abs(E(E.size() - 1)));
  double support = pulse.support();
  double dt = cfg.resolve_dt(max_e, support);
  int steps = static_cast<int>(std::lround(support / dt));

  KickOperator kick(obs);
  MatrixC psi = basis_columns(obs.dim(), states);

  auto phase = [&](double tau) {
    for (Eigen::Index j = 0; j < psi.cols(); ++j)
      for (Eigen::Index k = 0; k < psi.rows(); ++k)
        psi(k, j) *= std::exp(Complex(0.0, -tau * E(k)));
  };

  phase(0.5 * dt);
  for (int s = 0; s < steps; ++s) {
    double lam = pulse.evaluate((s + 0.5) * dt);
    psi = kick.apply(lam * dt, psi);
    phase(s + 1 < steps ? dt : 0.5 * dt);
  }

  PulseEvolution out;
  out.delta_e = column_delta_e(psi, E, states);
  out.columns = std::move(psi);
  out.steps = steps;
  out.dt = dt;
  return out;
}

double delta_e_pulse_state(const EigenbasisObservable& obs, const Pulse& pulse,
                           const InitialState& state,
                           const EvolutionConfig& cfg) {
  if (state.kind == InitialState::Kind::eigenstate) {
    PulseEvolution ev = pulse_evolve(obs, pulse, {state.index}, cfg);
    return ev.delta_e(0);
  }
  if (state.weights.size() != obs.dim())
    throw DimensionError("delta_e_pulse_state: state dimension mismatch");
  PulseEvolution ev = pulse_evolve(obs, pulse, all_states(obs.dim()), cfg);
  double acc = 0.0;
  for (Eigen::Index n = 0; n < obs.dim(); ++n)
    acc += state.weights(n) * ev.delta_e(n);
  return acc;
}

}  // namespace ethde
