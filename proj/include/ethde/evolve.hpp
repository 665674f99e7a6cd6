#pragma once

#include <vector>

#include "ethde/pulses.hpp"
#include "ethde/spectra.hpp"

namespace ethde {

/// Time-step control for the split-step propagator. dt = 0 picks
/// 0.01 / max|E| automatically; any dt with dt * max|E| > 0.1 is rejected.
struct EvolutionConfig {
  double dt = 0.0;
  double resolve_dt(double max_abs_energy, double support) const;
};

/// Eigendecomposition of the (rotated) perturbing observable, reused for
/// every kick factor e^{-i theta O}.
struct KickOperator {
  VectorR d;   // eigenvalues of O
  MatrixC V;   // columns: eigenvectors of O in the H0 eigenbasis
  VectorR E;   // H0 energies

  explicit KickOperator(const EigenbasisObservable& obs);
  Eigen::Index dim() const { return E.size(); }

  /// e^{-i theta O} applied to a block of state columns.
  MatrixC apply(double theta, const MatrixC& columns) const;
};

/// e^{-i lambda O} in the computational basis (dense route; the thin
/// per-state route below is preferred at scale).
UnitaryMatrix kick_evolve(const HermitianMatrix& H0, const HermitianMatrix& O,
                          double lambda);

/// dE = sum_n p_n (<n| U^dag H0 U |n> - E_n) for a computational-basis
/// propagator U, with |n> the eigenvectors of H0.
double delta_e_exact(const UnitaryMatrix& U, const InitialState& state,
                     const HermitianMatrix& H0, const Eigensystem& eig);

/// dE_n = sum_k E_k |(e^{-i lambda O} |n>)_k|^2 - E_n for each listed
/// eigenstate, via thin products through the kick eigenbasis.
VectorR delta_e_kick(const KickOperator& kick, double lambda,
                     const std::vector<Eigen::Index>& states);

/// Weighted kick dE for a stationary mixture (thermal / maximally mixed).
double delta_e_kick_state(const KickOperator& kick, double lambda,
                          const InitialState& state);

/// Operator-form kick response sum_n w_n Re(-i lambda
/// <n| e^{i lambda O} [H0, O] e^{-i lambda O} |n>). Weights are used as
/// given (they need not be normalized).
double kick_commutator_response(const EigenbasisObservable& obs, double lambda,
                                const VectorR& weights);

struct PulseEvolution {
  MatrixC columns;   // final states, H0 eigenbasis, one column per input state
  VectorR delta_e;   // per input state
  int steps;
  double dt;
};

/// Strang-split evolution through the full pulse: exact diagonal phases for
/// H0, kick factors e^{-i lambda(t_mid) O dt} through the O eigenbasis.
/// Second order in dt.
PulseEvolution pulse_evolve(const EigenbasisObservable& obs, const Pulse& pulse,
                            const std::vector<Eigen::Index>& states,
                            const EvolutionConfig& cfg = {});

/// Weighted pulse dE for a stationary mixture: evolves every eigenstate.
double delta_e_pulse_state(const EigenbasisObservable& obs, const Pulse& pulse,
                           const InitialState& state,
                           const EvolutionConfig& cfg = {});

}  // namespace ethde
