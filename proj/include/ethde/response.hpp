#pragma once

#include <vector>

#include "ethde/pulses.hpp"
#include "ethde/spectra.hpp"

namespace ethde {

/// Lehmann spectral function A(w) of the perturbing observable in a
/// stationary state: exact transition weights 2 pi (p_n - p_m) |O_nm|^2 at
/// w = E_m - E_n, plus a unit-mass Gaussian broadening on a symmetric grid.
struct SpectralFunction {
  std::vector<double> grid;       // ascending, symmetric about 0
  std::vector<double> values;     // broadened A(w)
  double eta;
  InitialState state;
  std::vector<double> lehmann_omegas;   // sorted
  std::vector<double> lehmann_weights;  // matching order

  double max_transition_frequency() const;
};

std::vector<double> make_symmetric_grid(double max_abs_omega, int points_per_side);

/// Builds A(w). The state must be stationary (thermal or maximally mixed);
/// eigenstate input is rejected (use the series module for kicked
/// eigenstates).
SpectralFunction spectral_function(const EigenbasisObservable& obs,
                                   const InitialState& state,
                                   const std::vector<double>& grid, double eta);

/// G_R(w): Im part from the broadened A, Re part from the principal-value
/// pole sum over the Lehmann weights.
Complex retarded_green(const SpectralFunction& spec, double omega);
std::vector<Complex> retarded_green_grid(const SpectralFunction& spec);

struct DeltaELinear {
  double lehmann;    // exact sum over transitions
  double broadened;  // quadrature over the broadened grid
};

/// Energy absorbed at linear response order:
/// dE = int_0^inf dw w |lambda(w)|^2 A(w), evaluated both ways.
/// (With A normalized through the 2 pi Lehmann weights above, the overall
/// prefactor is unity; validated against exact evolution.)
DeltaELinear delta_e_linear(const SpectralFunction& spec, const Pulse& pulse);

}  // namespace ethde
