#pragma once

#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ethde/linalg.hpp"

namespace ethde {

enum class ModelKind { single_spin, ising_chain, goe_random };
enum class Boundary { open, periodic };
enum class PauliAxis { x, y, z };

/// One product of single-site Paulis with a real coefficient.
struct PauliStringSpec {
  std::vector<std::pair<int, PauliAxis>> factors;  // distinct sites < L
  double coefficient = 1.0;
};

struct ObservableSpec {
  // Either a sum of Pauli strings (chains / single spin) or a seeded GOE
  // matrix on the same Hilbert space.
  std::vector<PauliStringSpec> strings;
  bool goe = false;
  uint64_t goe_seed = 0;
};

struct ModelSpec {
  ModelKind kind = ModelKind::ising_chain;
  std::map<std::string, double> params;  // B; or L,J,h_x,h_z; or dim,seed
  Boundary boundary = Boundary::open;
  ObservableSpec observable;  // empty strings => model default

  Eigen::Index dim() const;
  std::string descriptor() const;  // stable id used for cache filenames

  static ModelSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

HermitianMatrix build_hamiltonian(const ModelSpec& spec);

/// Builds the perturbing observable; rejects observables that commute with
/// the Hamiltonian (||[H,O]||_max <= 1e-8 ||H||_max ||O||_max).
HermitianMatrix build_observable(const ModelSpec& spec, const HermitianMatrix& H);

/// Dense matrix for a sum of Pauli strings on L sites.
MatrixC pauli_sum_matrix(const std::vector<PauliStringSpec>& strings, int L);

/// Mean adjacent-gap ratio <r> of the middle half of a sorted spectrum.
double level_spacing_ratio(const std::vector<double>& sorted_energies);

/// <r> resolved over the spatial-reflection sectors of an open uniform
/// chain (the sectors are separated by the parity expectation of each
/// eigenvector), averaged over sectors. Mixing the sectors would bury the
/// GOE signature.
double level_spacing_ratio_parity_resolved(const Eigensystem& eig, int L);

}  // namespace ethde
