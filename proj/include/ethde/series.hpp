#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ethde/pulses.hpp"
#include "ethde/spectra.hpp"

namespace ethde {

/// One order of the delta-kick expansion of dE, evaluated along both
/// routes. For even orders the eigenbasis value decomposes into the
/// positive-definite dominant sum and the cross-power subleading sums:
///   <K_a> = (-1)^{a/2-1} (C(a,a/2)/2) dominant
///           + sum_{q=1}^{a/2-1} (-1)^{q-1} C(a,q) subleading_q
/// with K_a the a-th nested commutator bracket.
struct SeriesTerm {
  int order;
  double value_commutator;  // expectation of the commutator matrix
  double value_eigenbasis;  // eigenbasis sums
  double dominant = 0.0;    // 2 sum_m |(O^{a/2})_nm|^2 (E_m - E_n), even orders
  std::vector<std::pair<std::string, double>> subleading;  // (label, S_q)

  double value() const { return value_eigenbasis; }
  double route_gap() const;  // relative disagreement between the two routes
};

/// ad_O^{a-1}([H0, O]) by iterated matrix commutators.
MatrixC nested_commutator_term(const HermitianMatrix& H0, const HermitianMatrix& O,
                               int a);

/// Same bracket built in the H0 eigenbasis (H0 diagonal), used as the
/// commutator-matrix route of the series.
MatrixC nested_commutator_eigenbasis(const EigenbasisObservable& obs, int a);

/// Expectation <n|K_a|n> from eigenbasis sums alone (no dense products).
Complex bracket_expectation_sums(const EigenbasisObservable& obs, Eigen::Index n,
                                 int a);

/// All terms of the delta-kick series for eigenstate n, orders 1..max_order.
/// Coefficient of <K_a> is -i^a lambda^a / (a-1)!. Routes must agree to
/// 1e-8 relative.
std::vector<SeriesTerm> delta_kick_series(const EigenbasisObservable& obs,
                                          Eigen::Index n, double lambda,
                                          int max_order,
                                          bool with_commutator_route = true);

struct Order4Split {
  double dominant;    // 2 sum_m |(O^2)_nm|^2 (E_m - E_n)
  double subleading;  // sum_m ((O^3)_nm O_mn + c.c.)(E_m - E_n)
  double ratio() const;  // |4 subleading| / |3 dominant|
};

Order4Split order4_decomposition(const EigenbasisObservable& obs, Eigen::Index n);

/// Im <n|K_a|n> for odd a (exactly zero when the eigenbasis matrix
/// elements are real); suppression diagnostics only.
double odd_order_term(const EigenbasisObservable& obs, Eigen::Index n, int a);

/// (C(a,a/2)/2) * 2 sum_m |(O^{a/2})_nm|^2 (E_m - E_n): the dominant part
/// of the lambda^a bracket, without the lambda^a/(a-1)! prefactor.
double general_order_dominant(const EigenbasisObservable& obs, Eigen::Index n,
                              int a);

/// Dominant lambda^4 term for a general pulse:
/// sum_m (E_m - E_n) (2 pi)^2 |M_nm|^2,
/// M_nm = sum_l lambda(E_n - E_l) O_nl lambda(E_l - E_m) O_lm.
double pulse_lambda4_dominant(const EigenbasisObservable& obs, Eigen::Index n,
                              const Pulse& pulse);

double binomial(int n, int k);

}  // namespace ethde
