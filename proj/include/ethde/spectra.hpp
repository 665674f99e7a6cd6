#pragma once

#include <optional>
#include <vector>

#include "ethde/linalg.hpp"

namespace ethde {

/// Observable rotated into the H0 eigenbasis, with cached integer powers
/// (O^k)_nm. Rows of higher powers than the cache are composed on demand.
class EigenbasisObservable {
 public:
  EigenbasisObservable(const HermitianMatrix& O, const Eigensystem& eig,
                       int max_power);

  Eigen::Index dim() const { return matrix_.rows(); }
  int max_power() const { return static_cast<int>(powers_.size()); }
  const MatrixC& matrix() const { return matrix_; }          // (O^1)_nm
  const MatrixC& power(int k) const;                         // cached (O^k)_nm
  VectorC power_row(int k, Eigen::Index n) const;            // any k >= 1
  const VectorR& energies() const { return energies_; }

 private:
  MatrixC matrix_;
  std::vector<MatrixC> powers_;  // powers_[k-1] = (O^k)_nm
  VectorR energies_;
};

struct EthBin {
  double ebar, omega;
  int count;
  double mean_abs;        // mean |O_nm| in the bin
  double f1;              // e^{S(ebar)/2} * smoothed mean |O_nm|
  double resid_mean_re, resid_mean_im;
  double resid_var;       // variance of normalized residuals
  bool usable;            // >= min_count elements
};

struct EthStatistics {
  std::vector<std::pair<double, double>> diagonal_curve;  // (Ebar, running mean O_nn)
  std::vector<std::pair<double, double>> entropy_curve;   // (E, S(E))
  std::vector<EthBin> offdiag_bins;                       // (Ebar, omega) grid
  double bin_width, kernel_width;
  int min_bin_count = 200;

  double resid_fail_fraction() const;  // usable bins failing the gates
};

/// Weight distribution over H0 eigenstates.
struct InitialState {
  enum class Kind { eigenstate, thermal, maximally_mixed };
  Kind kind;
  VectorR weights;  // normalized, nonnegative
  double beta = 0.0;
  Eigen::Index index = -1;
};

EigenbasisObservable to_eigenbasis(const HermitianMatrix& O, const Eigensystem& eig,
                                   int max_power);

EthStatistics extract_eth(const EigenbasisObservable& obs, double bin_width,
                          double kernel_width);

/// ln(rho_G(E) * W): Gaussian-KDE entropy curve sampled at the given points.
std::vector<double> entropy_at(const Eigensystem& eig,
                               const std::vector<double>& points,
                               double kernel_width);

/// dS/dE at E by centered finite difference on the smoothed entropy.
double effective_beta(const Eigensystem& eig, double E, double kernel_width);

/// beta_eff for every eigenstate (one KDE pass).
VectorR effective_beta_all(const Eigensystem& eig, double kernel_width);

InitialState make_eigenstate(const Eigensystem& eig, Eigen::Index n);
InitialState make_thermal(const Eigensystem& eig, double beta);
InitialState make_maximally_mixed(const Eigensystem& eig);

/// Indices whose beta_eff lies in [lo, hi], thinned evenly to at most
/// `count` states (sorted by beta_eff). Deterministic.
std::vector<Eigen::Index> select_beta_window(const Eigensystem& eig, double lo,
                                             double hi, int count,
                                             double kernel_width);

double default_kernel_width(const Eigensystem& eig);  // 0.025 x spectral width
double default_bin_width(const Eigensystem& eig);     // 0.05 x spectral width

}  // namespace ethde
