#include "ethde/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ethde/kernels.hpp"

namespace ethde {

EigenbasisObservable::EigenbasisObservable(const HermitianMatrix& O,
                                           const Eigensystem& eig, int max_power) {
  if (O.dim() != eig.dim())
    throw DimensionError("to_eigenbasis: dimension mismatch");
  if (max_power < 1)
    throw std::invalid_argument("to_eigenbasis: max_power >= 1 required");
  energies_ = eig.energies;

  if (eig.real_basis && O.is_real()) {
    MatrixR V = eig.basis.real();
    MatrixR rotated = V.transpose() * (O.real_part() * V);
    matrix_ = rotated.cast<Complex>();
    powers_.reserve(max_power);
    powers_.push_back(matrix_);
    MatrixR pk = rotated;
    for (int k = 2; k <= max_power; ++k) {
      pk = (pk * rotated).eval();
      powers_.push_back(pk.cast<Complex>());
    }
  } else {
    matrix_ = eig.basis.adjoint() * (O.mat() * eig.basis);
    powers_.reserve(max_power);
    powers_.push_back(matrix_);
    for (int k = 2; k <= max_power; ++k)
      powers_.push_back((powers_.back() * matrix_).eval());
  }
}

const MatrixC& EigenbasisObservable::power(int k) const {
  if (k < 1 || k > max_power())
    throw std::invalid_argument("EigenbasisObservable: power " +
                                std::to_string(k) + " not cached");
  return powers_[k - 1];
}

VectorC EigenbasisObservable::power_row(int k, Eigen::Index n) const {
  if (k <= max_power()) return power(k).row(n).transpose();
  VectorC row = power(max_power()).row(n).transpose();
  int left = k - max_power();
  while (left > 0) {
    int step = std::min(left, max_power());
    row = (row.transpose() * power(step)).transpose().eval();
    left -= step;
  }
  return row;
}

EigenbasisObservable to_eigenbasis(const HermitianMatrix& O, const Eigensystem& eig,
                                   int max_power) {
  return EigenbasisObservable(O, eig, max_power);
}

double default_kernel_width(const Eigensystem& eig) {
  return 0.025 * eig.spectral_width();
}
double default_bin_width(const Eigensystem& eig) {
  return 0.05 * eig.spectral_width();
}

std::vector<double> entropy_at(const Eigensystem& eig,
                               const std::vector<double>& points,
                               double kernel_width) {
  std::vector<double> samples(eig.energies.data(),
                              eig.energies.data() + eig.dim());
  auto rho = kernels::kde_density(samples, points, kernel_width);
  std::vector<double> s(points.size());
  for (size_t i = 0; i < points.size(); ++i)
    s[i] = std::log(std::max(rho[i] * kernel_width, 1e-300));
  return s;
}

double effective_beta(const Eigensystem& eig, double E, double kernel_width) {
  if (E < eig.energies(0) || E > eig.energies(eig.dim() - 1))
    throw std::invalid_argument("effective_beta: E outside the spectrum");
  const double d = 0.5 * kernel_width;
  auto s = entropy_at(eig, {E + d, E - d}, kernel_width);
  return (s[0] - s[1]) / (2.0 * d);
}

VectorR effective_beta_all(const Eigensystem& eig, double kernel_width) {
  const double d = 0.5 * kernel_width;
  std::vector<double> pts(2 * eig.dim());
  for (Eigen::Index n = 0; n < eig.dim(); ++n) {
    pts[2 * n] = eig.energies(n) + d;
    pts[2 * n + 1] = eig.energies(n) - d;
  }
  std::vector<double> samples(eig.energies.data(),
                              eig.energies.data() + eig.dim());
  auto rho = kernels::kde_density(samples, pts, kernel_width);
  VectorR be(eig.dim());
  for (Eigen::Index n = 0; n < eig.dim(); ++n)
    be(n) = (std::log(rho[2 * n]) - std::log(rho[2 * n + 1])) / (2.0 * d);
  return be;
}

EthStatistics extract_eth(const EigenbasisObservable& obs, double bin_width,
                          double kernel_width) {
  const Eigen::Index dim = obs.dim();
  if (dim < 64)
    throw std::invalid_argument("extract_eth: dim >= 64 required for statistics");
  EthStatistics st;
  st.bin_width = bin_width;
  st.kernel_width = kernel_width;

  const VectorR& E = obs.energies();
  const MatrixC& O = obs.matrix();
  const double e_min = E(0), e_max = E(dim - 1);

  // diagonal curve: running mean of O_nn within +- bin_width/2
  for (Eigen::Index n = 0; n < dim; ++n) {
    double acc = 0.0;
    int cnt = 0;
    for (Eigen::Index m = 0; m < dim; ++m)
      if (std::abs(E(m) - E(n)) <= 0.5 * bin_width) {
        acc += O(m, m).real();
        ++cnt;
      }
    st.diagonal_curve.emplace_back(E(n), acc / cnt);
  }

  // entropy curve on a uniform grid
  const int grid_n = 256;
  std::vector<double> grid(grid_n);
  for (int i = 0; i < grid_n; ++i)
    grid[i] = e_min + (e_max - e_min) * i / (grid_n - 1.0);
  Eigensystem tmp;  // entropy_at only reads energies
  tmp.energies = E;
  tmp.basis.resize(0, 0);
  auto entropy = entropy_at(tmp, grid, kernel_width);
  for (int i = 0; i < grid_n; ++i) st.entropy_curve.emplace_back(grid[i], entropy[i]);

  auto entropy_of = [&](double e) {
    double x = (e - e_min) / (e_max - e_min) * (grid_n - 1);
    int i = std::clamp(static_cast<int>(x), 0, grid_n - 2);
    double f = x - i;
    return entropy[i] * (1 - f) + entropy[i + 1] * f;
  };

  // 2-D (Ebar, omega) binning of off-diagonal elements, 5% spectral edges
  // excluded (ETH degrades there)
  const Eigen::Index edge = dim / 20;
  struct Cell {
    std::vector<Complex> scaled;  // e^{S/2} O_nm
    double ebar_sum = 0, omega_sum = 0;
  };
  std::map<std::pair<int, int>, Cell> cells;
  for (Eigen::Index n = edge; n < dim - edge; ++n) {
    for (Eigen::Index m = n + 1; m < dim - edge; ++m) {
      double ebar = 0.5 * (E(n) + E(m));
      double omega = E(m) - E(n);
      int bi = static_cast<int>(std::floor((ebar - e_min) / bin_width));
      int bj = static_cast<int>(std::floor(omega / bin_width));
      Cell& c = cells[{bi, bj}];
      c.scaled.push_back(std::exp(0.5 * entropy_of(ebar)) * O(n, m));
      c.ebar_sum += ebar;
      c.omega_sum += omega;
    }
  }

  // first pass: raw mean |e^{S/2} O_nm| per cell; then smooth over the
  // omega-neighbours to form the f1 estimate each residual is divided by
  std::map<std::pair<int, int>, double> raw;
  for (auto& [key, c] : cells) {
    double acc = 0;
    for (auto v : c.scaled) acc += std::abs(v);
    raw[key] = acc / c.scaled.size();
  }
  auto smoothed = [&](std::pair<int, int> key) {
    double acc = 0;
    int cnt = 0;
    for (int dj = -1; dj <= 1; ++dj) {
      auto it = raw.find({key.first, key.second + dj});
      if (it != raw.end()) {
        acc += it->second;
        ++cnt;
      }
    }
    return acc / cnt;
  };

  for (auto& [key, c] : cells) {
    EthBin b;
    const int cnt = static_cast<int>(c.scaled.size());
    b.count = cnt;
    b.ebar = c.ebar_sum / cnt;
    b.omega = c.omega_sum / cnt;
    b.mean_abs = raw[key];
    b.f1 = smoothed(key);
    // normalize residuals by the bin's own scale (the smoothed f1 varies too
    // steeply in omega to serve here); for (real) gaussian elements the
    // standard deviation is mean_abs * sqrt(pi/2)
    const double resid_scale = b.mean_abs * std::sqrt(M_PI / 2.0);
    double mre = 0, mim = 0, var = 0;
    for (auto v : c.scaled) {
      Complex r = v / resid_scale;
      mre += r.real();
      mim += r.imag();
    }
    mre /= cnt;
    mim /= cnt;
    for (auto v : c.scaled) {
      Complex r = v / resid_scale;
      double dre = r.real() - mre;
      var += dre * dre;
    }
    b.resid_mean_re = mre;
    b.resid_mean_im = mim;
    b.resid_var = var / cnt;
    // bins at omega beyond half the spectral width couple near-edge states,
    // where the gaussian ansatz visibly degrades; keep them out of the gates
    b.usable = cnt >= st.min_bin_count && b.omega <= 0.5 * (e_max - e_min);
    st.offdiag_bins.push_back(b);
  }
  return st;
}

double EthStatistics::resid_fail_fraction() const {
  int usable = 0, failed = 0;
  for (const auto& b : offdiag_bins) {
    if (!b.usable) continue;
    ++usable;
    // gates widened by the 3-sigma sampling noise of the bin
    const double mean_tol = std::max(0.05, 3.0 / std::sqrt(double(b.count)));
    const double var_tol = 3.0 * std::sqrt(2.0 / double(b.count));
    bool ok = std::abs(b.resid_mean_re) <= mean_tol &&
              b.resid_var >= 0.8 - var_tol && b.resid_var <= 1.2 + var_tol;
    if (!ok) ++failed;
  }
  if (usable == 0) throw std::runtime_error("no usable ETH bins");
  return double(failed) / usable;
}

InitialState make_eigenstate(const Eigensystem& eig, Eigen::Index n) {
  if (n < 0 || n >= eig.dim())
    throw std::invalid_argument("make_eigenstate: index out of range");
  InitialState st;
  st.kind = InitialState::Kind::eigenstate;
  st.index = n;
  st.weights = VectorR::Zero(eig.dim());
  st.weights(n) = 1.0;
  return st;
}

InitialState make_thermal(const Eigensystem& eig, double beta) {
  if (!std::isfinite(beta))
    throw std::invalid_argument("make_thermal: beta must be finite");
  InitialState st;
  st.kind = InitialState::Kind::thermal;
  st.beta = beta;
  VectorR x = -beta * eig.energies;
  double shift = x.maxCoeff();  // overflow safety
  st.weights = (x.array() - shift).exp();
  st.weights /= st.weights.sum();
  return st;
}

InitialState make_maximally_mixed(const Eigensystem& eig) {
  InitialState st;
  st.kind = InitialState::Kind::maximally_mixed;
  st.weights = VectorR::Constant(eig.dim(), 1.0 / double(eig.dim()));
  return st;
}

std::vector<Eigen::Index> select_beta_window(const Eigensystem& eig, double lo,
                                             double hi, int count,
                                             double kernel_width) {
  VectorR be = effective_beta_all(eig, kernel_width);
  std::vector<Eigen::Index> in_window;
  for (Eigen::Index n = 0; n < eig.dim(); ++n)
    if (be(n) >= lo && be(n) <= hi) in_window.push_back(n);
  if (in_window.empty())
    throw std::runtime_error("select_beta_window: no eigenstates in window");
  std::sort(in_window.begin(), in_window.end(),
            [&](Eigen::Index a, Eigen::Index b) { return be(a) < be(b); });
  if (static_cast<int>(in_window.size()) <= count) {
    std::sort(in_window.begin(), in_window.end());
    return in_window;
  }
  std::vector<Eigen::Index> out;
  for (int i = 0; i < count; ++i) {
    size_t idx = static_cast<size_t>(
        std::llround(double(i) * (in_window.size() - 1) / (count - 1)));
    out.push_back(in_window[idx]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace ethde
