#include "ethde/series.hpp"

#include <cmath>

namespace ethde {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
  return std::round(c);
}

double SeriesTerm::route_gap() const {
  double scale = std::max(std::abs(value_commutator), std::abs(value_eigenbasis));
  if (scale == 0.0) return 0.0;
  return std::abs(value_commutator - value_eigenbasis) / scale;
}

MatrixC nested_commutator_term(const HermitianMatrix& H0, const HermitianMatrix& O,
                               int a) {
  if (a < 1) throw std::invalid_argument("nested_commutator_term: a >= 1");
  if (H0.dim() != O.dim())
    throw DimensionError("nested_commutator_term: dimension mismatch");
  MatrixC K = H0.mat() * O.mat() - O.mat() * H0.mat();
  for (int i = 1; i < a; ++i) K = (O.mat() * K - K * O.mat()).eval();
  return K;
}

MatrixC nested_commutator_eigenbasis(const EigenbasisObservable& obs, int a) {
  if (a < 1) throw std::invalid_argument("nested_commutator_eigenbasis: a >= 1");
  const MatrixC& O = obs.matrix();
  const VectorR& E = obs.energies();
  const Eigen::Index dim = obs.dim();
  MatrixC K(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) K(i, j) = (E(i) - E(j)) * O(i, j);
  for (int step = 1; step < a; ++step) K = (O * K - K * O).eval();
  return K;
}

namespace {

// T(p,q) = sum_m (O^p)_nm E_m (O^q)_mn with O^0 = identity.
struct RowTable {
  std::vector<VectorC> rows;  // rows[p-1] = row n of O^p
  const VectorR* E;
  Eigen::Index n;

  Complex T(int p, int q) const {
    if (p == 0 && q == 0) return (*E)(n);
    if (p == 0) return (*E)(n)*std::conj(rows[q - 1](n));
    if (q == 0) return rows[p - 1](n) * (*E)(n);
    const VectorC& rp = rows[p - 1];
    const VectorC& rq = rows[q - 1];
    Complex acc = 0;
    for (Eigen::Index m = 0; m < rp.size(); ++m)
      acc += rp(m) * (*E)(m)*std::conj(rq(m));
    return acc;
  }
};

RowTable make_rows(const EigenbasisObservable& obs, Eigen::Index n, int up_to) {
  RowTable t;
  t.E = &obs.energies();
  t.n = n;
  for (int p = 1; p <= up_to; ++p) t.rows.push_back(obs.power_row(p, n));
  return t;
}

}  // namespace

Complex bracket_expectation_sums(const EigenbasisObservable& obs, Eigen::Index n,
                                 int a) {
  RowTable rows = make_rows(obs, n, a);
  Complex acc = 0;
  for (int q = 0; q <= a; ++q) {
    double sign = (q % 2 == 1) ? 1.0 : -1.0;  // (-1)^{q-1}
    acc += sign * binomial(a, q) * rows.T(a - q, q);
  }
  return acc;
}

std::vector<SeriesTerm> delta_kick_series(const EigenbasisObservable& obs,
                                          Eigen::Index n, double lambda,
                                          int max_order,
                                          bool with_commutator_route) {
  if (!std::isfinite(lambda))
    throw std::invalid_argument("delta_kick_series: lambda must be finite");
  if (max_order < 1 || max_order > 2 * obs.max_power())
    throw std::invalid_argument(
        "delta_kick_series: max_order exceeds 2 x cached powers");
  if (n < 0 || n >= obs.dim())
    throw std::invalid_argument("delta_kick_series: state index out of range");

  std::vector<SeriesTerm> terms;
  RowTable rows = make_rows(obs, n, max_order);

  double fact = 1.0;  // (a-1)!
  for (int a = 1; a <= max_order; ++a) {
    if (a > 1) fact *= (a - 1);
    // coefficient of <K_a> is -i^a lambda^a / (a-1)!
    Complex coeff = -std::pow(Complex(0, 1), a) * std::pow(lambda, a) / fact;

    Complex bracket = 0;
    for (int q = 0; q <= a; ++q) {
      double sign = (q % 2 == 1) ? 1.0 : -1.0;
      bracket += sign * binomial(a, q) * rows.T(a - q, q);
    }

    SeriesTerm term;
    term.order = a;
    term.value_eigenbasis = (coeff * bracket).real();

    if (with_commutator_route) {
      MatrixC K = nested_commutator_eigenbasis(obs, a);
      Complex exp_k = K(n, n);
      term.value_commutator = (coeff * exp_k).real();
    } else {
      term.value_commutator = term.value_eigenbasis;
    }

    if (a % 2 == 0) {
      const VectorC& rh = rows.rows[a / 2 - 1];
      const VectorR& E = obs.energies();
      double dom = 0;
      for (Eigen::Index m = 0; m < obs.dim(); ++m)
        dom += 2.0 * std::norm(rh(m)) * (E(m) - E(n));
      term.dominant = dom;
      for (int q = 1; q < a / 2; ++q) {
        const VectorC& rp = rows.rows[a - q - 1];
        const VectorC& rq = rows.rows[q - 1];
        double s = 0;
        for (Eigen::Index m = 0; m < obs.dim(); ++m)
          s += 2.0 * std::real(rp(m) * std::conj(rq(m))) * (E(m) - E(n));
        term.subleading.emplace_back("q=" + std::to_string(q), s);
      }
    }
    terms.push_back(std::move(term));
  }
  return terms;
}

double Order4Split::ratio() const {
  return std::abs(4.0 * subleading) / std::abs(3.0 * dominant);
}

Order4Split order4_decomposition(const EigenbasisObservable& obs, Eigen::Index n) {
  VectorC r2 = obs.power_row(2, n);
  VectorC r3 = obs.power_row(3, n);
  VectorC r1 = obs.power_row(1, n);
  const VectorR& E = obs.energies();
  Order4Split out{0.0, 0.0};
  for (Eigen::Index m = 0; m < obs.dim(); ++m) {
    double w = E(m) - E(n);
    out.dominant += 2.0 * std::norm(r2(m)) * w;
    out.subleading += 2.0 * std::real(r3(m) * std::conj(r1(m))) * w;
  }
  return out;
}

double odd_order_term(const EigenbasisObservable& obs, Eigen::Index n, int a) {
  if (a % 2 == 0) throw std::invalid_argument("odd_order_term: a must be odd");
  return bracket_expectation_sums(obs, n, a).imag();
}

double general_order_dominant(const EigenbasisObservable& obs, Eigen::Index n,
                              int a) {
  if (a < 2 || a % 2 != 0)
    throw std::invalid_argument("general_order_dominant: even a >= 2 required");
  VectorC rh = obs.power_row(a / 2, n);
  const VectorR& E = obs.energies();
  double dom = 0;
  for (Eigen::Index m = 0; m < obs.dim(); ++m)
    dom += 2.0 * std::norm(rh(m)) * (E(m) - E(n));
  return 0.5 * binomial(a, a / 2) * dom;
}

double pulse_lambda4_dominant(const EigenbasisObservable& obs, Eigen::Index n,
                              const Pulse& pulse) {
  const Eigen::Index dim = obs.dim();
  const VectorR& E = obs.energies();
  const MatrixC& O = obs.matrix();

  // v_l = lambda(E_n - E_l) O_nl, then M_m = sum_l v_l lambda(E_l - E_m) O_lm
  VectorC v(dim);
  for (Eigen::Index l = 0; l < dim; ++l)
    v(l) = pulse.fourier(E(n) - E(l)) * O(n, l);
  VectorC M = VectorC::Zero(dim);
  for (Eigen::Index l = 0; l < dim; ++l) {
    if (v(l) == Complex(0, 0)) continue;
    for (Eigen::Index m = 0; m < dim; ++m)
      M(m) += v(l) * pulse.fourier(E(l) - E(m)) * O(l, m);
  }
  const double four_pi_sq = 4.0 * M_PI * M_PI;
  double acc = 0;
  for (Eigen::Index m = 0; m < dim; ++m)
    acc += (E(m) - E(n)) * four_pi_sq * std::norm(M(m));
  return acc;
}

}  // namespace ethde
