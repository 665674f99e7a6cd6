#include "ethde/models.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace ethde {

namespace {

const MatrixC& pauli(PauliAxis a) {
  static const MatrixC sx = (MatrixC(2, 2) << 0, 1, 1, 0).finished();
  static const MatrixC sy =
      (MatrixC(2, 2) << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  static const MatrixC sz = (MatrixC(2, 2) << 1, 0, 0, -1).finished();
  switch (a) {
    case PauliAxis::x: return sx;
    case PauliAxis::y: return sy;
    default: return sz;
  }
}

char axis_char(PauliAxis a) {
  return a == PauliAxis::x ? 'x' : (a == PauliAxis::y ? 'y' : 'z');
}

// Kronecker chain I (x) ... (x) P_site (x) ... applied as a sparse update:
// for each basis state flip/phase according to the string.
void add_pauli_string(MatrixC& H, const PauliStringSpec& s, int L) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row = col;
    Complex amp = s.coefficient;
    for (auto [site, axis] : s.factors) {
      // site 0 is the leftmost factor of the Kronecker product
      const int bit = L - 1 - site;
      const bool down = (col >> bit) & 1;  // cleared bit is |0> = spin up
      switch (axis) {
        case PauliAxis::x:
          row ^= Eigen::Index(1) << bit;
          break;
        case PauliAxis::y:
          row ^= Eigen::Index(1) << bit;
          // sigma_y |up> = i |down>, sigma_y |down> = -i |up>
          amp *= down ? Complex(0, -1) : Complex(0, 1);
          break;
        case PauliAxis::z:
          amp *= down ? -1.0 : 1.0;
          break;
      }
    }
    H(row, col) += amp;
  }
}

double get_param(const ModelSpec& spec, const std::string& key, double fallback,
                 bool required = false) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) {
    if (required)
      throw std::invalid_argument("ModelSpec: missing parameter '" + key + "'");
    return fallback;
  }
  return it->second;
}

int chain_length(const ModelSpec& spec) {
  int L = static_cast<int>(get_param(spec, "L", 0, true));
  if (L < 2 || L > 12)
    throw std::invalid_argument("ising_chain: L must be in [2,12]");
  return L;
}

MatrixR goe_matrix(Eigen::Index dim, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  MatrixR m(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = gauss(rng);
  // O(1) half-width independent of dim
  return (m + m.transpose()) / std::sqrt(2.0 * double(dim));
}

}  // namespace

Eigen::Index ModelSpec::dim() const {
  switch (kind) {
    case ModelKind::single_spin: return 2;
    case ModelKind::ising_chain: return Eigen::Index(1) << chain_length(*this);
    default: {
      auto d = static_cast<Eigen::Index>(get_param(*this, "dim", 0, true));
      if (d < 2 || d > 4096)
        throw std::invalid_argument("goe_random: dim must be in [2,4096]");
      return d;
    }
  }
}

std::string ModelSpec::descriptor() const {
  std::ostringstream os;
  switch (kind) {
    case ModelKind::single_spin:
      // ';' separators keep the descriptor safe inside CSV columns
      os << "single_spin;B=" << get_param(*this, "B", 1.0);
      break;
    case ModelKind::ising_chain:
      os << "ising_chain;L=" << chain_length(*this)
         << ";J=" << get_param(*this, "J", 1.0)
         << ";hx=" << get_param(*this, "h_x", 1.05)
         << ";hz=" << get_param(*this, "h_z", 0.5)
         << ";" << (boundary == Boundary::open ? "open" : "periodic");
      break;
    case ModelKind::goe_random:
      os << "goe_random;dim=" << dim()
         << ";seed=" << static_cast<uint64_t>(get_param(*this, "seed", 0));
      break;
  }
  return os.str();
}

HermitianMatrix build_hamiltonian(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::single_spin: {
      double B = get_param(spec, "B", 1.0);
      MatrixC h = (MatrixC(2, 2) << B, 0, 0, -B).finished();
      return HermitianMatrix(std::move(h));
    }
    case ModelKind::ising_chain: {
      int L = chain_length(spec);
      double J = get_param(spec, "J", 1.0);
      double hx = get_param(spec, "h_x", 1.05);
      double hz = get_param(spec, "h_z", 0.5);
      const Eigen::Index dim = Eigen::Index(1) << L;
      MatrixC H = MatrixC::Zero(dim, dim);
      int bonds = spec.boundary == Boundary::periodic ? L : L - 1;
      for (int i = 0; i < bonds; ++i)
        add_pauli_string(
            H, {{{i, PauliAxis::z}, {(i + 1) % L, PauliAxis::z}}, J}, L);
      for (int i = 0; i < L; ++i) {
        add_pauli_string(H, {{{i, PauliAxis::x}}, hx}, L);
        add_pauli_string(H, {{{i, PauliAxis::z}}, hz}, L);
      }
      return HermitianMatrix(std::move(H));
    }
    default: {
      auto d = spec.dim();
      auto seed = static_cast<uint64_t>(get_param(spec, "seed", 0));
      return HermitianMatrix(goe_matrix(d, seed));
    }
  }
}

MatrixC pauli_sum_matrix(const std::vector<PauliStringSpec>& strings, int L) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  MatrixC O = MatrixC::Zero(dim, dim);
  for (const auto& s : strings) {
    std::vector<int> sites;
    for (auto [site, axis] : s.factors) {
      if (site < 0 || site >= L)
        throw std::invalid_argument("PauliStringSpec: site index out of range");
      sites.push_back(site);
    }
    std::sort(sites.begin(), sites.end());
    if (std::adjacent_find(sites.begin(), sites.end()) != sites.end())
      throw std::invalid_argument("PauliStringSpec: repeated site index");
    add_pauli_string(O, s, L);
  }
  return O;
}

HermitianMatrix build_observable(const ModelSpec& spec, const HermitianMatrix& H) {
  HermitianMatrix O = [&] {
    if (spec.observable.goe) {
      return HermitianMatrix(goe_matrix(spec.dim(), spec.observable.goe_seed));
    }
    auto strings = spec.observable.strings;
    if (spec.kind == ModelKind::single_spin) {
      if (strings.empty()) strings = {{{{0, PauliAxis::x}}, 1.0}};
      return HermitianMatrix(pauli_sum_matrix(strings, 1));
    }
    if (spec.kind == ModelKind::goe_random)
      throw std::invalid_argument(
          "goe_random model requires a goe observable spec");
    int L = chain_length(spec);
    if (strings.empty())
      strings = {{{{L / 2, PauliAxis::x}}, 1.0}};  // central-site sigma_x
    return HermitianMatrix(pauli_sum_matrix(strings, L));
  }();

  if (O.dim() != H.dim())
    throw DimensionError("build_observable: dimension mismatch with Hamiltonian");
  MatrixC comm = H.mat() * O.mat() - O.mat() * H.mat();
  double bound = 1e-8 * H.max_abs() * O.max_abs();
  if (comm.cwiseAbs().maxCoeff() <= bound)
    throw std::invalid_argument(
        "build_observable: observable commutes with the Hamiltonian; the "
        "dynamics would be trivial");
  return O;
}

double level_spacing_ratio(const std::vector<double>& sorted_energies) {
  const size_t n = sorted_energies.size();
  if (n < 8) throw std::invalid_argument("level_spacing_ratio: too few levels");
  size_t lo = n / 4, hi = 3 * n / 4;
  double sum = 0.0;
  size_t count = 0;
  for (size_t i = lo + 1; i + 1 < hi; ++i) {
    double s0 = sorted_energies[i] - sorted_energies[i - 1];
    double s1 = sorted_energies[i + 1] - sorted_energies[i];
    double r = std::min(s0, s1) / std::max(s0, s1);
    if (std::isfinite(r)) {
      sum += r;
      ++count;
    }
  }
  return sum / double(count);
}

double level_spacing_ratio_parity_resolved(const Eigensystem& eig, int L) {
  const Eigen::Index dim = Eigen::Index(1) << L;
  if (eig.dim() != dim)
    throw DimensionError("level_spacing_ratio_parity_resolved: dim mismatch");
  // spatial reflection permutes basis states by reversing the L site bits
  std::vector<Eigen::Index> perm(dim);
  for (Eigen::Index s = 0; s < dim; ++s) {
    Eigen::Index rev = 0;
    for (int b = 0; b < L; ++b)
      if ((s >> b) & 1) rev |= Eigen::Index(1) << (L - 1 - b);
    perm[s] = rev;
  }
  std::vector<double> even, odd;
  for (Eigen::Index n = 0; n < dim; ++n) {
    Complex p = 0;
    for (Eigen::Index s = 0; s < dim; ++s)
      p += std::conj(eig.basis(perm[s], n)) * eig.basis(s, n);
    (p.real() >= 0 ? even : odd).push_back(eig.energies(n));
  }
  double acc = 0.0;
  int sectors = 0;
  for (auto* sec : {&even, &odd}) {
    if (sec->size() >= 8) {
      std::sort(sec->begin(), sec->end());
      acc += level_spacing_ratio(*sec);
      ++sectors;
    }
  }
  if (sectors == 0) throw std::runtime_error("parity sectors too small");
  return acc / sectors;
}

namespace {

PauliAxis axis_from_char(const std::string& s) {
  if (s == "x") return PauliAxis::x;
  if (s == "y") return PauliAxis::y;
  if (s == "z") return PauliAxis::z;
  throw std::invalid_argument("pauli axis must be x, y or z");
}

}  // namespace

ModelSpec ModelSpec::from_json(const nlohmann::json& j) {
  ModelSpec spec;
  const std::string kind = j.at("kind");
  if (kind == "single_spin") spec.kind = ModelKind::single_spin;
  else if (kind == "ising_chain") spec.kind = ModelKind::ising_chain;
  else if (kind == "goe_random") spec.kind = ModelKind::goe_random;
  else throw std::invalid_argument("unknown model kind: " + kind);

  for (auto& [key, val] : j.items())
    if (val.is_number()) spec.params[key] = val.get<double>();

  if (j.value("boundary", "open") == std::string("periodic"))
    spec.boundary = Boundary::periodic;

  if (j.contains("observable")) {
    const auto& o = j.at("observable");
    const std::string type = o.value("type", "pauli_sum");
    if (type == "goe") {
      spec.observable.goe = true;
      spec.observable.goe_seed = o.value("seed", uint64_t(0));
    } else {
      for (const auto& s : o.at("strings")) {
        PauliStringSpec ps;
        ps.coefficient = s.value("coefficient", 1.0);
        for (const auto& f : s.at("factors"))
          ps.factors.emplace_back(f.at(0).get<int>(),
                                  axis_from_char(f.at(1).get<std::string>()));
        spec.observable.strings.push_back(std::move(ps));
      }
    }
  }
  return spec;
}

nlohmann::json ModelSpec::to_json() const {
  nlohmann::json j;
  j["kind"] = kind == ModelKind::single_spin
                  ? "single_spin"
                  : (kind == ModelKind::ising_chain ? "ising_chain" : "goe_random");
  for (const auto& [k, v] : params) j[k] = v;
  j["boundary"] = boundary == Boundary::open ? "open" : "periodic";
  if (observable.goe) {
    j["observable"] = {{"type", "goe"}, {"seed", observable.goe_seed}};
  } else if (!observable.strings.empty()) {
    nlohmann::json strings = nlohmann::json::array();
    for (const auto& s : observable.strings) {
      nlohmann::json fs = nlohmann::json::array();
      for (auto [site, axis] : s.factors)
        fs.push_back({site, std::string(1, axis_char(axis))});
      strings.push_back({{"coefficient", s.coefficient}, {"factors", fs}});
    }
    j["observable"] = {{"type", "pauli_sum"}, {"strings", strings}};
  }
  return j;
}

}  // namespace ethde
