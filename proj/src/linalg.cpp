#include "ethde/linalg.hpp"

#include <lapacke.h>

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ethde {

namespace {

bool matrix_is_real(const MatrixC& m) {
  double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return true;
  return m.imag().cwiseAbs().maxCoeff() <= 1e-14 * scale;
}

}  // namespace

HermitianMatrix::HermitianMatrix(MatrixC entries) {
  if (entries.rows() != entries.cols() || entries.rows() < 1)
    throw DimensionError("HermitianMatrix: square matrix with dim >= 1 required");
  double scale = entries.cwiseAbs().maxCoeff();
  double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-12 * scale)
    throw std::invalid_argument("HermitianMatrix: input asymmetry " +
                                std::to_string(asym / scale) + " exceeds 1e-12");
  mat_ = 0.5 * (entries + entries.adjoint());
  is_real_ = matrix_is_real(mat_);
}

HermitianMatrix::HermitianMatrix(const MatrixR& entries)
    : HermitianMatrix(MatrixC(entries.cast<Complex>())) {}

double HermitianMatrix::max_abs() const { return mat_.cwiseAbs().maxCoeff(); }

UnitaryMatrix::UnitaryMatrix(MatrixC entries, double tol) : mat_(std::move(entries)) {
  if (mat_.rows() != mat_.cols())
    throw DimensionError("UnitaryMatrix: square matrix required");
  MatrixC g = mat_.adjoint() * mat_;
  g.diagonal().array() -= 1.0;
  double dev = g.cwiseAbs().maxCoeff();
  if (dev > tol)
    throw std::invalid_argument("UnitaryMatrix: U^dag U deviates from identity by " +
                                std::to_string(dev));
}

Eigensystem diagonalize(const HermitianMatrix& H) {
  const auto n = H.dim();
  Eigensystem out;
  out.energies.resize(n);

  lapack_int info;
  if (H.is_real()) {
    MatrixR work = H.real_part();
    info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                          work.data(), static_cast<lapack_int>(n),
                          out.energies.data());
    if (info == 0) {
      out.basis = work.cast<Complex>();
      out.real_basis = true;
    }
  } else {
    MatrixC work = H.mat();
    info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', static_cast<lapack_int>(n),
                          reinterpret_cast<lapack_complex_double*>(work.data()),
                          static_cast<lapack_int>(n), out.energies.data());
    if (info == 0) out.basis = std::move(work);
  }
  if (info != 0)
    throw EigensolverError("diagonalize: LAPACK xheevd failed, info=" +
                               std::to_string(info),
                           std::numeric_limits<double>::quiet_NaN());

  double res = reconstruction_residual(H, out);
  if (res > 1e-9)
    throw EigensolverError("diagonalize: reconstruction residual " +
                               std::to_string(res) + " exceeds 1e-9",
                           res);
  return out;
}

double reconstruction_residual(const HermitianMatrix& H, const Eigensystem& eig) {
  MatrixC rec = eig.basis * eig.energies.asDiagonal() * eig.basis.adjoint();
  double scale = H.max_abs();
  if (scale == 0.0) scale = 1.0;
  return (rec - H.mat()).cwiseAbs().maxCoeff() / scale;
}

UnitaryMatrix unitary_from_eigensystem(const Eigensystem& eig, double scale) {
  VectorC phases =
      (Complex(0, -scale) * eig.energies.cast<Complex>().array()).exp();
  MatrixC u = eig.basis * phases.asDiagonal() * eig.basis.adjoint();
  return UnitaryMatrix(std::move(u));
}

UnitaryMatrix unitary_from_hermitian(const HermitianMatrix& A, double scale) {
  if (!std::isfinite(scale))
    throw std::invalid_argument("unitary_from_hermitian: scale must be finite");
  return unitary_from_eigensystem(diagonalize(A), scale);
}

Complex trace(const MatrixC& A) { return A.trace(); }

MatrixC adjoint(const MatrixC& A) { return A.adjoint(); }

Complex expectation(const VectorC& psi, const MatrixC& A) {
  if (psi.size() != A.rows() || A.rows() != A.cols())
    throw DimensionError("expectation: dimension mismatch");
  return psi.dot(A * psi);
}

namespace {

void write_f64(std::ofstream& f, const double* data, size_t count) {
  static_assert(sizeof(double) == 8);
  f.write(reinterpret_cast<const char*>(data), 8 * count);
}

uint64_t fnv1a(const uint8_t* p, size_t n, uint64_t h = 1469598103934665603ull) {
  for (size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 1099511628211ull;
  return h;
}

uint64_t eig_hash(const Eigensystem& eig) {
  uint64_t h = fnv1a(reinterpret_cast<const uint8_t*>(eig.energies.data()),
                     8 * eig.energies.size());
  return fnv1a(reinterpret_cast<const uint8_t*>(eig.basis.data()),
               16 * eig.basis.size(), h);
}

}  // namespace

void save_eigensystem(const std::string& path, const Eigensystem& eig,
                      const std::string& descriptor) {
  nlohmann::json hdr = {{"dim", eig.dim()},
                        {"model", descriptor},
                        {"real_basis", eig.real_basis},
                        {"hash", eig_hash(eig)}};
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("save_eigensystem: cannot open " + tmp);
    f << hdr.dump() << "\n";
    write_f64(f, eig.energies.data(), eig.energies.size());
    // row-major interleaved re/im
    const auto n = eig.dim();
    std::vector<double> row(2 * n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) {
        row[2 * j] = eig.basis(i, j).real();
        row[2 * j + 1] = eig.basis(i, j).imag();
      }
      write_f64(f, row.data(), row.size());
    }
    if (!f) throw std::runtime_error("save_eigensystem: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("save_eigensystem: rename failed for " + path);
}

bool load_eigensystem(const std::string& path, const std::string& descriptor,
                      Eigensystem& out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) return false;
  std::string line;
  if (!std::getline(f, line)) return false;
  nlohmann::json hdr = nlohmann::json::parse(line, nullptr, false);
  if (hdr.is_discarded()) return false;
  if (hdr.value("model", std::string()) != descriptor) return false;
  Eigen::Index n = hdr.value("dim", Eigen::Index(0));
  if (n < 1) return false;

  Eigensystem eig;
  eig.energies.resize(n);
  eig.basis.resize(n, n);
  eig.real_basis = hdr.value("real_basis", false);
  f.read(reinterpret_cast<char*>(eig.energies.data()), 8 * n);
  std::vector<double> row(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f.read(reinterpret_cast<char*>(row.data()), 16 * n);
    for (Eigen::Index j = 0; j < n; ++j)
      eig.basis(i, j) = Complex(row[2 * j], row[2 * j + 1]);
  }
  if (!f) return false;
  if (hdr.value("hash", uint64_t(0)) != eig_hash(eig)) return false;
  out = std::move(eig);
  return true;
}

}  // namespace ethde
