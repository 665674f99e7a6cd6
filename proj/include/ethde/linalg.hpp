#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace ethde {

using Complex = std::complex<double>;
using MatrixC = Eigen::MatrixXcd;
using MatrixR = Eigen::MatrixXd;
using VectorC = Eigen::VectorXcd;
using VectorR = Eigen::VectorXd;

struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct EigensolverError : std::runtime_error {
  double residual;
  EigensolverError(const std::string& msg, double res)
      : std::runtime_error(msg), residual(res) {}
};

/// Dense complex Hermitian matrix. Symmetrized at construction; the input
/// asymmetry max|A - A^dag| must be <= 1e-12 * max|A|.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(MatrixC entries);
  explicit HermitianMatrix(const MatrixR& entries);

  Eigen::Index dim() const { return mat_.rows(); }
  const MatrixC& mat() const { return mat_; }
  // True when every imaginary part is negligible; large models hit the
  // real-symmetric LAPACK path through this.
  bool is_real() const { return is_real_; }
  MatrixR real_part() const { return mat_.real(); }

  double max_abs() const;

 private:
  MatrixC mat_;
  bool is_real_;
};

class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(MatrixC entries, double tol = 1e-10);
  Eigen::Index dim() const { return mat_.rows(); }
  const MatrixC& mat() const { return mat_; }

 private:
  MatrixC mat_;
};

/// Ascending spectrum and eigenvector matrix of a Hermitian operator.
/// basis.col(k) is the k-th eigenvector; basis is unitary to 1e-10.
struct Eigensystem {
  VectorR energies;
  MatrixC basis;
  bool real_basis = false;  // all eigenvectors real (real-symmetric input)

  Eigen::Index dim() const { return energies.size(); }
  double spectral_width() const { return energies(dim() - 1) - energies(0); }
};

Eigensystem diagonalize(const HermitianMatrix& H);

/// e^{-i * scale * A} for Hermitian A.
UnitaryMatrix unitary_from_hermitian(const HermitianMatrix& A, double scale);
UnitaryMatrix unitary_from_eigensystem(const Eigensystem& eig, double scale);

Complex trace(const MatrixC& A);
MatrixC adjoint(const MatrixC& A);

/// <psi|A|psi>; for Hermitian A the imaginary residue is <= 1e-12.
Complex expectation(const VectorC& psi, const MatrixC& A);

/// max-norm of H - V diag(E) V^dag, relative to max|H|.
double reconstruction_residual(const HermitianMatrix& H, const Eigensystem& eig);

// Disk cache: one UTF-8 JSON header line (dim, descriptor, content hash)
// followed by little-endian float64 energies then row-major interleaved
// re/im basis entries. Round-trips bit-exactly.
void save_eigensystem(const std::string& path, const Eigensystem& eig,
                      const std::string& descriptor);
bool load_eigensystem(const std::string& path, const std::string& descriptor,
                      Eigensystem& out);

}  // namespace ethde
