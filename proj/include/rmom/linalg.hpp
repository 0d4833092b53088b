#pragma once

// Dense symmetric kernels: eigendecomposition and spectral matrix functions.

#include <Eigen/Dense>

#include <functional>

namespace rmom {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

namespace linalg {

/// Eigenpairs of a symmetric matrix, eigenvalues ascending.
struct EigDecomp {
  Vector eigenvalues;
  Matrix eigenvectors;  // orthonormal columns

  Matrix reconstruct() const;
};

/// Which eigenvalues a spectral function accepts.
enum class SpectralDomain { kAll, kPositive };

bool is_finite(const Matrix& m);

/// Symmetric within `tol` scaled by max(1, max |entry|).
bool is_symmetric(const Matrix& m, double tol = 1e-12);

/// (M + M^T) / 2
Matrix symmetrize(const Matrix& m);

/// Throws DomainError on non-finite or non-symmetric input.
EigDecomp sym_eig(const Matrix& m);

/// Eigenvalues only, ascending. Same validation as sym_eig.
Vector sym_eigenvalues(const Matrix& m);

/// V diag(fn(lambda)) V^T, symmetrized. With kPositive, any eigenvalue <= 0
/// raises a DomainError that names it.
Matrix spd_apply(const Matrix& m, const std::function<double(double)>& fn,
                 SpectralDomain domain = SpectralDomain::kAll);

/// Same as spd_apply, reusing an existing decomposition.
Matrix apply_spectral(const EigDecomp& eig, const std::function<double(double)>& fn,
                      SpectralDomain domain = SpectralDomain::kAll);

Matrix expm_sym(const Matrix& m);
Matrix logm_spd(const Matrix& m);
Matrix sqrtm_spd(const Matrix& m);
Matrix invsqrtm_spd(const Matrix& m);

/// Both square roots from a single decomposition.
struct SpdRoots {
  Matrix sqrt;
  Matrix inv_sqrt;
};
SpdRoots spd_roots(const Matrix& m);

}  // namespace linalg
}  // namespace rmom
