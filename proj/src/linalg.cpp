#include "rmom/linalg.hpp"

#include "rmom/errors.hpp"

#include <cmath>
#include <sstream>

namespace rmom::linalg {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << "expected a nonempty square matrix, got " << m.rows() << "x" << m.cols();
    throw DomainError(os.str());
  }
}

void validate_symmetric_input(const Matrix& m) {
  require_square(m);
  if (!is_finite(m)) {
    throw DomainError("matrix has non-finite entries");
  }
  if (!is_symmetric(m)) {
    throw DomainError("matrix is not symmetric");
  }
}

}  // namespace

Matrix EigDecomp::reconstruct() const {
  return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

bool is_finite(const Matrix& m) { return m.allFinite(); }

bool is_symmetric(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

EigDecomp sym_eig(const Matrix& m) {
  validate_symmetric_input(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw DomainError("symmetric eigensolver failed to converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

Vector sym_eigenvalues(const Matrix& m) {
  validate_symmetric_input(m);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw DomainError("symmetric eigensolver failed to converge");
  }
  return solver.eigenvalues();
}

Matrix apply_spectral(const EigDecomp& eig, const std::function<double(double)>& fn,
                      SpectralDomain domain) {
  const Eigen::Index n = eig.eigenvalues.size();
  Vector mapped(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double lambda = eig.eigenvalues(i);
    if (domain == SpectralDomain::kPositive && !(lambda > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "matrix function requires positive eigenvalues; eigenvalue " << i << " is "
         << lambda;
      throw DomainError(os.str());
    }
    mapped(i) = fn(lambda);
  }
  return symmetrize(eig.eigenvectors * mapped.asDiagonal() * eig.eigenvectors.transpose());
}

Matrix spd_apply(const Matrix& m, const std::function<double(double)>& fn,
                 SpectralDomain domain) {
  return apply_spectral(sym_eig(m), fn, domain);
}

Matrix expm_sym(const Matrix& m) {
  return spd_apply(m, [](double x) { return std::exp(x); });
}

Matrix logm_spd(const Matrix& m) {
  return spd_apply(m, [](double x) { return std::log(x); }, SpectralDomain::kPositive);
}

Matrix sqrtm_spd(const Matrix& m) {
  return spd_apply(m, [](double x) { return std::sqrt(x); }, SpectralDomain::kPositive);
}

Matrix invsqrtm_spd(const Matrix& m) {
  return spd_apply(m, [](double x) { return 1.0 / std::sqrt(x); }, SpectralDomain::kPositive);
}

SpdRoots spd_roots(const Matrix& m) {
  const EigDecomp eig = sym_eig(m);
  return {apply_spectral(eig, [](double x) { return std::sqrt(x); }, SpectralDomain::kPositive),
          apply_spectral(eig, [](double x) { return 1.0 / std::sqrt(x); },
                         SpectralDomain::kPositive)};
}

}  // namespace rmom::linalg
