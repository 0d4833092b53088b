#include "rmom/manifold.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "rmom/errors.hpp"

namespace rmom {

namespace {

constexpr double kSmallNorm = 1e-12;

void require_same_base(const Tangent& a, const Tangent& b) {
  if (a.base.rows() != b.base.rows() || a.base.cols() != b.base.cols() || a.base != b.base) {
    throw ContractViolation("tangent vectors are based at different points");
  }
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << what << ": expected shape " << rows << "x" << cols << ", got " << m.rows() << "x"
       << m.cols();
    throw ContractViolation(os.str());
  }
}

double frobenius_inner(const Matrix& a, const Matrix& b) { return a.cwiseProduct(b).sum(); }

}  // namespace

// ---------------------------------------------------------------------------
// Tangent arithmetic

bool same_point(const Point& a, const Point& b) {
  return a.coords.rows() == b.coords.rows() && a.coords.cols() == b.coords.cols() &&
         a.coords == b.coords;
}

Tangent zero_tangent(const Point& x) {
  return {x.coords, Matrix::Zero(x.coords.rows(), x.coords.cols())};
}

Tangent operator*(double s, const Tangent& v) { return {v.base, s * v.coords}; }

Tangent operator+(const Tangent& a, const Tangent& b) {
  require_same_base(a, b);
  return {a.base, a.coords + b.coords};
}

Tangent operator-(const Tangent& a, const Tangent& b) {
  require_same_base(a, b);
  return {a.base, a.coords - b.coords};
}

Tangent operator-(const Tangent& v) { return {v.base, -v.coords}; }

// ---------------------------------------------------------------------------
// Manifold

double Manifold::norm(const Point& x, const Tangent& u) const {
  return std::sqrt(std::max(0.0, inner(x, u, u)));
}

Geodesic Manifold::geodesic(const Point& x, const Tangent& v) const {
  require_base(x, v);
  return [this, x, v](double t) { return exp(x, t * v); };
}

void Manifold::require_base(const Point& x, const Tangent& v) const {
  if (v.base.rows() != x.coords.rows() || v.base.cols() != x.coords.cols() ||
      v.base != x.coords) {
    throw ContractViolation(name() + ": tangent vector is not based at the given point");
  }
}

std::unique_ptr<Manifold> make_manifold(ManifoldType type, int d) {
  switch (type) {
    case ManifoldType::kSphere:
      return std::make_unique<Sphere>(d);
    case ManifoldType::kSpd:
      return std::make_unique<Spd>(d);
    case ManifoldType::kEuclidean:
      return std::make_unique<Euclidean>(d);
  }
  throw ContractViolation("unknown manifold type");
}

// ---------------------------------------------------------------------------
// Sphere

Sphere::Sphere(int d) : Manifold(d) {
  if (d < 2) throw ContractViolation("Sphere needs ambient dimension >= 2");
}

std::string Sphere::name() const { return "Sphere(" + std::to_string(dim()) + ")"; }

void Sphere::check_point(const Point& x) const {
  require_shape(x.coords, dim(), 1, "Sphere point");
  if (!x.coords.allFinite() || std::abs(x.coords.norm() - 1.0) > 1e-10) {
    throw DomainError("Sphere point must be a finite unit vector");
  }
}

double Sphere::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u);
  require_base(x, v);
  return frobenius_inner(u.coords, v.coords);
}

Point Sphere::exp(const Point& x, const Tangent& v) const {
  require_base(x, v);
  const double n = v.coords.norm();
  if (n < kSmallNorm) return x;
  Matrix y = std::cos(n) * x.coords + (std::sin(n) / n) * v.coords;
  y /= y.norm();
  return {std::move(y)};
}

namespace {

// Angle between unit vectors and the component of y orthogonal to x.
struct SphereSplit {
  double angle;
  Matrix ortho;
  double ortho_norm;
};

SphereSplit split(const Matrix& x, const Matrix& y) {
  const double c = frobenius_inner(x, y);
  Matrix u = y - c * x;
  const double un = u.norm();
  return {std::atan2(un, c), std::move(u), un};
}

void guard_antipodal(double angle) {
  if (angle >= std::numbers::pi - Sphere::kAntipodalGuard) {
    std::ostringstream os;
    os.precision(17);
    os << "Sphere: points are (nearly) antipodal, distance " << angle
       << "; log is not uniquely defined";
    throw DomainError(os.str());
  }
}

}  // namespace

Tangent Sphere::log(const Point& x, const Point& y) const {
  if (same_point(x, y)) return zero_tangent(x);
  const SphereSplit s = split(x.coords, y.coords);
  guard_antipodal(s.angle);
  if (s.ortho_norm == 0.0) return zero_tangent(x);
  return {x.coords, (s.angle / s.ortho_norm) * s.ortho};
}

double Sphere::dist(const Point& x, const Point& y) const {
  if (same_point(x, y)) return 0.0;
  const SphereSplit s = split(x.coords, y.coords);
  guard_antipodal(s.angle);
  return s.angle;
}

Tangent Sphere::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v);
  const Tangent xi = log(x, y);
  const double theta = xi.coords.norm();
  if (theta < kSmallNorm) return {y.coords, v.coords};
  const Matrix e = xi.coords / theta;
  const double s = frobenius_inner(e, v.coords);
  Matrix out = v.coords + (std::cos(theta) - 1.0) * s * e - std::sin(theta) * s * x.coords;
  return {y.coords, std::move(out)};
}

Tangent Sphere::project_tangent(const Point& x, const Matrix& w) const {
  require_shape(w, dim(), 1, "Sphere ambient vector");
  return {x.coords, w - frobenius_inner(x.coords, w) * x.coords};
}

std::vector<Tangent> Sphere::tangent_basis(const Point& x) const {
  Matrix seed(dim(), dim() + 1);
  seed.col(0) = x.coords;
  seed.rightCols(dim()) = Matrix::Identity(dim(), dim());
  Eigen::HouseholderQR<Matrix> qr(seed);
  const Matrix q = qr.householderQ() * Matrix::Identity(dim(), dim());
  std::vector<Tangent> basis;
  basis.reserve(dim() - 1);
  for (int j = 1; j < dim(); ++j) {
    Matrix col = q.col(j);
    col -= frobenius_inner(x.coords, col) * x.coords;
    col /= col.norm();
    basis.push_back({x.coords, std::move(col)});
  }
  return basis;
}

Point Sphere::random_point(Rng& rng) const {
  Matrix g = gaussian_matrix(dim(), 1, rng);
  g /= g.norm();
  return {std::move(g)};
}

Tangent Sphere::random_unit_tangent(const Point& x, Rng& rng) const {
  Tangent t = project_tangent(x, gaussian_matrix(dim(), 1, rng));
  t.coords /= t.coords.norm();
  return t;
}

// ---------------------------------------------------------------------------
// SPD

Spd::Spd(int d) : Manifold(d) {
  if (d < 1) throw ContractViolation("Spd needs dimension >= 1");
}

std::string Spd::name() const { return "SPD(" + std::to_string(dim()) + ")"; }

void Spd::check_point(const Point& x) const {
  require_shape(x.coords, dim(), dim(), "SPD point");
  if (!x.coords.allFinite() || !linalg::is_symmetric(x.coords)) {
    throw DomainError("SPD point must be a finite symmetric matrix");
  }
  Eigen::LLT<Matrix> llt(x.coords);
  if (llt.info() != Eigen::Success) {
    throw DomainError("SPD point is not positive definite");
  }
}

double Spd::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u);
  require_base(x, v);
  Eigen::LLT<Matrix> llt(x.coords);
  if (llt.info() != Eigen::Success) throw DomainError("SPD point is not positive definite");
  const Matrix a = llt.solve(u.coords);
  const Matrix b = llt.solve(v.coords);
  // tr(AB) = sum_ij A_ij B_ji
  return a.cwiseProduct(b.transpose()).sum();
}

Spd::Frame Spd::frame(const Point& x) const {
  linalg::SpdRoots roots = linalg::spd_roots(x.coords);
  return {x.coords, std::move(roots.sqrt), std::move(roots.inv_sqrt)};
}

Point Spd::exp(const Point& x, const Tangent& v) const {
  require_base(x, v);
  const Frame f = frame(x);
  const Matrix s = linalg::symmetrize(f.inv_sqrt * v.coords * f.inv_sqrt);
  if (s.norm() < kSmallNorm) return x;
  return {linalg::symmetrize(f.sqrt * linalg::expm_sym(s) * f.sqrt)};
}

Tangent Spd::log(const Frame& fx, const Point& y) const {
  if (fx.point == y.coords) return {fx.point, Matrix::Zero(dim(), dim())};
  const Matrix m = linalg::symmetrize(fx.inv_sqrt * y.coords * fx.inv_sqrt);
  return {fx.point, linalg::symmetrize(fx.sqrt * linalg::logm_spd(m) * fx.sqrt)};
}

Tangent Spd::log(const Point& x, const Point& y) const {
  if (same_point(x, y)) return zero_tangent(x);
  return log(frame(x), y);
}

double Spd::dist(const Frame& fx, const Point& y) const {
  if (fx.point == y.coords) return 0.0;
  const Matrix m = linalg::symmetrize(fx.inv_sqrt * y.coords * fx.inv_sqrt);
  const Vector lambda = linalg::sym_eigenvalues(m);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (!(lambda(i) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "SPD dist: relative eigenvalue " << lambda(i) << " is not positive";
      throw DomainError(os.str());
    }
    const double l = std::log(lambda(i));
    acc += l * l;
  }
  return std::sqrt(acc);
}

double Spd::dist(const Point& x, const Point& y) const {
  if (same_point(x, y)) return 0.0;
  return dist(frame(x), y);
}

Tangent Spd::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v);
  if (same_point(x, y)) return {y.coords, v.coords};
  const Frame f = frame(x);
  const Matrix s = linalg::symmetrize(f.inv_sqrt * y.coords * f.inv_sqrt);
  // E = (Y X^-1)^{1/2} = X^{1/2} (X^{-1/2} Y X^{-1/2})^{1/2} X^{-1/2}
  const Matrix e = f.sqrt * linalg::sqrtm_spd(s) * f.inv_sqrt;
  return {y.coords, linalg::symmetrize(e * v.coords * e.transpose())};
}

Tangent Spd::project_tangent(const Point& x, const Matrix& w) const {
  require_shape(w, dim(), dim(), "SPD ambient matrix");
  return {x.coords, linalg::symmetrize(x.coords * linalg::symmetrize(w) * x.coords)};
}

Geodesic Spd::geodesic(const Point& x, const Tangent& v) const {
  require_base(x, v);
  const Frame f = frame(x);
  const Matrix s = linalg::symmetrize(f.inv_sqrt * v.coords * f.inv_sqrt);
  if (s.norm() < kSmallNorm) {
    return [x](double) { return x; };
  }
  const linalg::EigDecomp eig = linalg::sym_eig(s);
  Matrix b = f.sqrt * eig.eigenvectors;
  Vector lambda = eig.eigenvalues;
  return [b = std::move(b), lambda = std::move(lambda)](double t) {
    const Vector scale = (t * lambda).array().exp().matrix();
    return Point{linalg::symmetrize(b * scale.asDiagonal() * b.transpose())};
  };
}

std::vector<Tangent> Spd::tangent_basis(const Point& x) const {
  const Frame f = frame(x);
  const int d = dim();
  std::vector<Tangent> basis;
  basis.reserve(tangent_dim());
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      Matrix b = Matrix::Zero(d, d);
      if (i == j) {
        b(i, i) = 1.0;
      } else {
        b(i, j) = b(j, i) = std::numbers::sqrt2 / 2.0;
      }
      basis.push_back({x.coords, linalg::symmetrize(f.sqrt * b * f.sqrt)});
    }
  }
  return basis;
}

Point Spd::random_point(Rng& rng) const {
  const Matrix g = gaussian_matrix(dim(), dim(), rng);
  return {linalg::expm_sym(0.25 * (g + g.transpose()))};
}

Tangent Spd::random_unit_tangent(const Point& x, Rng& rng) const {
  const Matrix g = gaussian_matrix(dim(), dim(), rng);
  Matrix s = linalg::symmetrize(g);
  s /= s.norm();
  const linalg::SpdRoots r = linalg::spd_roots(x.coords);
  return {x.coords, linalg::symmetrize(r.sqrt * s * r.sqrt)};
}

// ---------------------------------------------------------------------------
// Euclidean

Euclidean::Euclidean(int d) : Manifold(d) {
  if (d < 1) throw ContractViolation("Euclidean needs dimension >= 1");
}

std::string Euclidean::name() const { return "Euclidean(" + std::to_string(dim()) + ")"; }

void Euclidean::check_point(const Point& x) const {
  require_shape(x.coords, dim(), 1, "Euclidean point");
  if (!x.coords.allFinite()) throw DomainError("Euclidean point has non-finite entries");
}

double Euclidean::inner(const Point& x, const Tangent& u, const Tangent& v) const {
  require_base(x, u);
  require_base(x, v);
  return frobenius_inner(u.coords, v.coords);
}

Point Euclidean::exp(const Point& x, const Tangent& v) const {
  require_base(x, v);
  return {x.coords + v.coords};
}

Tangent Euclidean::log(const Point& x, const Point& y) const {
  return {x.coords, y.coords - x.coords};
}

Tangent Euclidean::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v);
  return {y.coords, v.coords};
}

double Euclidean::dist(const Point& x, const Point& y) const {
  return (y.coords - x.coords).norm();
}

Tangent Euclidean::project_tangent(const Point& x, const Matrix& w) const {
  require_shape(w, dim(), 1, "Euclidean ambient vector");
  return {x.coords, w};
}

std::vector<Tangent> Euclidean::tangent_basis(const Point& x) const {
  std::vector<Tangent> basis;
  basis.reserve(dim());
  for (int i = 0; i < dim(); ++i) {
    basis.push_back({x.coords, Matrix::Identity(dim(), dim()).col(i)});
  }
  return basis;
}

Point Euclidean::random_point(Rng& rng) const { return {gaussian_matrix(dim(), 1, rng)}; }

Tangent Euclidean::random_unit_tangent(const Point& x, Rng& rng) const {
  Matrix g = gaussian_matrix(dim(), 1, rng);
  g /= g.norm();
  return {x.coords, std::move(g)};
}

}  // namespace rmom
