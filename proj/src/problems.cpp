#include "rmom/problems.hpp"

#include <cmath>
#include <sstream>

#include "rmom/errors.hpp"
#include "rmom/rng.hpp"

namespace rmom {

namespace {

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the
/// signs of R's diagonal folded into Q.
Matrix random_orthogonal(int d, Rng& rng) {
  const Matrix g = gaussian_matrix(d, d, rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

/// log det of an SPD matrix; DomainError when the factorization fails.
double logdet_spd(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DomainError(std::string(what) + " is not positive definite");
  }
  const Vector diag = llt.matrixLLT().diagonal();
  double s = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    if (!(diag(i) > 0.0)) throw DomainError(std::string(what) + " is singular");
    s += std::log(diag(i));
  }
  return 2.0 * s;
}

Matrix inverse_spd(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DomainError(std::string(what) + " is not positive definite");
  }
  return linalg::symmetrize(llt.solve(Matrix::Identity(m.rows(), m.cols())));
}

}  // namespace

// -- Rayleigh ---------------------------------------------------------------

RayleighInstance make_rayleigh(const Matrix& a) {
  RayleighInstance inst;
  inst.a = linalg::symmetrize(a);
  const Vector ev = linalg::sym_eigenvalues(inst.a);
  inst.mu_hint = ev(0);
  inst.lipschitz = ev(ev.size() - 1);
  return inst;
}

RayleighInstance gen_rayleigh(int d, int n, std::uint64_t seed) {
  if (d < 1 || n < 1) throw ConfigError("gen_rayleigh needs d >= 1 and n >= 1");
  Rng rng = instance_stream(seed);
  const Matrix b = gaussian_matrix(d, n, rng);
  RayleighInstance inst = make_rayleigh((b * b.transpose()) / static_cast<double>(d));
  inst.n = n;
  inst.seed = seed;
  return inst;
}

RayleighInstance shifted(const RayleighInstance& inst, double gamma) {
  RayleighInstance out = inst;
  out.a.diagonal().array() += gamma;
  out.lipschitz += gamma;
  out.mu_hint += gamma;
  return out;
}

double rayleigh_value(const RayleighInstance& inst, const Point& x) {
  return -0.5 * x.coords.col(0).dot(inst.a * x.coords.col(0));
}

Tangent rayleigh_grad(const RayleighInstance& inst, const Point& x) {
  const Vector ax = inst.a * x.coords.col(0);
  const double q = x.coords.col(0).dot(ax);
  return {x.coords, -(ax - q * x.coords.col(0))};
}

RayleighObjective::RayleighObjective(RayleighInstance inst)
    : inst_(std::move(inst)), sphere_(static_cast<int>(inst_.a.rows())) {}

// -- Karcher ----------------------------------------------------------------

KarcherInstance gen_spd_set(int m, int d, double cond, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ConfigError("gen_spd_set needs m >= 1 and d >= 1");
  if (!(cond >= 1.0) || !std::isfinite(cond)) throw ConfigError("cond must be >= 1");
  Rng rng = instance_stream(seed);
  const double log_cond = std::log(cond);
  KarcherInstance inst;
  inst.cond = cond;
  inst.seed = seed;
  inst.mats.reserve(m);
  for (int i = 0; i < m; ++i) {
    Vector lambda(d);
    lambda(0) = 1.0;
    for (int j = 1; j + 1 < d; ++j) {
      // boost rejects until x < hi, which never happens on an empty range
      lambda(j) = log_cond > 0.0 ? std::exp(uniform(rng, 0.0, log_cond)) : 1.0;
    }
    if (d > 1) lambda(d - 1) = cond;
    const Matrix q = random_orthogonal(d, rng);
    inst.mats.push_back(linalg::symmetrize(q * lambda.asDiagonal() * q.transpose()));
  }
  return inst;
}

double karcher_value(const KarcherInstance& inst, const Point& x) {
  const Spd spd(inst.d());
  const Spd::Frame fx = spd.frame(x);
  double s = 0.0;
  for (const Matrix& a : inst.mats) {
    const double r = spd.dist(fx, Point{a});
    s += r * r;
  }
  return s / (2.0 * inst.m());
}

Tangent karcher_grad(const KarcherInstance& inst, const Point& x) {
  const Spd spd(inst.d());
  const Spd::Frame fx = spd.frame(x);
  Matrix sum = Matrix::Zero(inst.d(), inst.d());
  for (const Matrix& a : inst.mats) sum += spd.log(fx, Point{a}).coords;
  return {x.coords, linalg::symmetrize(sum * (-1.0 / inst.m()))};
}

KarcherObjective::KarcherObjective(KarcherInstance inst)
    : inst_(std::move(inst)), spd_(inst_.d()) {
  if (inst_.mats.empty()) throw ConfigError("Karcher instance needs at least one matrix");
}

// -- scaling ----------------------------------------------------------------

ScalingInstance gen_scaling(int m, int d, std::uint64_t seed) {
  if (m < 1 || d < 1) throw ConfigError("gen_scaling needs m >= 1 and d >= 1");
  Rng rng = instance_stream(seed);
  ScalingInstance inst;
  inst.seed = seed;
  for (int i = 0; i < m; ++i) inst.ops.push_back(gaussian_matrix(d, d, rng));
  return inst;
}

Matrix op_apply(const ScalingInstance& inst, const Matrix& x) {
  Matrix out = Matrix::Zero(inst.d(), inst.d());
  for (const Matrix& a : inst.ops) out.noalias() += a * x * a.transpose();
  return linalg::symmetrize(out);
}

Matrix op_adjoint(const ScalingInstance& inst, const Matrix& y) {
  Matrix out = Matrix::Zero(inst.d(), inst.d());
  for (const Matrix& a : inst.ops) out.noalias() += a.transpose() * y * a;
  return linalg::symmetrize(out);
}

double capacity_value(const ScalingInstance& inst, const Point& x) {
  return logdet_spd(op_apply(inst, x.coords), "T(X)") - logdet_spd(x.coords, "X");
}

Tangent capacity_grad(const ScalingInstance& inst, const Point& x) {
  const Matrix t_inv = inverse_spd(op_apply(inst, x.coords), "T(X)");
  const Matrix egrad = op_adjoint(inst, t_inv) - inverse_spd(x.coords, "X");
  return {x.coords, linalg::symmetrize(x.coords * egrad * x.coords)};
}

CapacityObjective::CapacityObjective(ScalingInstance inst)
    : inst_(std::move(inst)), spd_(inst_.d()) {
  if (inst_.ops.empty()) throw ConfigError("scaling instance needs at least one operator");
  const Matrix t_eye = op_apply(inst_, Matrix::Identity(inst_.d(), inst_.d()));
  if (t_eye.llt().info() != Eigen::Success) {
    throw DomainError("scaling instance: T(I) is not positive definite");
  }
}

double ds_distance(const ScalingInstance& inst, const Matrix& x, const Matrix& y) {
  const Matrix xs = linalg::sqrtm_spd(x);
  const Matrix yi = linalg::invsqrtm_spd(y);
  const int d = inst.d();
  Matrix row = Matrix::Zero(d, d);
  Matrix col = Matrix::Zero(d, d);
  for (const Matrix& a : inst.ops) {
    const Matrix s = yi * a * xs;
    row.noalias() += s * s.transpose();
    col.noalias() += s.transpose() * s;
  }
  row -= Matrix::Identity(d, d);
  col -= Matrix::Identity(d, d);
  return (row * row).trace() + (col * col).trace();
}

double ds_distance_at(const ScalingInstance& inst, const Matrix& x) {
  return ds_distance(inst, x, op_apply(inst, x));
}

Matrix scaling_normalizer(const ScalingInstance& inst, ScalingSide side) {
  const int d = inst.d();
  Matrix gram = Matrix::Zero(d, d);
  for (const Matrix& a : inst.ops) {
    gram.noalias() += side == ScalingSide::kRight ? Matrix(a.transpose() * a)
                                                  : Matrix(a * a.transpose());
  }
  try {
    return linalg::invsqrtm_spd(linalg::symmetrize(gram));
  } catch (const DomainError& e) {
    throw DomainError(std::string("operator not scalable, singular Gram matrix: ") + e.what());
  }
}

ScalingInstance gurvits_half_step(const ScalingInstance& inst, ScalingSide side) {
  const Matrix n = scaling_normalizer(inst, side);
  ScalingInstance out = inst;
  for (Matrix& a : out.ops) a = side == ScalingSide::kRight ? Matrix(a * n) : Matrix(n * a);
  return out;
}

ScalingInstance gurvits_step(const ScalingInstance& inst) {
  return gurvits_half_step(gurvits_half_step(inst, ScalingSide::kRight), ScalingSide::kLeft);
}

// -- quadratic --------------------------------------------------------------

QuadraticObjective::QuadraticObjective(Matrix h, Vector center)
    : h_(std::move(h)), c_(std::move(center)), space_(static_cast<int>(c_.size())) {
  if (h_.rows() != c_.size() || h_.cols() != c_.size()) {
    throw ConfigError("quadratic: Hessian and center have mismatched sizes");
  }
}

double QuadraticObjective::value(const Point& x) const {
  const Vector r = x.coords.col(0) - c_;
  return 0.5 * r.dot(h_ * r);
}

Tangent QuadraticObjective::grad(const Point& x) const {
  return {x.coords, h_ * (x.coords.col(0) - c_)};
}

}  // namespace rmom
