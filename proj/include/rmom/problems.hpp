#pragma once

// Benchmark objectives and their instance generators:
//   Rayleigh quotient  f(x) = -1/2 x^T A x           on the sphere
//   Karcher mean       f(X) = 1/(2m) sum d(A_i, X)^2  on SPD
//   log-capacity       f(X) = logdet T(X) - logdet X  on SPD, T(X) = sum A_i X A_i^T
// plus the Gurvits alternating normalization used as the scaling baseline.

#include <cstdint>
#include <vector>

#include "rmom/objective.hpp"

namespace rmom {

// -- Rayleigh ---------------------------------------------------------------

struct RayleighInstance {
  Matrix a;
  double lipschitz = 0.0;  // lambda_max(A)
  double mu_hint = 0.0;    // lambda_min(A)
  int n = 0;               // columns of B in A = B B^T / d (0 if not generated)
  std::uint64_t seed = 0;
};

/// Wraps a symmetric matrix, filling lipschitz / mu_hint from its spectrum.
RayleighInstance make_rayleigh(const Matrix& a);

/// A = B B^T / d with B a d x n standard Gaussian matrix.
RayleighInstance gen_rayleigh(int d, int n, std::uint64_t seed);

/// A + gamma I.
RayleighInstance shifted(const RayleighInstance& inst, double gamma);

double rayleigh_value(const RayleighInstance& inst, const Point& x);
Tangent rayleigh_grad(const RayleighInstance& inst, const Point& x);

class RayleighObjective final : public Objective {
 public:
  explicit RayleighObjective(RayleighInstance inst);

  const Manifold& manifold() const override { return sphere_; }
  std::string name() const override { return "rayleigh"; }
  double value(const Point& x) const override { return rayleigh_value(inst_, x); }
  Tangent grad(const Point& x) const override { return rayleigh_grad(inst_, x); }

  const RayleighInstance& instance() const { return inst_; }

 private:
  RayleighInstance inst_;
  Sphere sphere_;
};

// -- Karcher mean -----------------------------------------------------------

struct KarcherInstance {
  std::vector<Matrix> mats;
  double cond = 1.0;
  std::uint64_t seed = 0;

  int d() const { return mats.empty() ? 0 : static_cast<int>(mats.front().rows()); }
  int m() const { return static_cast<int>(mats.size()); }
};

/// m SPD d x d matrices, each Q diag(lambda) Q^T with Q Haar-orthogonal and
/// lambda log-uniform on [1, cond] with both endpoints present.
KarcherInstance gen_spd_set(int m, int d, double cond, std::uint64_t seed);

double karcher_value(const KarcherInstance& inst, const Point& x);
Tangent karcher_grad(const KarcherInstance& inst, const Point& x);

class KarcherObjective final : public Objective {
 public:
  explicit KarcherObjective(KarcherInstance inst);

  const Manifold& manifold() const override { return spd_; }
  std::string name() const override { return "karcher"; }
  double value(const Point& x) const override { return karcher_value(inst_, x); }
  Tangent grad(const Point& x) const override { return karcher_grad(inst_, x); }

  const KarcherInstance& instance() const { return inst_; }

 private:
  KarcherInstance inst_;
  Spd spd_;
};

// -- operator scaling -------------------------------------------------------

struct ScalingInstance {
  std::vector<Matrix> ops;
  std::uint64_t seed = 0;

  int d() const { return ops.empty() ? 0 : static_cast<int>(ops.front().rows()); }
  int m() const { return static_cast<int>(ops.size()); }
};

/// m standard Gaussian d x d matrices.
ScalingInstance gen_scaling(int m, int d, std::uint64_t seed);

/// T(X) = sum A_i X A_i^T
Matrix op_apply(const ScalingInstance& inst, const Matrix& x);
/// T*(Y) = sum A_i^T Y A_i
Matrix op_adjoint(const ScalingInstance& inst, const Matrix& y);

double capacity_value(const ScalingInstance& inst, const Point& x);
Tangent capacity_grad(const ScalingInstance& inst, const Point& x);

class CapacityObjective final : public Objective {
 public:
  explicit CapacityObjective(ScalingInstance inst);

  const Manifold& manifold() const override { return spd_; }
  std::string name() const override { return "scaling"; }
  double value(const Point& x) const override { return capacity_value(inst_, x); }
  Tangent grad(const Point& x) const override { return capacity_grad(inst_, x); }

  const ScalingInstance& instance() const { return inst_; }

 private:
  ScalingInstance inst_;
  Spd spd_;
};

/// tr((T^(I) - I)^2) + tr((T^*(I) - I)^2) for the scaled tuple
/// A^_i = Y^{-1/2} A_i X^{1/2}.
double ds_distance(const ScalingInstance& inst, const Matrix& x, const Matrix& y);

/// ds_distance(inst, X, T(X)): the residual of the scaling induced by X alone.
double ds_distance_at(const ScalingInstance& inst, const Matrix& x);

enum class ScalingSide { kRight, kLeft };

/// (sum A_j^T A_j)^{-1/2} for kRight, (sum A_j A_j^T)^{-1/2} for kLeft.
Matrix scaling_normalizer(const ScalingInstance& inst, ScalingSide side);

/// Right: A_i <- A_i (sum A_j^T A_j)^{-1/2}. Left: A_i <- (sum A_j A_j^T)^{-1/2} A_i.
/// Throws DomainError if the Gram matrix is singular.
ScalingInstance gurvits_half_step(const ScalingInstance& inst, ScalingSide side);

/// One right half-step followed by one left half-step.
ScalingInstance gurvits_step(const ScalingInstance& inst);

// -- Euclidean quadratic ----------------------------------------------------

/// f(x) = 1/2 (x - c)^T H (x - c) on R^d.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix h, Vector center);

  const Manifold& manifold() const override { return space_; }
  std::string name() const override { return "quadratic"; }
  double value(const Point& x) const override;
  Tangent grad(const Point& x) const override;

  const Matrix& hessian() const { return h_; }
  const Vector& center() const { return c_; }

 private:
  Matrix h_;
  Vector c_;
  Euclidean space_;
};

}  // namespace rmom
