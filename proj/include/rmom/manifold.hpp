#pragma once

// Riemannian geometry kernels: the unit sphere, SPD matrices with the
// affine-invariant metric g_X(U, V) = tr(X^-1 U X^-1 V), and flat space.
//
// Points and tangent vectors are stored in ambient coordinates: a d x 1
// column for the sphere and Euclidean space, a symmetric d x d matrix for SPD.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "rmom/linalg.hpp"
#include "rmom/rng.hpp"

namespace rmom {

struct Point {
  Matrix coords;
};

/// A tangent vector; `base` is a copy of the point it is attached to.
struct Tangent {
  Matrix base;
  Matrix coords;
};

enum class ManifoldType { kSphere, kSpd, kEuclidean };

struct CurvatureRange {
  double k_min;
  double k_max;
};

/// t -> exp_x(t v) for a fixed (x, v).
using Geodesic = std::function<Point(double)>;

bool same_point(const Point& a, const Point& b);

Tangent zero_tangent(const Point& x);
Tangent operator*(double s, const Tangent& v);
Tangent operator+(const Tangent& a, const Tangent& b);
Tangent operator-(const Tangent& a, const Tangent& b);
Tangent operator-(const Tangent& v);

class Manifold {
 public:
  explicit Manifold(int dim) : dim_(dim) {}
  virtual ~Manifold() = default;

  int dim() const { return dim_; }

  virtual ManifoldType type() const = 0;
  virtual std::string name() const = 0;
  virtual int tangent_dim() const = 0;
  /// Global sectional-curvature bounds.
  virtual CurvatureRange curvature() const = 0;

  /// Throws DomainError if `x` violates the point invariants.
  virtual void check_point(const Point& x) const = 0;

  virtual double inner(const Point& x, const Tangent& u, const Tangent& v) const = 0;
  double norm(const Point& x, const Tangent& u) const;

  virtual Point exp(const Point& x, const Tangent& v) const = 0;
  virtual Tangent log(const Point& x, const Point& y) const = 0;
  /// Parallel transport of `v` (based at x) along the geodesic from x to y.
  virtual Tangent transport(const Point& x, const Point& y, const Tangent& v) const = 0;
  virtual double dist(const Point& x, const Point& y) const = 0;
  /// Converts an ambient (Euclidean) gradient into the Riemannian one.
  virtual Tangent project_tangent(const Point& x, const Matrix& w) const = 0;

  /// Evaluator of t -> exp_x(t v). Overridden where the map can be
  /// factored once and reused for many t.
  virtual Geodesic geodesic(const Point& x, const Tangent& v) const;

  /// Orthonormal basis of T_x M under the metric.
  virtual std::vector<Tangent> tangent_basis(const Point& x) const = 0;

  virtual Point random_point(Rng& rng) const = 0;
  /// Uniformly oriented tangent vector of unit norm.
  virtual Tangent random_unit_tangent(const Point& x, Rng& rng) const = 0;

 protected:
  void require_base(const Point& x, const Tangent& v) const;

 private:
  int dim_;
};

/// Unit sphere S^{d-1} in R^d. K = 1.
class Sphere final : public Manifold {
 public:
  /// log/dist/transport refuse pairs at distance >= pi - kAntipodalGuard.
  static constexpr double kAntipodalGuard = 1e-6;

  explicit Sphere(int d);

  ManifoldType type() const override { return ManifoldType::kSphere; }
  std::string name() const override;
  int tangent_dim() const override { return dim() - 1; }
  CurvatureRange curvature() const override { return {1.0, 1.0}; }
  void check_point(const Point& x) const override;

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double dist(const Point& x, const Point& y) const override;
  Tangent project_tangent(const Point& x, const Matrix& w) const override;
  std::vector<Tangent> tangent_basis(const Point& x) const override;
  Point random_point(Rng& rng) const override;
  Tangent random_unit_tangent(const Point& x, Rng& rng) const override;
};

/// Symmetric positive-definite d x d matrices, affine-invariant metric.
/// K in [-1/2, 0].
class Spd final : public Manifold {
 public:
  static constexpr double kMinCurvature = -0.5;

  explicit Spd(int d);

  ManifoldType type() const override { return ManifoldType::kSpd; }
  std::string name() const override;
  int tangent_dim() const override { return dim() * (dim() + 1) / 2; }
  CurvatureRange curvature() const override { return {kMinCurvature, 0.0}; }
  void check_point(const Point& x) const override;

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double dist(const Point& x, const Point& y) const override;
  Tangent project_tangent(const Point& x, const Matrix& w) const override;
  Geodesic geodesic(const Point& x, const Tangent& v) const override;
  std::vector<Tangent> tangent_basis(const Point& x) const override;
  Point random_point(Rng& rng) const override;
  Tangent random_unit_tangent(const Point& x, Rng& rng) const override;

  /// Square roots of a base point, reusable across many log/dist calls.
  struct Frame {
    Matrix point;
    Matrix sqrt;
    Matrix inv_sqrt;
  };
  Frame frame(const Point& x) const;
  Tangent log(const Frame& fx, const Point& y) const;
  double dist(const Frame& fx, const Point& y) const;
};

/// R^d with the standard inner product. K = 0.
class Euclidean final : public Manifold {
 public:
  explicit Euclidean(int d);

  ManifoldType type() const override { return ManifoldType::kEuclidean; }
  std::string name() const override;
  int tangent_dim() const override { return dim(); }
  CurvatureRange curvature() const override { return {0.0, 0.0}; }
  void check_point(const Point& x) const override;

  double inner(const Point& x, const Tangent& u, const Tangent& v) const override;
  Point exp(const Point& x, const Tangent& v) const override;
  Tangent log(const Point& x, const Point& y) const override;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const override;
  double dist(const Point& x, const Point& y) const override;
  Tangent project_tangent(const Point& x, const Matrix& w) const override;
  std::vector<Tangent> tangent_basis(const Point& x) const override;
  Point random_point(Rng& rng) const override;
  Tangent random_unit_tangent(const Point& x, Rng& rng) const override;
};

std::unique_ptr<Manifold> make_manifold(ManifoldType type, int d);

}  // namespace rmom
