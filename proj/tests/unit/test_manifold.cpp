#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "../support/oracles.hpp"
#include "rmom/errors.hpp"
#include "rmom/manifold.hpp"

using namespace rmom;

namespace {

Point e(int d, int i) {
  Matrix x = Matrix::Zero(d, 1);
  x(i, 0) = 1.0;
  return {x};
}

Matrix diag2(double a, double b) {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("inner products") {
  Euclidean r2(2);
  const Point o{Matrix::Zero(2, 1)};
  const Tangent u{o.coords, e(2, 0).coords};
  CHECK(r2.inner(o, u, u) == 1.0);

  Spd spd(2);
  const Point id{Matrix::Identity(2, 2)};
  const Tangent t{id.coords, Matrix::Identity(2, 2)};
  CHECK(spd.inner(id, t, t) == doctest::Approx(2.0));

  const Point x{diag2(2, 2)};
  const Tangent v{x.coords, diag2(2, 2)};
  CHECK(spd.inner(x, v, v) == doctest::Approx(2.0));
}

TEST_CASE("sphere closed forms") {
  Sphere s(3);
  const double h = std::numbers::pi / 2;
  const Point e1 = e(3, 0), e2 = e(3, 1);
  const Tangent v{e1.coords, h * e2.coords};
  CHECK((s.exp(e1, v).coords - e2.coords).norm() < 1e-15);
  CHECK((s.log(e1, e2).coords - h * e2.coords).norm() < 1e-15);
  CHECK(s.dist(e1, e2) == doctest::Approx(h).epsilon(1e-15));
  CHECK(s.log(e1, e1).coords.norm() == 0.0);
  CHECK(s.dist(e1, e1) == 0.0);

  CHECK(s.project_tangent(e1, e1.coords).coords.norm() < 1e-16);
  CHECK((s.project_tangent(e1, e2.coords).coords - e2.coords).norm() < 1e-16);

  // the geodesic velocity is parallel
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Point x{oracle::random_unit(3, rng)};
    const Point y{oracle::random_unit(3, rng)};
    const double r = s.dist(x, y);
    const Tangent out = s.transport(x, y, s.log(x, y));
    CHECK((out.coords / r + s.log(y, x).coords / r).norm() < 1e-12);
  }
}

TEST_CASE("sphere log at the antipode is a domain error") {
  Sphere s(3);
  const Point e1 = e(3, 0);
  CHECK_THROWS_AS(s.log(e1, Point{-e1.coords}), DomainError);
  CHECK_THROWS_AS(s.check_point(Point{2.0 * e1.coords}), DomainError);
}

TEST_CASE("SPD closed forms at the identity") {
  Spd spd(2);
  const Point id{Matrix::Identity(2, 2)};
  Matrix w(2, 2);
  w << 0.3, -0.2, -0.2, 0.5;
  CHECK((spd.exp(id, {id.coords, w}).coords - linalg::expm_sym(w)).norm() < 1e-14);

  Matrix b(2, 2);
  b << 2.0, 0.5, 0.5, 1.5;
  CHECK((spd.log(id, Point{b}).coords - linalg::logm_spd(b)).norm() < 1e-14);

  const Matrix bh = linalg::sqrtm_spd(b);
  const Tangent t = spd.transport(id, Point{b}, {id.coords, w});
  CHECK((t.coords - bh * w * bh).norm() < 1e-13);

  const double e2 = std::exp(2.0);
  CHECK(spd.dist(id, Point{diag2(e2, e2)}) == doctest::Approx(2.0 * std::sqrt(2.0)));

  Matrix a(2, 2);
  a << 1, 2, 0, 1;
  CHECK((spd.project_tangent(id, a).coords - linalg::symmetrize(a)).norm() < 1e-16);

  CHECK_THROWS_AS(spd.check_point(Point{diag2(1, -1)}), DomainError);
}

TEST_CASE("tangent base mismatch is a contract violation") {
  Euclidean r2(2);
  const Point x{Matrix::Zero(2, 1)};
  const Tangent u{Matrix::Ones(2, 1), Matrix::Ones(2, 1)};
  CHECK_THROWS_AS(r2.exp(x, u), ContractViolation);
}

TEST_CASE("manifold axioms on random samples") {
  std::vector<std::unique_ptr<Manifold>> ms;
  ms.push_back(std::make_unique<Sphere>(10));
  ms.push_back(std::make_unique<Spd>(5));
  ms.push_back(std::make_unique<Euclidean>(10));
  for (const auto& m : ms) {
    CAPTURE(m->name());
    Rng rng(2024);
    for (int i = 0; i < 100; ++i) {
      const Point x = m->random_point(rng);
      const Point y = m->random_point(rng);
      const Tangent u = m->random_unit_tangent(x, rng);
      const Tangent w = m->random_unit_tangent(x, rng);

      // exp_x(0) = x and log_x(x) = 0
      CHECK((m->exp(x, zero_tangent(x)).coords - x.coords).norm() < 1e-14 * (1 + x.coords.norm()));
      CHECK(m->log(x, x).coords.norm() < 1e-12);

      // round trip and symmetry of the distance
      const Tangent l = m->log(x, y);
      CHECK((m->exp(x, l).coords - y.coords).norm() < 1e-8 * (1 + y.coords.norm()));
      CHECK(m->dist(x, y) == doctest::Approx(m->dist(y, x)).epsilon(1e-10));
      CHECK(m->norm(x, l) == doctest::Approx(m->dist(x, y)).epsilon(1e-10));

      // transport is an isometry and transport(x, x) is the identity
      const Tangent tu = m->transport(x, y, u);
      const Tangent tw = m->transport(x, y, w);
      CHECK(m->inner(y, tu, tw) == doctest::Approx(m->inner(x, u, w)).epsilon(1e-9));
      CHECK((m->transport(x, x, u).coords - u.coords).norm() < 1e-12);

      // triangle inequality
      const Point z = m->random_point(rng);
      CHECK(m->dist(x, z) <= m->dist(x, y) + m->dist(y, z) + 1e-12);
    }
  }
}
