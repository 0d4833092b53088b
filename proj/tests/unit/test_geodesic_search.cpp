#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "rmom/errors.hpp"
#include "rmom/geodesic_search.hpp"
#include "rmom/problems.hpp"

using namespace rmom;

namespace {

Point pt(std::initializer_list<double> v) {
  Matrix m(static_cast<Eigen::Index>(v.size()), 1);
  Eigen::Index i = 0;
  for (double x : v) m(i++, 0) = x;
  return {m};
}

QuadraticObjective square_1d() {
  return QuadraticObjective(2.0 * Matrix::Identity(1, 1), Vector::Zero(1));  // f(t) = t^2
}

}  // namespace

TEST_CASE("golden section on simple functions") {
  SearchConfig cfg;
  cfg.max_iters = 20;
  cfg.bracket_tol = 0.0;
  auto r = golden_section([](double b) { return (b - 0.3) * (b - 0.3); }, cfg);
  CHECK(r.beta == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(r.evals <= cfg.max_iters + 3);

  r = golden_section([](double b) { return b; }, cfg);
  CHECK(r.beta == 0.0);
  r = golden_section([](double b) { return -b; }, cfg);
  CHECK(r.beta == 1.0);
  r = golden_section([](double) { return 1.0; }, cfg);
  CHECK(r.beta == 1.0);
}

TEST_CASE("golden section bracket width") {
  for (int n = 1; n <= 12; ++n) {
    SearchConfig cfg;
    cfg.max_iters = n;
    cfg.bracket_tol = 0.0;
    const double target = 0.123456;
    const auto r = golden_section([&](double b) { return std::abs(b - target); }, cfg);
    CHECK(std::abs(r.beta - target) <= std::pow(0.6180339887, n) + 1e-12);
  }
}

TEST_CASE("search config validation") {
  SearchConfig cfg;
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("search along a Euclidean segment") {
  const QuadraticObjective f = square_1d();
  SearchConfig cfg;
  cfg.max_iters = 40;
  const auto r = search_geodesic(f, pt({-1.0}), pt({1.0}), cfg);
  CHECK(std::abs(r.y.coords(0, 0)) < 1e-6);
  CHECK(r.f_y <= f.value(pt({1.0})));

  const auto same = search_geodesic(f, pt({1.0}), pt({1.0}), cfg);
  CHECK(same.y.coords(0, 0) == 1.0);
}

TEST_CASE("search from an eigenvector keeps f_y <= f(x)") {
  Matrix a = Matrix::Zero(3, 3);
  a.diagonal() << 3.0, 2.0, 1.0;
  const RayleighObjective f(make_rayleigh(a));
  const Point x = pt({1, 0, 0});
  const Point v = pt({0, 0.6, 0.8});
  SearchConfig cfg;
  const auto r = search_geodesic(f, v, x, cfg);
  // scan oracle: f is minimized at the eigenvector end
  const Sphere& s = static_cast<const Sphere&>(f.manifold());
  double best = f.value(x);
  for (int i = 0; i <= 1000; ++i) {
    const double b = i / 1000.0;
    best = std::min(best, f.value(s.exp(v, b * s.log(v, x))));
  }
  CHECK(r.f_y <= f.value(x));
  CHECK(r.f_y == doctest::Approx(best).epsilon(1e-12));
  CHECK((r.y.coords - x.coords).norm() == 0.0);
}

TEST_CASE("search conditions") {
  const QuadraticObjective f = square_1d();
  // beta = 0: y = v, margin exactly zero
  auto c = verify_conditions(f, pt({0.5}), pt({2.0}), pt({0.5}), 0.0);
  CHECK(c.cond2_margin == 0.0);
  CHECK(c.cond2);

  // beta = 1, f increasing toward x... from v's side: y = x with f decreasing along v -> x
  c = verify_conditions(f, pt({0.5}), pt({0.5}), pt({2.0}), 0.0);
  CHECK(c.cond1);
  CHECK(c.cond2_margin >= 0.0);

  // exact interior minimizer
  c = verify_conditions(f, pt({0.0}), pt({1.0}), pt({-1.0}), 0.0);
  CHECK(std::abs(c.cond2_margin) < 1e-9);
  CHECK(c.cond1);

  // a point that is worse than x
  c = verify_conditions(f, pt({3.0}), pt({1.0}), pt({-1.0}), 0.0);
  CHECK_FALSE(c.cond1);
}
