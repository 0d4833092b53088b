#pragma once

// One-dimensional relaxation step: choose beta in [0, 1] minimizing f along
// the geodesic from v_k to x_k, and check the two conditions the analysis
// consumes:
//   f(y_k) <= f(x_k)                         (exact, from the beta = 1 endpoint)
//   <grad f(y_k), log_{y_k}(v_k)> >= -eps    (up to the search inexactness)

#include <functional>
#include <optional>

#include "rmom/objective.hpp"

namespace rmom {

struct SearchConfig {
  int max_iters = 10;
  double bracket_tol = 1e-6;
  double eps_tilde = 0.0;  // tolerated inexactness of the second condition

  void validate() const;
};

struct GoldenResult {
  double beta;
  double value;
  int evals;
};

/// Golden-section minimization of phi on [0, 1]. The endpoints are always
/// evaluated and are eligible; the result is the best candidate seen. Ties
/// are resolved in favour of beta = 1, then beta = 0.
///
/// Evaluates phi at most max_iters + 3 times (two endpoints, two interior
/// seeds, then one new point per further iteration); the final bracket has
/// width <= 0.618^max_iters unless it fell below bracket_tol earlier.
GoldenResult golden_section(const std::function<double(double)>& phi, const SearchConfig& cfg);

struct SearchResult {
  double beta;
  Point y;
  double f_y;
  int evals;
};

/// Runs golden_section on beta -> f(exp_v(beta log_v(x))). The beta = 1 and
/// beta = 0 candidates return x and v themselves, so f_y <= f(x) and
/// f_y <= f(v) hold exactly. `f_x` / `f_v` may be supplied to skip those
/// evaluations.
SearchResult search_geodesic(const Objective& f, const Point& v, const Point& x,
                             const SearchConfig& cfg, std::optional<double> f_x = std::nullopt,
                             std::optional<double> f_v = std::nullopt);

struct SearchConditions {
  bool cond1;
  double cond2_margin;  // <grad f(y), log_y(v)>
  bool cond2;           // cond2_margin >= -eps_tilde
};

SearchConditions verify_conditions(const Objective& f, const Point& y, const Point& x_k,
                                   const Point& v_k, double eps_tilde);

/// Same check with f(y), f(x_k) and grad f(y) already known.
SearchConditions verify_conditions(const Manifold& m, double f_y, const Tangent& grad_y,
                                   const Point& y, double f_x, const Point& v_k,
                                   double eps_tilde);

}  // namespace rmom
