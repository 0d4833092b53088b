#pragma once

// Iteration engines: the geodesic-search momentum method (RAGDsDR), its
// restarted variant for weakly-quasi-convex objectives, and the baselines
// (RGD, fixed-beta linear coupling, RAGD).

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "rmom/curvature.hpp"
#include "rmom/geodesic_search.hpp"
#include "rmom/objective.hpp"

namespace rmom {

enum class BetaRule {
  kSearch,    // golden-section geodesic search
  kNesterov,  // beta_k = k / (k + 2): Riemannian linear coupling
};

struct OptConfig {
  double lipschitz = 1.0;
  CurvatureConstants curvature{};
  double diameter = 1.0;  // the D the constants were computed with
  BetaRule beta_rule = BetaRule::kSearch;
  SearchConfig search{};
  long max_iters = 300;
  double grad_tol = 1e-10;
  bool record_points = false;  // keep x_k, v_k, y_k for certification
  bool timing = true;          // wall_ns column; zero when false

  void validate() const;
};

/// Builds an OptConfig whose curvature constants come from the manifold's
/// curvature bounds and the diameter bound D.
OptConfig make_opt_config(const Manifold& m, double lipschitz, double diameter);

struct OptState {
  Point x;
  Point v;
  double big_a = 0.0;  // A_k
  long k = 0;          // iterations since the last (re)start
  double f_x = std::numeric_limits<double>::quiet_NaN();  // cached f(x), NaN if unknown
};

/// One row of a trace. Row k describes the step from x_k to x_{k+1}:
/// f_x = f(x_k), f_y = f(y_k), a_next = a_{k+1}, big_a = A_{k+1}.
struct IterRecord {
  long k = 0;
  double f_x = 0.0;
  double f_y = 0.0;
  double grad_norm_y = 0.0;
  double beta = 0.0;
  double a_next = 0.0;
  double big_a = 0.0;
  double cond2_margin = 0.0;
  double dist_x0 = 0.0;
  std::int64_t wall_ns = 0;
};

struct StepPoints {
  Point x;
  Point v;
  Point y;
  Tangent grad_y;
};

struct Trace {
  std::vector<IterRecord> rows;
  std::vector<StepPoints> points;  // filled when record_points is set
  Point final_x;
  Point final_v;
  double final_f = 0.0;
  std::vector<long> restarts;  // rows at which a new inner loop begins

  /// f(x_0), ..., f(x_N): the value sequence including the final iterate.
  std::vector<double> values() const;
};

/// Positive root of zeta L a^2 - a - A = 0.
double a_next(double big_a, double zeta, double lipschitz);

/// exp_x(-grad / L)
Point rgd_step(const Manifold& m, const Point& x, const Tangent& grad, double lipschitz);

struct StepResult {
  OptState next;
  IterRecord record;
  StepPoints points;
};

/// One iteration of the momentum method. `origin` is x_0 of the run and only
/// feeds the dist_x0 column.
StepResult ragdsdr_step(const OptState& state, const Objective& f, const OptConfig& cfg,
                        const Point& origin);

Trace run_ragdsdr(const Objective& f, const Point& x0, const OptConfig& cfg);

Trace run_rgd(const Objective& f, const Point& x0, const OptConfig& cfg);

// -- restarted variant ------------------------------------------------------

struct RestartConfig {
  double alpha = 1.0;
  double c = 2.0;
  double f_star = 0.0;
  double target = 0.0;    // stop once f - f_star <= target (0 disables)
  long inner_budget = 0;  // abort if one inner loop exceeds this; 0 = 10 * N_0

  void validate() const;
};

/// Steps after which the contraction test is guaranteed to fire in an inner
/// loop whose starting suboptimality is `eps_segment`:
///   N = ceil(q + sqrt(q^2 + 4 zeta L D^2 / A)),  q = d(M) zeta L D^2 / (2A),
///   A = (c - 1) alpha / c * eps_segment - eps_tilde.
/// +inf when A <= 0.
double restart_step_bound(const OptConfig& cfg, double alpha, double c, double eps_segment,
                          double eps_tilde);

Trace run_restarted(const Objective& f, const Point& x0, const OptConfig& cfg,
                    const RestartConfig& rcfg);

// -- RAGD baseline ----------------------------------------------------------

struct RagdParams {
  double lipschitz = 1.0;
  double mu = 0.0;
  double shrink = -1.0;  // beta of the constant-step scheme; < 0 means sqrt(mu / L) / 5

  void validate() const;
};

struct RagdCoefficients {
  double h;
  double alpha;
  double gamma;
  double gamma_bar;
  double couple;  // weight of log_x(v) when forming y
};

RagdCoefficients ragd_coefficients(const RagdParams& p);

struct RagdState {
  Point x;
  Point v;
  long k = 0;
};

struct RagdStepResult {
  RagdState next;
  IterRecord record;
};

RagdStepResult ragd_baseline_step(const RagdState& state, const Objective& f,
                                  const RagdParams& p);

Trace run_ragd(const Objective& f, const Point& x0, const RagdParams& p, long max_iters,
               double grad_tol, bool timing = true);

}  // namespace rmom
