#pragma once

// Post-hoc verification of the inequalities behind the convergence proof,
// evaluated along a recorded trajectory (full-point trace mode):
//   C1        A_k f(x_k) <= psi_k*
//   C2        psi_{k+1}(x*) <= psi_k(x*) + a_{k+1}(f(y_k) + <g, log_y x*> - E_k(x*))
//   lemma1    -E_k(x*) <= ||g|| max(zeta - 1, 1 - delta) D + eps
//   theorem1  f(x_k) - f* <= 2 zeta L d(x0, x*)^2 / k^2 + 4 max(..) zeta L D^2 / k + eps
//   trig      1/2|log_v x|^2 - <log_v w, log_v x> >= 1/2|log_w x|^2 - zeta/2 |log_v w|^2
// and the eigenvalue range of the operator behind zeta and delta.
//
// A margin is (rhs - lhs) oriented so that >= 0 means the inequality holds. It
// passes when margin >= -1e-9 * max(|lhs|, |rhs|).

#include <optional>
#include <string>
#include <vector>

#include "rmom/curvature.hpp"
#include "rmom/optimizers.hpp"

namespace rmom {

constexpr double kCertifyRelTol = 1e-9;

enum class WitnessProvenance { kEigendecomposition, kPresolve, kAnalytic };

std::string to_string(WitnessProvenance p);

struct OptimumWitness {
  Point x_star;
  double f_star = 0.0;
  double grad_norm = 0.0;
  WitnessProvenance provenance = WitnessProvenance::kAnalytic;

  /// Evaluates f and its gradient at x; throws DomainError if the gradient
  /// norm exceeds `tol`.
  static OptimumWitness make(const Objective& f, Point x, WitnessProvenance p,
                             double tol = 1e-10);
};

/// Runs Riemannian gradient descent with step 1/L from x0 until the gradient
/// norm drops to `tol`, `max_iters` is hit, or the gradient norm has not
/// improved for `patience` iterations (the rounding floor). Keeps the iterate
/// with the smallest gradient norm.
OptimumWitness presolve_witness(const Objective& f, const Point& x0, double lipschitz,
                                long max_iters, double tol = 1e-13, long patience = 200);

struct Margin {
  double lhs;
  double rhs;
  double margin;
  bool pass;
};

Margin make_margin(double lhs, double rhs, double rel_tol = kCertifyRelTol);

struct CheckSeries {
  std::vector<Margin> entries;
  std::vector<long> skipped;  // step indices where the check could not be evaluated
  double min_margin = 0.0;
  long worst = -1;            // index of the smallest margin
  bool pass = true;

  void add(const Margin& m);
};

/// psi_0* = 0; psi_{k+1}* = psi_k* + a_{k+1} f(y_k) - zeta a_{k+1}^2 / 2 ||g_k||^2.
/// One entry per iterate, i.e. rows + 1 values.
std::vector<double> psi_star_sequence(const Trace& trace, double zeta);

CheckSeries check_c1(const Trace& trace, const std::vector<double>& psi_star);

/// Per-step quantities at x* shared by C2 and lemma1.
struct ErrorTerm {
  double e_k;    // E_k(x*) = <g, log_y x* - Gamma_v^y log_v x*>
  double eta_k;  // E_k(x*) - <g, log_y v_k>: the part that vanishes in flat space
};

/// Requires trace.points. Steps where a log is undefined are reported empty.
std::vector<std::optional<ErrorTerm>> error_terms(const Manifold& m, const Trace& trace,
                                                  const Point& x_star);

CheckSeries check_c2_at(const Manifold& m, const Trace& trace, const std::vector<double>& psi_star,
                        const OptimumWitness& w);

CheckSeries check_lemma1(const Trace& trace, const std::vector<std::optional<ErrorTerm>>& errors,
                         const CurvatureConstants& c, double diameter, double eps_tilde);

CheckSeries check_theorem1(const Trace& trace, const OptimumWitness& w, const CurvatureConstants& c,
                           double lipschitz, double eps_tilde, double dist_x0_xstar,
                           double diameter);

/// Trig margin of one triangle (v, w, x).
Margin trig_margin(const Manifold& m, const Point& v, const Point& w, const Point& x, double zeta);

/// Trig bound on the trajectory triangles (v_k, v_{k+1}, x*) and (v_k, y_k, x*).
CheckSeries check_trig_trajectory(const Manifold& m, const Trace& trace, const Point& x_star,
                                  double zeta);

struct Triple {
  Point v;
  Point w;
  Point x;
};

/// Random triples whose pairwise distances stay <= diameter.
std::vector<Triple> sample_triples(const Manifold& m, int count, double diameter, Rng& rng);

CheckSeries check_trig_bound(const Manifold& m, double zeta, const std::vector<Triple>& samples);

// -- Hessian-type operator --------------------------------------------------

struct HessianProbe {
  double distance = 0.0;  // d(p, x*)
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double delta_bound = 1.0;
  double zeta_bound = 1.0;
  double asymmetry = 0.0;
  bool discarded = false;
  std::string diagnostic;
  bool pass = true;
};

/// Builds v -> -d/dh Gamma_{q(h)->p} log_{q(h)}(x*), q(h) = exp_p(h v), by
/// central differences in an orthonormal basis of T_p M, symmetrizes it and
/// returns its eigenvalue range against [delta(r) - 1e-3, zeta(r) + 1e-3].
HessianProbe hessian_probe_at(const Manifold& m, const Point& x_star, const Point& p,
                              double h = 1e-5);

struct HessianSummary {
  std::vector<HessianProbe> probes;
  double lambda_min_obs = 0.0;
  double lambda_max_obs = 0.0;
  double delta_bound = 1.0;  // at the largest probe distance
  double zeta_bound = 1.0;
  bool pass = true;
};

/// `per_distance` probes at each distance, in random directions from x*.
HessianSummary hessian_eig_probe(const Manifold& m, const Point& x_star,
                                 const std::vector<double>& distances, int per_distance, Rng& rng);

// -- restart segments -------------------------------------------------------

struct SegmentCheck {
  long start_row;
  long steps;
  double start_gap;  // f(x_0^i) - f*
  double end_gap;
  double bound;      // N_i
  bool contracted;   // end_gap <= (1 - alpha/c) start_gap (true for the open final segment)
  bool within_bound;
};

std::vector<SegmentCheck> check_restart_segments(const Trace& trace, const OptConfig& cfg,
                                                 const RestartConfig& rcfg, double eps_tilde);

// -- full certificate -------------------------------------------------------

struct CertifyOptions {
  bool observed_diameter = false;  // D from the observed pairwise distances
  int trig_samples = 200;
  std::vector<double> hessian_distances;  // empty: skip the probe
  int hessian_per_distance = 2;
  std::uint64_t seed = 0;
};

struct Certificate {
  std::vector<double> psi_star;
  std::vector<double> eta;  // E_k(x*) - <g, log_y v_k> per step
  CheckSeries c1;
  CheckSeries c2;
  CheckSeries lemma1;
  CheckSeries theorem1;
  CheckSeries trig;
  std::optional<HessianSummary> hessian;
  CurvatureConstants curvature{};
  double diameter = 0.0;
  double eps_tilde = 0.0;

  bool verdict() const;
  std::string to_json() const;
};

/// Largest distance among {x_k, v_k, y_k} and x*.
double observed_diameter(const Manifold& m, const Trace& trace, const Point& x_star);

Certificate certify(const Objective& f, const Trace& trace, const OptimumWitness& w,
                    const OptConfig& cfg, const Point& x0, const CertifyOptions& opts = {});

}  // namespace rmom
