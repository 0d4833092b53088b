#include "rmom/optimizers.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "rmom/errors.hpp"

namespace rmom {

namespace {

using Clock = std::chrono::steady_clock;

class Stopwatch {
 public:
  explicit Stopwatch(bool enabled) : enabled_(enabled), start_(Clock::now()) {}
  std::int64_t elapsed_ns() const {
    if (!enabled_) return 0;
    return std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start_).count();
  }

 private:
  bool enabled_;
  Clock::time_point start_;
};

[[noreturn]] void abort_at(const std::exception& e, long k) { throw NumericalAbort(e.what(), k); }

double value_or_eval(const Objective& f, const OptState& s) {
  return std::isnan(s.f_x) ? f.value(s.x) : s.f_x;
}

}  // namespace

void OptConfig::validate() const {
  if (!(lipschitz > 0.0) || !std::isfinite(lipschitz)) {
    throw ConfigError("lipschitz constant L must be positive and finite");
  }
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  if (!(grad_tol >= 0.0)) throw ConfigError("grad_tol must be >= 0");
  if (!(curvature.zeta >= 1.0)) throw ConfigError("zeta must be >= 1");
  if (!(diameter > 0.0)) throw ConfigError("diameter D must be positive");
  search.validate();
}

OptConfig make_opt_config(const Manifold& m, double lipschitz, double diameter) {
  OptConfig cfg;
  cfg.lipschitz = lipschitz;
  cfg.diameter = diameter;
  cfg.curvature = curvature_constants(bounds_for(m, diameter));
  return cfg;
}

std::vector<double> Trace::values() const {
  std::vector<double> out;
  out.reserve(rows.size() + 1);
  for (const auto& r : rows) out.push_back(r.f_x);
  out.push_back(final_f);
  return out;
}

double a_next(double big_a, double zeta, double lipschitz) {
  const double zl = zeta * lipschitz;
  return (1.0 + std::sqrt(1.0 + 4.0 * zl * big_a)) / (2.0 * zl);
}

Point rgd_step(const Manifold& m, const Point& x, const Tangent& grad, double lipschitz) {
  return m.exp(x, (-1.0 / lipschitz) * grad);
}

StepResult ragdsdr_step(const OptState& state, const Objective& f, const OptConfig& cfg,
                        const Point& origin) {
  const Manifold& m = f.manifold();
  const double fx = value_or_eval(f, state);

  double beta = 1.0;
  Point y;
  double fy = 0.0;
  if (cfg.beta_rule == BetaRule::kSearch) {
    SearchResult sr = search_geodesic(f, state.v, state.x, cfg.search, fx);
    beta = sr.beta;
    y = std::move(sr.y);
    fy = sr.f_y;
  } else {
    beta = static_cast<double>(state.k) / static_cast<double>(state.k + 2);
    if (beta == 0.0) {
      y = state.v;
    } else if (same_point(state.v, state.x)) {
      y = state.x;
    } else {
      y = m.exp(state.v, beta * m.log(state.v, state.x));
    }
    fy = f.value(y);
  }

  const Tangent g = f.grad(y);
  const double gnorm = m.norm(y, g);
  Point x_next = rgd_step(m, y, g, cfg.lipschitz);
  const double a = a_next(state.big_a, cfg.curvature.zeta, cfg.lipschitz);
  const double big_a = state.big_a + a;
  const Tangent g_at_v = m.transport(y, state.v, g);
  Point v_next = m.exp(state.v, (-a) * g_at_v);

  StepResult out;
  out.record.k = state.k;
  out.record.f_x = fx;
  out.record.f_y = fy;
  out.record.grad_norm_y = gnorm;
  out.record.beta = beta;
  out.record.a_next = a;
  out.record.big_a = big_a;
  out.record.cond2_margin = same_point(y, state.v) ? 0.0 : m.inner(y, g, m.log(y, state.v));
  out.record.dist_x0 = m.dist(origin, state.x);
  if (cfg.record_points) out.points = {state.x, state.v, y, g};
  out.next = {std::move(x_next), std::move(v_next), big_a, state.k + 1,
              std::numeric_limits<double>::quiet_NaN()};
  return out;
}

Trace run_ragdsdr(const Objective& f, const Point& x0, const OptConfig& cfg) {
  cfg.validate();
  f.manifold().check_point(x0);
  Stopwatch clock(cfg.timing);
  Trace trace;
  OptState state{x0, x0, 0.0, 0, f.value(x0)};
  for (long k = 0; k < cfg.max_iters; ++k) {
    StepResult step;
    try {
      step = ragdsdr_step(state, f, cfg, x0);
      step.next.f_x = f.value(step.next.x);
    } catch (const DomainError& e) {
      abort_at(e, k);
    }
    step.record.wall_ns = clock.elapsed_ns();
    trace.rows.push_back(step.record);
    if (cfg.record_points) trace.points.push_back(std::move(step.points));
    state = std::move(step.next);
    if (step.record.grad_norm_y <= cfg.grad_tol) break;
  }
  trace.final_x = state.x;
  trace.final_v = state.v;
  trace.final_f = state.f_x;
  return trace;
}

Trace run_rgd(const Objective& f, const Point& x0, const OptConfig& cfg) {
  cfg.validate();
  const Manifold& m = f.manifold();
  m.check_point(x0);
  Stopwatch clock(cfg.timing);
  Trace trace;
  Point x = x0;
  double fx = f.value(x);
  for (long k = 0; k < cfg.max_iters; ++k) {
    IterRecord r;
    Tangent g;
    try {
      g = f.grad(x);
      r.k = k;
      r.f_x = fx;
      r.f_y = fx;
      r.grad_norm_y = m.norm(x, g);
      r.beta = 1.0;
      r.dist_x0 = m.dist(x0, x);
      if (cfg.record_points) trace.points.push_back({x, x, x, g});
      x = rgd_step(m, x, g, cfg.lipschitz);
      fx = f.value(x);
    } catch (const DomainError& e) {
      abort_at(e, k);
    }
    r.wall_ns = clock.elapsed_ns();
    trace.rows.push_back(r);
    if (r.grad_norm_y <= cfg.grad_tol) break;
  }
  trace.final_x = x;
  trace.final_v = x;
  trace.final_f = fx;
  return trace;
}

// -- restarted --------------------------------------------------------------

void RestartConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ConfigError("restart alpha must lie in (0, 1]");
  if (!(c > 1.0)) throw ConfigError("restart c must be > 1");
  if (!std::isfinite(f_star)) throw ConfigError("restart f_star must be finite");
  if (!(target >= 0.0)) throw ConfigError("restart target must be >= 0");
  if (inner_budget < 0) throw ConfigError("restart inner_budget must be >= 0");
}

double restart_step_bound(const OptConfig& cfg, double alpha, double c, double eps_segment,
                          double eps_tilde) {
  const double big_a = (c - 1.0) * alpha / c * eps_segment - eps_tilde;
  if (!(big_a > 0.0)) return std::numeric_limits<double>::infinity();
  const double zld2 = cfg.curvature.zeta * cfg.lipschitz * cfg.diameter * cfg.diameter;
  const double q = cfg.curvature.discrepancy * zld2 / (2.0 * big_a);
  return std::ceil(q + std::sqrt(q * q + 4.0 * zld2 / big_a));
}

Trace run_restarted(const Objective& f, const Point& x0, const OptConfig& cfg,
                    const RestartConfig& rcfg) {
  cfg.validate();
  rcfg.validate();
  f.manifold().check_point(x0);
  const double below_tol = 1e-12 * (1.0 + std::abs(rcfg.f_star));
  const double factor = 1.0 - rcfg.alpha / rcfg.c;

  Stopwatch clock(cfg.timing);
  Trace trace;
  OptState state{x0, x0, 0.0, 0, f.value(x0)};
  double seg_gap = state.f_x - rcfg.f_star;
  auto segment_budget = [&](double gap) {
    if (rcfg.inner_budget > 0) return static_cast<double>(rcfg.inner_budget);
    return 10.0 * restart_step_bound(cfg, rcfg.alpha, rcfg.c, gap, cfg.search.eps_tilde);
  };
  double budget = segment_budget(seg_gap);

  for (long k = 0; k < cfg.max_iters; ++k) {
    StepResult step;
    try {
      step = ragdsdr_step(state, f, cfg, x0);
      step.next.f_x = f.value(step.next.x);
    } catch (const DomainError& e) {
      abort_at(e, k);
    }
    step.record.k = k;
    step.record.wall_ns = clock.elapsed_ns();
    trace.rows.push_back(step.record);
    if (cfg.record_points) trace.points.push_back(std::move(step.points));
    state = std::move(step.next);

    const double gap = state.f_x - rcfg.f_star;
    if (gap < -below_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "f_star invalid: f(x) = " << state.f_x << " < f_star = " << rcfg.f_star
         << " at iteration " << k + 1;
      throw ConfigError(os.str());
    }
    if (step.record.grad_norm_y <= cfg.grad_tol) break;
    if (rcfg.target > 0.0 && gap <= rcfg.target) break;
    if (gap <= factor * seg_gap) {
      trace.restarts.push_back(k + 1);
      seg_gap = gap;
      budget = segment_budget(seg_gap);
      state = {state.x, state.x, 0.0, 0, state.f_x};
    } else if (static_cast<double>(state.k) > budget) {
      std::ostringstream os;
      os << "restart test did not fire within " << state.k
         << " inner steps (budget " << budget << ")";
      throw NumericalAbort(os.str(), k);
    }
  }
  trace.final_x = state.x;
  trace.final_v = state.v;
  trace.final_f = state.f_x;
  return trace;
}

// -- RAGD -------------------------------------------------------------------

void RagdParams::validate() const {
  if (!(mu > 0.0)) {
    throw ConfigError("RAGD baseline unavailable: it requires a strong-convexity modulus mu > 0");
  }
  if (!(lipschitz > 0.0)) throw ConfigError("RAGD needs L > 0");
  if (mu > lipschitz) throw ConfigError("RAGD needs mu <= L");
}

RagdCoefficients ragd_coefficients(const RagdParams& p) {
  p.validate();
  RagdCoefficients c{};
  c.h = 1.0 / p.lipschitz;
  const double beta = p.shrink >= 0.0 ? p.shrink : std::sqrt(p.mu / p.lipschitz) / 5.0;
  c.alpha = (std::sqrt(beta * beta + 4.0 * (1.0 + beta) * p.mu * c.h) - beta) / 2.0;
  c.gamma = c.alpha * p.mu / (c.alpha + beta);
  c.gamma_bar = (1.0 + beta) * c.gamma;
  c.couple = c.alpha * c.gamma / (c.gamma + c.alpha * p.mu);
  return c;
}

RagdStepResult ragd_baseline_step(const RagdState& state, const Objective& f,
                                  const RagdParams& p) {
  const RagdCoefficients c = ragd_coefficients(p);
  const Manifold& m = f.manifold();
  Point y = same_point(state.x, state.v) ? state.x
                                         : m.exp(state.x, c.couple * m.log(state.x, state.v));
  const double fy = f.value(y);
  const Tangent g = f.grad(y);
  Point x_next = m.exp(y, (-c.h) * g);
  const Tangent to_v = same_point(y, state.v) ? zero_tangent(y) : m.log(y, state.v);
  Point v_next = m.exp(y, ((1.0 - c.alpha) * c.gamma / c.gamma_bar) * to_v -
                              (c.alpha / c.gamma_bar) * g);
  RagdStepResult out;
  out.record.k = state.k;
  out.record.f_y = fy;
  out.record.grad_norm_y = m.norm(y, g);
  out.record.beta = c.couple;
  out.next = {std::move(x_next), std::move(v_next), state.k + 1};
  return out;
}

Trace run_ragd(const Objective& f, const Point& x0, const RagdParams& p, long max_iters,
               double grad_tol, bool timing) {
  p.validate();
  if (max_iters < 1) throw ConfigError("max_iters must be >= 1");
  const Manifold& m = f.manifold();
  m.check_point(x0);
  Stopwatch clock(timing);
  Trace trace;
  RagdState state{x0, x0, 0};
  double fx = f.value(x0);
  for (long k = 0; k < max_iters; ++k) {
    RagdStepResult step;
    try {
      step = ragd_baseline_step(state, f, p);
      step.record.f_x = fx;
      step.record.dist_x0 = m.dist(x0, state.x);
      fx = f.value(step.next.x);
    } catch (const DomainError& e) {
      abort_at(e, k);
    }
    step.record.wall_ns = clock.elapsed_ns();
    trace.rows.push_back(step.record);
    state = std::move(step.next);
    if (step.record.grad_norm_y <= grad_tol) break;
  }
  trace.final_x = state.x;
  trace.final_v = state.v;
  trace.final_f = fx;
  return trace;
}

}  // namespace rmom
