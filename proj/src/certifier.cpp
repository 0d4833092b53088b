#include "rmom/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rmom/errors.hpp"

namespace rmom {

namespace {

double gap_of(double m) { return std::max(m, 0.0); }

const Point& v_at(const Trace& t, std::size_t k) {
  return k < t.points.size() ? t.points[k].v : t.final_v;
}

void require_points(const Trace& t, const char* who) {
  if (t.points.size() != t.rows.size()) {
    throw ContractViolation(std::string(who) + " needs a full-point trace (record_points)");
  }
}

nlohmann::json series_json(const CheckSeries& s) {
  nlohmann::json j;
  j["min_margin"] = s.entries.empty() ? 0.0 : s.min_margin;
  j["worst_index"] = s.worst;
  j["evaluated"] = s.entries.size();
  j["skipped"] = s.skipped.size();
  j["pass"] = s.pass;
  if (s.worst >= 0) {
    j["worst_lhs"] = s.entries[s.worst].lhs;
    j["worst_rhs"] = s.entries[s.worst].rhs;
  }
  return j;
}

}  // namespace

std::string to_string(WitnessProvenance p) {
  switch (p) {
    case WitnessProvenance::kEigendecomposition:
      return "eigendecomposition";
    case WitnessProvenance::kPresolve:
      return "presolve";
    case WitnessProvenance::kAnalytic:
      return "analytic";
  }
  return "unknown";
}

OptimumWitness OptimumWitness::make(const Objective& f, Point x, WitnessProvenance p, double tol) {
  OptimumWitness w;
  w.f_star = f.value(x);
  w.grad_norm = f.manifold().norm(x, f.grad(x));
  if (!(w.grad_norm <= tol)) {
    std::ostringstream os;
    os << "optimum witness is not stationary: ||grad|| = " << w.grad_norm << " > " << tol;
    throw DomainError(os.str());
  }
  w.x_star = std::move(x);
  w.provenance = p;
  return w;
}

OptimumWitness presolve_witness(const Objective& f, const Point& x0, double lipschitz,
                                long max_iters, double tol, long patience) {
  const Manifold& m = f.manifold();
  Point x = x0;
  Point best = x0;
  double best_norm = std::numeric_limits<double>::infinity();
  long since_best = 0;
  for (long k = 0; k < max_iters; ++k) {
    const Tangent g = f.grad(x);
    const double n = m.norm(x, g);
    if (n < best_norm) {
      best_norm = n;
      best = x;
      since_best = 0;
    } else if (++since_best >= patience) {
      break;
    }
    if (n <= tol) break;
    x = rgd_step(m, x, g, lipschitz);
  }
  return OptimumWitness::make(f, std::move(best), WitnessProvenance::kPresolve);
}

Margin make_margin(double lhs, double rhs, double rel_tol) {
  const double margin = rhs - lhs;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return {lhs, rhs, margin, margin >= -rel_tol * scale};
}

void CheckSeries::add(const Margin& m) {
  if (entries.empty() || m.margin < min_margin) {
    min_margin = m.margin;
    worst = static_cast<long>(entries.size());
  }
  entries.push_back(m);
  pass = pass && m.pass;
}

std::vector<double> psi_star_sequence(const Trace& trace, double zeta) {
  std::vector<double> psi(trace.rows.size() + 1, 0.0);
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const IterRecord& r = trace.rows[k];
    psi[k + 1] = psi[k] + r.a_next * r.f_y -
                 0.5 * zeta * r.a_next * r.a_next * r.grad_norm_y * r.grad_norm_y;
  }
  return psi;
}

CheckSeries check_c1(const Trace& trace, const std::vector<double>& psi_star) {
  CheckSeries out;
  const std::vector<double> f = trace.values();
  for (std::size_t k = 0; k < f.size() && k < psi_star.size(); ++k) {
    const double big_a = k == 0 ? 0.0 : trace.rows[k - 1].big_a;
    out.add(make_margin(big_a * f[k], psi_star[k]));
  }
  return out;
}

std::vector<std::optional<ErrorTerm>> error_terms(const Manifold& m, const Trace& trace,
                                                  const Point& x_star) {
  require_points(trace, "error_terms");
  std::vector<std::optional<ErrorTerm>> out;
  out.reserve(trace.points.size());
  for (const StepPoints& p : trace.points) {
    try {
      const Tangent to_star_y = m.log(p.y, x_star);
      const Tangent to_star_v = m.log(p.v, x_star);
      const Tangent carried = m.transport(p.v, p.y, to_star_v);
      const Tangent to_v = m.log(p.y, p.v);
      const double e = m.inner(p.y, p.grad_y, to_star_y - carried);
      out.push_back(ErrorTerm{e, m.inner(p.y, p.grad_y, to_star_y - carried - to_v)});
    } catch (const DomainError&) {
      out.push_back(std::nullopt);
    }
  }
  return out;
}

CheckSeries check_c2_at(const Manifold& m, const Trace& trace, const std::vector<double>& psi_star,
                        const OptimumWitness& w) {
  require_points(trace, "check_c2_at");
  CheckSeries out;
  for (std::size_t k = 0; k < trace.rows.size(); ++k) {
    const StepPoints& p = trace.points[k];
    const IterRecord& r = trace.rows[k];
    try {
      const Point& v_next = v_at(trace, k + 1);
      const double dk = m.dist(p.v, w.x_star);
      const double dk1 = m.dist(v_next, w.x_star);
      const Tangent to_star_y = m.log(p.y, w.x_star);
      const Tangent carried = m.transport(p.v, p.y, m.log(p.v, w.x_star));
      const double e_k = m.inner(p.y, p.grad_y, to_star_y - carried);
      const double psi_k = psi_star[k] + 0.5 * dk * dk;
      const double psi_k1 = psi_star[k + 1] + 0.5 * dk1 * dk1;
      const double rhs =
          psi_k + r.a_next * (r.f_y + m.inner(p.y, p.grad_y, to_star_y) - e_k);
      out.add(make_margin(psi_k1, rhs));
    } catch (const DomainError&) {
      out.skipped.push_back(static_cast<long>(k));
    }
  }
  return out;
}

CheckSeries check_lemma1(const Trace& trace, const std::vector<std::optional<ErrorTerm>>& errors,
                         const CurvatureConstants& c, double diameter, double eps_tilde) {
  CheckSeries out;
  const double spread = std::max(c.zeta - 1.0, 1.0 - c.delta);
  for (std::size_t k = 0; k < errors.size() && k < trace.rows.size(); ++k) {
    if (!errors[k]) {
      out.skipped.push_back(static_cast<long>(k));
      continue;
    }
    const double rhs = trace.rows[k].grad_norm_y * spread * diameter + eps_tilde;
    out.add(make_margin(-errors[k]->e_k, rhs));
  }
  return out;
}

CheckSeries check_theorem1(const Trace& trace, const OptimumWitness& w, const CurvatureConstants& c,
                           double lipschitz, double eps_tilde, double dist_x0_xstar,
                           double diameter) {
  CheckSeries out;
  const std::vector<double> f = trace.values();
  const double spread = std::max(c.zeta - 1.0, 1.0 - c.delta);
  const double zl = c.zeta * lipschitz;
  for (std::size_t k = 1; k < f.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double rhs = 2.0 * zl * dist_x0_xstar * dist_x0_xstar / (kk * kk) +
                       4.0 * spread * zl * diameter * diameter / kk + eps_tilde;
    out.add(make_margin(f[k] - w.f_star, rhs));
  }
  return out;
}

Margin trig_margin(const Manifold& m, const Point& v, const Point& w, const Point& x, double zeta) {
  const Tangent vw = m.log(v, w);
  const Tangent vx = m.log(v, x);
  const double wx = m.dist(w, x);
  const double vw2 = m.inner(v, vw, vw);
  const double lhs = 0.5 * wx * wx - 0.5 * zeta * vw2;
  const double rhs = 0.5 * m.inner(v, vx, vx) - m.inner(v, vw, vx);
  return make_margin(lhs, rhs);
}

CheckSeries check_trig_trajectory(const Manifold& m, const Trace& trace, const Point& x_star,
                                  double zeta) {
  require_points(trace, "check_trig_trajectory");
  CheckSeries out;
  for (std::size_t k = 0; k < trace.points.size(); ++k) {
    const StepPoints& p = trace.points[k];
    try {
      out.add(trig_margin(m, p.v, v_at(trace, k + 1), x_star, zeta));
      out.add(trig_margin(m, p.v, p.y, x_star, zeta));
    } catch (const DomainError&) {
      out.skipped.push_back(static_cast<long>(k));
    }
  }
  return out;
}

std::vector<Triple> sample_triples(const Manifold& m, int count, double diameter, Rng& rng) {
  std::vector<Triple> out;
  out.reserve(count);
  auto near = [&](const Point& c) {
    const double r = uniform(rng, 0.0, 0.5 * diameter);
    return m.exp(c, r * m.random_unit_tangent(c, rng));
  };
  for (int i = 0; i < count; ++i) {
    const Point c = m.random_point(rng);
    Point v = near(c);
    Point w = near(c);
    Point x = near(c);
    out.push_back({std::move(v), std::move(w), std::move(x)});
  }
  return out;
}

CheckSeries check_trig_bound(const Manifold& m, double zeta, const std::vector<Triple>& samples) {
  CheckSeries out;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      out.add(trig_margin(m, samples[i].v, samples[i].w, samples[i].x, zeta));
    } catch (const DomainError&) {
      out.skipped.push_back(static_cast<long>(i));
    }
  }
  return out;
}

HessianProbe hessian_probe_at(const Manifold& m, const Point& x_star, const Point& p, double h) {
  HessianProbe out;
  out.distance = m.dist(p, x_star);
  const CurvatureRange kr = m.curvature();
  const CurvatureBounds b{kr.k_min, kr.k_max, std::max(out.distance, 1e-300)};
  out.zeta_bound = zeta(b);
  out.delta_bound = delta(b);

  const std::vector<Tangent> basis = m.tangent_basis(p);
  const int n = static_cast<int>(basis.size());
  auto pulled_log = [&](const Tangent& dir, double t) {
    const Point q = m.exp(p, t * dir);
    return m.transport(q, p, m.log(q, x_star));
  };
  Matrix op(n, n);
  for (int j = 0; j < n; ++j) {
    const Tangent plus = pulled_log(basis[j], h);
    const Tangent minus = pulled_log(basis[j], -h);
    const Tangent col = (-0.5 / h) * (plus - minus);
    for (int i = 0; i < n; ++i) op(i, j) = m.inner(p, basis[i], col);
  }
  const double scale = std::max(1.0, op.norm());
  out.asymmetry = (op - op.transpose()).norm() / scale;
  if (out.asymmetry > 1e-4) {
    std::ostringstream os;
    os << "finite-difference operator not symmetric (relative asymmetry " << out.asymmetry << ")";
    out.discarded = true;
    out.diagnostic = os.str();
    return out;
  }
  const Vector ev = linalg::sym_eigenvalues(linalg::symmetrize(op));
  out.lambda_min = ev(0);
  out.lambda_max = ev(n - 1);
  out.pass = out.lambda_min >= out.delta_bound - 1e-3 && out.lambda_max <= out.zeta_bound + 1e-3;
  return out;
}

HessianSummary hessian_eig_probe(const Manifold& m, const Point& x_star,
                                 const std::vector<double>& distances, int per_distance, Rng& rng) {
  HessianSummary out;
  out.lambda_min_obs = std::numeric_limits<double>::infinity();
  out.lambda_max_obs = -std::numeric_limits<double>::infinity();
  double far = 0.0;
  for (double r : distances) {
    for (int i = 0; i < per_distance; ++i) {
      const Point p = m.exp(x_star, r * m.random_unit_tangent(x_star, rng));
      HessianProbe probe = hessian_probe_at(m, x_star, p);
      if (!probe.discarded) {
        out.lambda_min_obs = std::min(out.lambda_min_obs, probe.lambda_min);
        out.lambda_max_obs = std::max(out.lambda_max_obs, probe.lambda_max);
        if (probe.distance >= far) {
          far = probe.distance;
          out.delta_bound = probe.delta_bound;
          out.zeta_bound = probe.zeta_bound;
        }
        out.pass = out.pass && probe.pass;
      }
      out.probes.push_back(std::move(probe));
    }
  }
  return out;
}

std::vector<SegmentCheck> check_restart_segments(const Trace& trace, const OptConfig& cfg,
                                                 const RestartConfig& rcfg, double eps_tilde) {
  std::vector<SegmentCheck> out;
  const std::vector<double> f = trace.values();
  const double factor = 1.0 - rcfg.alpha / rcfg.c;
  std::vector<long> starts{0};
  starts.insert(starts.end(), trace.restarts.begin(), trace.restarts.end());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const bool closed = i + 1 < starts.size();
    const long end = closed ? starts[i + 1] : static_cast<long>(trace.rows.size());
    SegmentCheck s{};
    s.start_row = starts[i];
    s.steps = end - starts[i];
    s.start_gap = f[starts[i]] - rcfg.f_star;
    s.end_gap = f[end] - rcfg.f_star;
    s.bound = restart_step_bound(cfg, rcfg.alpha, rcfg.c, s.start_gap, eps_tilde);
    s.contracted = !closed || s.end_gap <= factor * s.start_gap;
    // An open final segment has not fired yet; it only has to stay under N_i.
    s.within_bound = static_cast<double>(s.steps) <= s.bound;
    out.push_back(s);
  }
  return out;
}

bool Certificate::verdict() const {
  return c1.pass && c2.pass && lemma1.pass && theorem1.pass && trig.pass &&
         (!hessian || hessian->pass);
}

std::string Certificate::to_json() const {
  nlohmann::json j;
  j["c1"] = series_json(c1);
  j["c2"] = series_json(c2);
  j["lemma1"] = series_json(lemma1);
  j["theorem1"] = series_json(theorem1);
  j["trig"] = series_json(trig);
  if (hessian) {
    j["hessian"] = {{"lambda_min_obs", hessian->lambda_min_obs},
                    {"lambda_max_obs", hessian->lambda_max_obs},
                    {"delta_bound", hessian->delta_bound},
                    {"zeta_bound", hessian->zeta_bound},
                    {"probes", hessian->probes.size()},
                    {"pass", hessian->pass}};
  }
  double eta_max = 0.0;
  for (double e : eta) eta_max = std::max(eta_max, std::abs(e));
  j["eta_max_abs"] = eta_max;
  j["zeta"] = curvature.zeta;
  j["delta"] = curvature.delta;
  j["diameter"] = diameter;
  j["eps_tilde"] = eps_tilde;
  j["verdict"] = verdict() ? "pass" : "fail";
  return j.dump(2);
}

double observed_diameter(const Manifold& m, const Trace& trace, const Point& x_star) {
  std::vector<Point> pts;
  auto push = [&](const Point& p) {
    for (const Point& q : pts) {
      if (same_point(p, q)) return;
    }
    pts.push_back(p);
  };
  push(x_star);
  for (const StepPoints& p : trace.points) {
    push(p.x);
    push(p.v);
    push(p.y);
  }
  push(trace.final_x);
  push(trace.final_v);

  double best = 0.0;
  const auto* spd = dynamic_cast<const Spd*>(&m);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (spd) {
      const Spd::Frame fi = spd->frame(pts[i]);
      for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, spd->dist(fi, pts[j]));
    } else {
      for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, m.dist(pts[i], pts[j]));
    }
  }
  return best;
}

Certificate certify(const Objective& f, const Trace& trace, const OptimumWitness& w,
                    const OptConfig& cfg, const Point& x0, const CertifyOptions& opts) {
  require_points(trace, "certify");
  const Manifold& m = f.manifold();
  Certificate cert;
  cert.diameter = opts.observed_diameter ? observed_diameter(m, trace, w.x_star) : cfg.diameter;
  cert.curvature = curvature_constants(bounds_for(m, cert.diameter));
  for (const IterRecord& r : trace.rows) cert.eps_tilde = std::max(cert.eps_tilde, gap_of(-r.cond2_margin));

  const double zeta_alg = cfg.curvature.zeta;
  cert.psi_star = psi_star_sequence(trace, zeta_alg);
  cert.c1 = check_c1(trace, cert.psi_star);
  cert.c2 = check_c2_at(m, trace, cert.psi_star, w);

  const auto errors = error_terms(m, trace, w.x_star);
  for (const auto& e : errors) cert.eta.push_back(e ? e->eta_k : 0.0);
  cert.lemma1 = check_lemma1(trace, errors, cert.curvature, cert.diameter, cert.eps_tilde);

  // The 1/k^2 term comes from A_k >= k^2 / (4 zeta L) with the zeta the run used.
  CurvatureConstants thm = cert.curvature;
  thm.zeta = std::max(zeta_alg, cert.curvature.zeta);
  cert.theorem1 = check_theorem1(trace, w, thm, cfg.lipschitz, cert.eps_tilde,
                                 m.dist(x0, w.x_star), cert.diameter);

  const double zeta_trig = std::max(zeta_alg, cert.curvature.zeta);
  cert.trig = check_trig_trajectory(m, trace, w.x_star, zeta_trig);
  if (opts.trig_samples > 0) {
    Rng rng = init_stream(opts.seed ^ 0x7216ULL);
    const CheckSeries sampled =
        check_trig_bound(m, cert.curvature.zeta, sample_triples(m, opts.trig_samples, cert.diameter, rng));
    for (const Margin& mg : sampled.entries) cert.trig.add(mg);
    for (long s : sampled.skipped) cert.trig.skipped.push_back(s);
  }
  if (!opts.hessian_distances.empty()) {
    Rng rng = init_stream(opts.seed ^ 0x4E55ULL);
    cert.hessian = hessian_eig_probe(m, w.x_star, opts.hessian_distances, opts.hessian_per_distance, rng);
  }
  return cert;
}

}  // namespace rmom
