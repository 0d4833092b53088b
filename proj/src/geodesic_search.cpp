#include "rmom/geodesic_search.hpp"

#include <cmath>
#include <sstream>

#include "rmom/errors.hpp"

namespace rmom {

namespace {

const double kInvPhi = (std::sqrt(5.0) - 1.0) / 2.0;

double checked(double value, double beta) {
  if (!std::isfinite(value)) {
    std::ostringstream os;
    os.precision(17);
    os << "geodesic search: objective is non-finite (" << value << ") at beta = " << beta;
    throw DomainError(os.str());
  }
  return value;
}

}  // namespace

void SearchConfig::validate() const {
  if (max_iters < 1) throw ConfigError("search max_iters must be >= 1");
  if (!(bracket_tol >= 0.0)) throw ConfigError("search bracket_tol must be >= 0");
  if (!(eps_tilde >= 0.0)) throw ConfigError("search eps_tilde must be >= 0");
}

GoldenResult golden_section(const std::function<double(double)>& phi, const SearchConfig& cfg) {
  cfg.validate();
  int evals = 0;
  double best_beta = 1.0;
  double best = checked(phi(1.0), 1.0);
  ++evals;
  auto consider = [&](double beta) {
    const double v = checked(phi(beta), beta);
    ++evals;
    if (v < best) {
      best = v;
      best_beta = beta;
    }
    return v;
  };
  consider(0.0);

  double a = 0.0;
  double b = 1.0;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = consider(c);
  double fd = consider(d);

  for (int it = 1;; ++it) {
    const bool keep_left = fc < fd;
    if (keep_left) {
      b = d;
      d = c;
      fd = fc;
    } else {
      a = c;
      c = d;
      fc = fd;
    }
    if (it >= cfg.max_iters || (b - a) < cfg.bracket_tol) break;
    if (keep_left) {
      c = b - kInvPhi * (b - a);
      fc = consider(c);
    } else {
      d = a + kInvPhi * (b - a);
      fd = consider(d);
    }
  }
  return {best_beta, best, evals};
}

SearchResult search_geodesic(const Objective& f, const Point& v, const Point& x,
                             const SearchConfig& cfg, std::optional<double> f_x,
                             std::optional<double> f_v) {
  int calls = 0;
  auto value_at = [&](const Point& p) {
    ++calls;
    return f.value(p);
  };
  if (same_point(v, x)) {
    const double fx = f_x ? *f_x : value_at(x);
    return {1.0, x, fx, calls};
  }
  const Manifold& m = f.manifold();
  const Geodesic gamma = m.geodesic(v, m.log(v, x));
  const double fx = f_x ? *f_x : value_at(x);
  const double fv = f_v ? *f_v : value_at(v);

  const GoldenResult g = golden_section(
      [&](double beta) {
        if (beta == 1.0) return fx;
        if (beta == 0.0) return fv;
        return value_at(gamma(beta));
      },
      cfg);

  if (g.beta == 1.0) return {1.0, x, fx, calls};
  if (g.beta == 0.0) return {0.0, v, fv, calls};
  return {g.beta, gamma(g.beta), g.value, calls};
}

SearchConditions verify_conditions(const Manifold& m, double f_y, const Tangent& grad_y,
                                   const Point& y, double f_x, const Point& v_k,
                                   double eps_tilde) {
  SearchConditions out{};
  out.cond1 = f_y <= f_x + 1e-12 * std::abs(f_x);
  out.cond2_margin = m.inner(y, grad_y, m.log(y, v_k));
  out.cond2 = out.cond2_margin >= -eps_tilde;
  return out;
}

SearchConditions verify_conditions(const Objective& f, const Point& y, const Point& x_k,
                                   const Point& v_k, double eps_tilde) {
  return verify_conditions(f.manifold(), f.value(y), f.grad(y), y, f.value(x_k), v_k,
                           eps_tilde);
}

}  // namespace rmom
