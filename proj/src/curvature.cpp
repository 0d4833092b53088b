#include "rmom/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "rmom/errors.hpp"

namespace rmom {

namespace {
constexpr double kSeriesCutoff = 1e-4;
}

void CurvatureBounds::validate() const {
  if (!(k_min <= k_max)) throw DomainError("curvature bounds need k_min <= k_max");
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw DomainError("diameter bound D must be positive and finite");
  }
  if (k_max > 0.0 && std::sqrt(k_max) * diameter >= std::numbers::pi) {
    std::ostringstream os;
    os << "sqrt(k_max) * D = " << std::sqrt(k_max) * diameter
       << " >= pi; delta is undefined (pole of cot)";
    throw DomainError(os.str());
  }
}

CurvatureBounds bounds_for(const Manifold& m, double diameter) {
  const CurvatureRange r = m.curvature();
  return {r.k_min, r.k_max, diameter};
}

double x_coth_x(double x) {
  if (std::abs(x) < kSeriesCutoff) {
    const double x2 = x * x;
    return 1.0 + x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x / std::tanh(x);
}

double x_cot_x(double x) {
  if (std::abs(x) < kSeriesCutoff) {
    const double x2 = x * x;
    return 1.0 - x2 / 3.0 - x2 * x2 / 45.0;
  }
  return x * std::cos(x) / std::sin(x);
}

double zeta(const CurvatureBounds& b) {
  if (b.k_min >= 0.0) return 1.0;
  return x_coth_x(std::sqrt(-b.k_min) * b.diameter);
}

double delta(const CurvatureBounds& b) {
  if (b.k_max <= 0.0) return 1.0;
  const double arg = std::sqrt(b.k_max) * b.diameter;
  if (arg >= std::numbers::pi) {
    std::ostringstream os;
    os << "delta: sqrt(k_max) * D = " << arg << " >= pi";
    throw DomainError(os.str());
  }
  return x_cot_x(arg);
}

double discrepancy(const CurvatureBounds& b) {
  return 4.0 * std::max(zeta(b) - 1.0, 1.0 - delta(b));
}

double accel_horizon(const CurvatureBounds& b) {
  const double d = discrepancy(b);
  if (d <= 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 / d;
}

bool rgd_dominance_check(const CurvatureBounds& b) {
  const double k_abs = std::max(std::abs(b.k_min), std::abs(b.k_max));
  if (k_abs * b.diameter * b.diameter <= 0.16) return true;
  return std::max(zeta(b) - 1.0, 1.0 - delta(b)) < 1.0 / 16.0;
}

CurvatureConstants curvature_constants(const CurvatureBounds& b) {
  b.validate();
  CurvatureConstants c;
  c.zeta = zeta(b);
  c.delta = delta(b);
  c.discrepancy = 4.0 * std::max(c.zeta - 1.0, 1.0 - c.delta);
  c.horizon = c.discrepancy > 0.0 ? 2.0 / c.discrepancy
                                  : std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace rmom
