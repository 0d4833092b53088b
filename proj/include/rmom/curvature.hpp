#pragma once

// Curvature-dependent constants of the momentum method.
//
//   zeta  = sqrt(-Kmin) D coth(sqrt(-Kmin) D)   (1 when Kmin >= 0)
//   delta = sqrt(Kmax) D cot(sqrt(Kmax) D)      (1 when Kmax <= 0)
//   discrepancy d(M) = 4 max(zeta - 1, 1 - delta)
//   acceleration horizon = 2 / d(M)

#include "rmom/manifold.hpp"

namespace rmom {

struct CurvatureBounds {
  double k_min = 0.0;
  double k_max = 0.0;
  double diameter = 1.0;  // a-priori bound D on the working domain

  /// Throws DomainError if k_min > k_max, D <= 0, or sqrt(k_max) D >= pi.
  void validate() const;
};

CurvatureBounds bounds_for(const Manifold& m, double diameter);

struct CurvatureConstants {
  double zeta = 1.0;
  double delta = 1.0;
  double discrepancy = 0.0;
  double horizon = 0.0;  // +inf when discrepancy == 0
};

/// x coth(x), with a series branch near zero.
double x_coth_x(double x);
/// x cot(x), with a series branch near zero.
double x_cot_x(double x);

double zeta(const CurvatureBounds& b);
double delta(const CurvatureBounds& b);
double discrepancy(const CurvatureBounds& b);
double accel_horizon(const CurvatureBounds& b);

/// True when the bound improves on Riemannian gradient descent's worst
/// case: max(zeta - 1, 1 - delta) < 1/16, which holds in particular
/// whenever |K| D^2 <= 0.16.
bool rgd_dominance_check(const CurvatureBounds& b);

CurvatureConstants curvature_constants(const CurvatureBounds& b);

}  // namespace rmom
