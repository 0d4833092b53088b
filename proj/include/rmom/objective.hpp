#pragma once

#include <string>

#include "rmom/manifold.hpp"

namespace rmom {

/// A smooth function on a manifold with its Riemannian gradient.
/// Implementations must be reentrant: value/grad may be called concurrently.
class Objective {
 public:
  virtual ~Objective() = default;

  virtual const Manifold& manifold() const = 0;
  virtual std::string name() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Tangent grad(const Point& x) const = 0;
};

}  // namespace rmom
