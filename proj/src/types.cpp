#include "lis/types.hpp"

#include <cmath>

#include "lis/error.hpp"

namespace lis {

SurfaceSpec::SurfaceSpec(double half_length, double half_width) : a_(half_length), b_(half_width) {
  if (!(a_ > 0.0) || !(b_ > 0.0)) {
    throw DomainError("surface half-extents must be strictly positive");
  }
}

SurfaceSpec::Regime SurfaceSpec::regime() const {
  const bool ia = std::isinf(a_);
  const bool ib = std::isinf(b_);
  if (ia && ib) return Regime::Plane;
  if (ia || ib) return Regime::Strip;
  return Regime::Rectangle;
}

void Deployment::validate() const {
  if (terminals.empty()) throw DomainError("deployment needs at least one terminal");
  if (powers.size() != terminals.size()) {
    throw DomainError("powers and terminals differ in length");
  }
  if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
    throw DomainError("wavelength must be positive");
  }
  for (const auto& t : terminals) {
    if (!(t.z > 0.0)) throw DomainError("terminal z must be positive");
    if (!std::isfinite(t.x) || !std::isfinite(t.y) || !std::isfinite(t.z)) {
      throw DomainError("terminal coordinates must be finite");
    }
  }
  for (double p : powers) {
    if (!(p > 0.0) || !std::isfinite(p)) throw DomainError("terminal powers must be positive");
  }
}

}  // namespace lis
