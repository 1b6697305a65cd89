#include "casimir/reflection.hpp"

#include <cmath>

#include "casimir/errors.hpp"

namespace casimir {

ContourPoint ContourPoint::propagating(double p) {
  if (!(p > 0.0 && p <= 1.0))
    throw DomainError("contour point: propagating p must lie in (0, 1]");
  return ContourPoint(ContourBranch::propagating, complex(p, 0.0));
}

ContourPoint ContourPoint::evanescent(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw DomainError("contour point: evanescent q must be positive and finite");
  return ContourPoint(ContourBranch::evanescent, complex(0.0, q));
}

ContourPoint ContourPoint::imag_axis(double p) {
  if (!(p >= 1.0) || !std::isfinite(p))
    throw DomainError("contour point: imaginary-axis p must be >= 1 and finite");
  return ContourPoint(ContourBranch::imag_axis, complex(p, 0.0));
}

complex fresnel(complex eps, ContourPoint point, Polarization sigma) {
  if (!std::isfinite(eps.real()) || !std::isfinite(eps.imag()))
    throw DomainError("fresnel: permittivity must be finite");

  const complex p = point.p();
  // p^2 + (eps - 1), associated so small p^2 is not absorbed by the 1
  complex w = std::sqrt(p * p + (eps - 1.0));
  if (w.imag() < 0.0 || (w.imag() == 0.0 && w.real() < 0.0)) w = -w;

  const complex num = (sigma == Polarization::te) ? p - w : eps * p - w;
  const complex den = (sigma == Polarization::te) ? p + w : eps * p + w;
  if (std::abs(den) < 1e-300) throw SingularInterfaceError("fresnel: vanishing denominator");
  return num / den;
}

}  // namespace casimir
