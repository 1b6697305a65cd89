#pragma once

#include "casimir/types.hpp"

namespace casimir {

enum class ContourBranch { propagating, evanescent, imag_axis };

// A point on the frequency-plane integration contour, tagged with the branch
// it lives on so callers can never hand a bare complex p to the wrong leg.
// p is the angular variable of the plane-wave decomposition: real in (0, 1]
// on the propagating branch, p = iq with q > 0 on the evanescent branch, and
// real >= 1 on the imaginary frequency axis.
class ContourPoint {
 public:
  static ContourPoint propagating(double p);
  static ContourPoint evanescent(double q);
  static ContourPoint imag_axis(double p);

  ContourBranch branch() const { return branch_; }
  complex p() const { return p_; }

 private:
  ContourPoint(ContourBranch branch, complex p) : branch_(branch), p_(p) {}
  ContourBranch branch_;
  complex p_;
};

// Single-interface reflection amplitude:
//   r_TE = (p - w)/(p + w),   r_TM = (eps p - w)/(eps p + w),
// with w = sqrt(p^2 + eps - 1) on the branch Im w >= 0, ties (Im w = 0)
// resolved to Re w >= 0. That branch keeps transmitted waves decaying for
// lossy media on every contour leg and reduces to the positive real root on
// the imaginary axis.
complex fresnel(complex eps, ContourPoint point, Polarization sigma);

}  // namespace casimir
