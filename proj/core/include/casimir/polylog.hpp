#pragma once

#include <complex>

#include "casimir/types.hpp"

namespace casimir {

// Polylogarithm order restricted to the range the closed forms need.
class PolylogOrder {
 public:
  explicit PolylogOrder(int m) : m_(m) {
    if (m < 1 || m > 4) throw DomainError("polylog order must be 1..4");
  }
  int value() const { return m_; }

 private:
  int m_;
};

// Argument confined to the closed unit disc. A slack of 1e-12 in |z| absorbs
// rounding from upstream products like r^2 e^{i xi}; points in the slack shell
// are rescaled onto the circle.
class UnitDiscArgument {
 public:
  explicit UnitDiscArgument(complex z) : z_(z) {
    double az = std::abs(z_);
    if (az > 1.0 + 1e-12) throw DomainError("polylog argument outside the unit disc");
    if (az > 1.0) z_ /= az;
  }
  complex value() const { return z_; }

 private:
  complex z_;
};

// Li_m(z) = sum_{n>=1} z^n / n^m on the closed unit disc, principal branch.
// m = 1 is the closed form -log(1-z) and diverges at z = 1 (DivergenceError).
complex eval_polylog(PolylogOrder m, UnitDiscArgument z, double rel_tol = 1e-12);
inline complex eval_polylog(int m, complex z, double rel_tol = 1e-12) {
  return eval_polylog(PolylogOrder(m), UnitDiscArgument(z), rel_tol);
}

// Inverse of Li_4 restricted to [0, 1]: the unique x with Li_4(x) = y, for
// y in [0, zeta(4)]. Newton iteration safeguarded by bisection; relative
// error <= 1e-10.
double inverse_polylog4(double y);

}  // namespace casimir
