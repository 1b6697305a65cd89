#include "casimir/polylog.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "casimir/constants.hpp"

namespace casimir {

namespace {

constexpr int kMaxExpansionTerms = 120;

// zeta(s) for even integer s >= 2: partial sum to K plus the Euler-Maclaurin
// tail K^{1-s}/(s-1) + K^{-s}/2 + s K^{-s-1}/12 - s(s+1)(s+2) K^{-s-3}/720,
// which is below 1e-15 relative for K = 64.
double zeta_even(int two_n) {
  const double s = two_n;
  const double K = 64.0;
  double sum = 0.0;
  for (int k = 63; k >= 1; --k) sum += std::pow(double(k), -s);
  double tail = std::pow(K, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(K, -s) +
                s / 12.0 * std::pow(K, -s - 1.0) -
                s * (s + 1.0) * (s + 2.0) / 720.0 * std::pow(K, -s - 3.0);
  return sum + tail;
}

// zeta(j) for integer j <= 4 as needed by the expansion about z = 1.
// Negative arguments come from the functional equation
//   zeta(1-2n) = 2 (-1)^n (2n-1)! zeta(2n) / (2 pi)^{2n},
// evaluated in log space so nothing overflows. zeta(1) is never requested
// (that index is the special logarithmic term).
const std::array<double, 132>& zeta_table() {
  static const std::array<double, 132> table = [] {
    std::array<double, 132> t{};  // t[i] = zeta(4 - i), i = 0..131
    auto set = [&t](int j, double v) { t[4 - j] = v; };
    set(4, constants::zeta4);
    set(3, constants::zeta3);
    set(2, constants::zeta2);
    set(1, 0.0);  // placeholder, unused
    set(0, -0.5);
    for (int n = 1; 1 - 2 * n >= 4 - int(t.size()) + 1; ++n) {
      int j = 1 - 2 * n;
      if (4 - j >= int(t.size())) break;
      double mag = 2.0 * zeta_even(2 * n) *
                   std::exp(std::lgamma(2.0 * n) - 2.0 * n * std::log(2.0 * std::numbers::pi));
      set(j, (n % 2 == 0) ? mag : -mag);
      if (j - 2 >= 4 - int(t.size()) + 1) set(j - 1, 0.0);
    }
    return t;
  }();
  return table;
}

double zeta_int(int j) { return zeta_table()[4 - j]; }

// Direct series; the tail after N terms is bounded by |z|^{N+1}/(1-|z|).
complex li_series(int m, complex z, double tol) {
  complex sum = 0.0;
  complex zp = 1.0;
  double az = std::abs(z);
  for (int n = 1; n <= 300; ++n) {
    zp *= z;
    complex term = zp / std::pow(double(n), double(m));
    sum += term;
    double tail = std::abs(term) * az / (1.0 - az);
    if (tail <= 0.5 * tol * std::abs(sum) + 1e-300) break;
  }
  return sum;
}

// Expansion about z = 1 (valid for |log z| < 2 pi, in practice |z| > 0.5):
//   Li_m(z) = sum_{k>=0, k != m-1} zeta(m-k) mu^k / k!
//           + (H_{m-1} - log(-mu)) mu^{m-1} / (m-1)!,      mu = log z.
// Terms decay like (|mu|/2pi)^k; with |z| > 1/2 on the closed disc,
// |mu| <= 3.22 so the ratio is at most ~0.52. Consecutive terms are checked
// in pairs because zeta at negative even integers vanishes.
complex li_near_one(int m, complex z, double tol) {
  static constexpr double harmonic[5] = {0.0, 1.0, 1.5, 11.0 / 6.0, 25.0 / 12.0};
  complex mu = std::log(z);
  complex sum = 0.0;
  complex mu_pow = 1.0;  // mu^k / k!
  double prev_mag = 1e300;
  for (int k = 0; k < kMaxExpansionTerms; ++k) {
    complex term;
    if (k == m - 1) {
      term = (harmonic[m - 1] - std::log(-mu)) * mu_pow;
    } else {
      term = zeta_int(m - k) * mu_pow;
    }
    sum += term;
    double mag = std::abs(term);
    if (k > m + 1 && mag + prev_mag <= 0.5 * tol * std::abs(sum)) break;
    prev_mag = mag;
    mu_pow *= mu / double(k + 1);
  }
  return sum;
}

complex li_impl(int m, complex z, double tol) {
  if (z == complex(1.0, 0.0)) {
    if (m == 1) throw DivergenceError("Li_1 diverges at z = 1");
    return zeta_int(m);
  }
  if (m == 1) return -std::log(1.0 - z);
  if (std::abs(z) <= 0.5) return li_series(m, z, tol);
  return li_near_one(m, z, tol);
}

}  // namespace

complex eval_polylog(PolylogOrder m, UnitDiscArgument z, double rel_tol) {
  if (!(rel_tol > 0.0)) throw DomainError("polylog tolerance must be positive");
  return li_impl(m.value(), z.value(), rel_tol);
}

double inverse_polylog4(double y) {
  constexpr double z4 = constants::zeta4;
  if (!(y >= 0.0)) throw RangeError("inverse_polylog4: y must be >= 0");
  if (y > z4 * (1.0 + 1e-12)) throw RangeError("inverse_polylog4: y exceeds zeta(4)");
  if (y == 0.0) return 0.0;
  if (y >= z4) return 1.0;

  auto li4 = [](double x) { return li_impl(4, complex(x, 0.0), 1e-14).real(); };
  auto li3 = [](double x) { return li_impl(3, complex(x, 0.0), 1e-14).real(); };

  double lo = 0.0, hi = 1.0;
  double x = std::min(y, 0.999);  // Li4(x) ~ x near 0, so y itself is a good start
  for (int it = 0; it < 80; ++it) {
    double f = li4(x) - y;
    if (f > 0.0) hi = x; else lo = x;
    double deriv = (x > 1e-8) ? li3(x) / x : 1.0 + x / 8.0;
    double step = f / deriv;
    double xn = x - step;
    if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);  // bisection safeguard
    if (std::abs(xn - x) <= 1e-12 * std::max(xn, 1e-30)) return xn;
    x = xn;
  }
  return x;
}

}  // namespace casimir
