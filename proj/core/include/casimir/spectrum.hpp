#pragma once

#include "casimir/types.hpp"

namespace casimir {

// Frequency spectrum of the Casimir pressure for reflection coefficients that
// are constant in omega and p, resolved at xi = 2 omega a / c. All densities
// are dimensionless: value * hbar/a^3 is the physical dP/domega.

// Propagating-wave part. With u = r_sigma^2 e^{i xi}:
//   -(1/16 pi^2) [ -xi^2 Im Li1(u) - 2 xi Re Li2(u) + 2 Im Li3(u)
//                  - 2 Im Li3(r_sigma^2) ]
// Raises DivergenceError when u lands exactly on 1 (|r| = 1 at xi = 0), the
// discontinuous perfect-mirror corner.
double propagating_density(const ConstantReflection& r, double xi, Polarization sigma);

// Evanescent-wave part, -(1/8 pi^2) Im Li3(r_sigma^2). Independent of xi and
// zero for real r_sigma; it exactly cancels the xi-independent term of the
// propagating part, so the summed spectrum oscillates about zero instead of
// sitting on a constant offset.
double evanescent_density(const ConstantReflection& r, Polarization sigma);

// Both sectors for both polarizations at one xi.
SpectralSample total_density(const ConstantReflection& r, double xi);

// -hbar c pi^2 / (240 a^4), the perfect-mirror pressure.
double ideal_casimir_pressure(const PhysicalSetup& setup);

// -(3 hbar c / 16 pi^2 a^4) sum_sigma Re Li4(r_sigma^2), in Pa.
double constant_r_pressure(const ConstantReflection& r, const PhysicalSetup& setup);

// -(hbar c / 16 pi^2 a^3) sum_sigma Re Li4(r_sigma^2), in J/m^2.
// Its -d/da recovers constant_r_pressure.
double constant_r_free_energy(const ConstantReflection& r, const PhysicalSetup& setup);

// Pressure obtained by integrating the spectrum over xi in [0, xi_max] with
// every reflection coefficient damped as r -> r e^{-delta xi}. Requires
// delta > 0 and xi_max >= 50/delta so the discarded tail is negligible.
// Panelled Gauss quadrature, bit-stable pairwise summation across panels;
// AccuracyError if the quadrature self-checks fail.
double regularized_spectrum_pressure(const ConstantReflection& r, const PhysicalSetup& setup,
                                     double delta, double xi_max);

// Richardson extrapolation of regularized_spectrum_pressure to delta -> 0
// over delta in {1e-2, 5e-3, 2.5e-3}, eliminating the O(delta) and O(delta^2)
// regularization bias.
double extrapolated_spectrum_pressure(const ConstantReflection& r, const PhysicalSetup& setup);

}  // namespace casimir
