#pragma once

#include <variant>

#include "casimir/dielectric.hpp"
#include "casimir/types.hpp"

namespace casimir {

// Quadrature knobs shared by the two frequency-integration engines. Zeroed
// length/frequency fields are invalid; start from defaults(setup) and adjust.
//
// Real-frequency route: the spectral density is integrated over omega in
// Gauss panels of omega_panel_width (at most (pi/8) c/a, i.e. a quarter
// period of the round-trip phase), truncated at omega_max under a soft
// cutoff exp(-delta xi) with xi = 2 omega a / c. Three runs at
// {delta, delta/2, delta/4} share one set of density evaluations and are
// Richardson-combined to remove the O(delta) and O(delta^2) bias.
//
// Imaginary-frequency route: zeta = zeta0 u/(1-u) and p = 1/(1-v) map the
// quarter-plane onto the unit square, which is covered by a tensor Gauss
// grid on dyadically graded panels; the grid is refined until two levels
// agree to rel_tol.
struct QuadratureSpec {
  int p_nodes = 16;                // Gauss order per panel / tensor cell
  double omega_panel_width = 0.0;  // rad/s
  double omega_max = 0.0;          // rad/s, real-frequency truncation
  double zeta0 = 0.0;              // rad/s, imaginary-axis map scale
  double rel_tol = 1e-6;
  double cutoff_delta = 1e-2;      // base soft-cutoff exponent in xi

  static QuadratureSpec defaults(const PhysicalSetup& setup);
  void validate(const PhysicalSetup& setup) const;  // DomainError on bad values
};

// One mirror as the engines see it: either a dielectric model whose Fresnel
// coefficients are evaluated per contour point, or a fixed-reflectivity
// surrogate that bypasses Fresnel. The surrogate has the same (constant)
// coefficients on every contour branch, so its spectrum and pressure are
// known in closed form; it exists to pin the engines to those answers.
using Plate = std::variant<DielectricModel, ConstantReflection>;

// Two mirrors facing each other. Every formula uses only the per-polarization
// product r1 r2, so swapping the plates changes nothing, bit for bit.
struct PlatePair {
  Plate first;
  Plate second;

  PlatePair(const DielectricModel& both) : first(both), second(both) {}
  PlatePair(const ConstantReflection& both) : first(both), second(both) {}
  PlatePair(Plate one, Plate two) : first(std::move(one)), second(std::move(two)) {}
};

// Frequency spectrum of the pressure at real omega > 0, in the same
// dimensionless normalization as the constant-r spectrum (multiply by
// hbar/a^3 for dP/domega). The propagating part integrates the plane-wave
// angle p in (0, 1); the evanescent part continues to p = iq. Cavity-mode
// and surface-mode peaks get dedicated graded subpanels; a peak that falls
// within 1e-12 of an exact pole raises ResonanceError, and a failed
// refinement self-check raises AccuracyError.
SpectralSample material_spectral_density(const PlatePair& plates, const PhysicalSetup& setup,
                                         double omega, const QuadratureSpec& quad);

// Pressure from the real-frequency spectrum (Pa, negative = attractive).
// Reports the propagating/evanescent and TE/TM splits; value is exactly
// propagating + evanescent. The error estimate combines the Richardson
// spread, the truncation tail, and sampled p-grid refinement error. For
// strongly reflecting, weakly lossy mirrors this route is intrinsically
// rough; the estimate says how rough.
PressureResult pressure_real_frequency(const PlatePair& plates, const PhysicalSetup& setup,
                                       const QuadratureSpec& quad);

// Pressure from the rotated (imaginary-frequency) representation: a smooth,
// positive-decaying integrand in zeta and p >= 1. Models must be defined on
// the imaginary axis (smooth-windowed ones are not: UnsupportedModelError).
// Fails with AccuracyError if grid refinement cannot reach quad.rel_tol.
// The whole value is reported as "propagating"; there is no sector split on
// this contour.
PressureResult pressure_imag_frequency(const PlatePair& plates, const PhysicalSetup& setup,
                                       const QuadratureSpec& quad);

struct EffectiveReflection {
  double te = 0.0;
  double tm = 0.0;
};

// Inverts the constant-r pressure formula per polarization: given the
// per-polarization pressures p_te, p_tm (Pa, each in [-(3 hbar c zeta(4))/
// (16 pi^2 a^4), 0]), returns the frequency-independent reflectivities that
// would reproduce them. Out-of-range input raises RangeError.
EffectiveReflection effective_reflection(double p_te, double p_tm, const PhysicalSetup& setup);

// Pressure change caused by applying a transparency window to both plates:
// P(windowed) - P(base), computed with the chosen frequency-integration
// method and identical grids for both terms so discretization bias cancels
// in the difference. method must be real_frequency or imag_frequency; the
// imaginary-frequency route additionally requires a sharp window on a Drude
// base (the only case with a causal continuation).
double window_force_difference(const DielectricModel& model, const WindowSpec& window,
                               const PhysicalSetup& setup, Method method,
                               const QuadratureSpec& quad);

}  // namespace casimir
