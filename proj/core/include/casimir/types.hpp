#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

using complex = std::complex<double>;

enum class Polarization { te, tm };
inline constexpr std::array<Polarization, 2> kPolarizations{Polarization::te, Polarization::tm};

// Plate geometry plus the physical constants the formulas use. Temperature is
// fixed at zero: thermal occupation is identically 1 in every integrand here.
struct PhysicalSetup {
  double a;                          // plate separation, m
  double hbar = constants::hbar;     // J s
  double c = constants::c;           // m/s

  explicit PhysicalSetup(double separation, double hbar_ = constants::hbar,
                         double c_ = constants::c)
      : a(separation), hbar(hbar_), c(c_) {
    if (!(a > 0.0)) throw DomainError("plate separation must be positive");
    if (!(hbar > 0.0) || !(c > 0.0)) throw DomainError("hbar and c must be positive");
  }

  // xi = 2 omega a / c, the dimensionless round-trip phase variable.
  double xi(double omega) const { return 2.0 * omega * a / c; }
  double omega(double xi) const { return xi * c / (2.0 * a); }
};

// Frequency-independent amplitude reflection coefficients, one per polarization.
// Passivity bounds |r| <= 1 (tiny slack for rounding).
struct ConstantReflection {
  complex te;
  complex tm;

  ConstantReflection(complex r_te, complex r_tm) : te(r_te), tm(r_tm) {
    if (std::abs(te) > 1.0 + 1e-12 || std::abs(tm) > 1.0 + 1e-12)
      throw DomainError("|r| must not exceed 1");
  }
  explicit ConstantReflection(double r) : ConstantReflection(complex(r), complex(r)) {}

  complex get(Polarization s) const { return s == Polarization::te ? te : tm; }
};

// One sample of the pressure frequency spectrum, split by polarization and by
// propagating/evanescent sector. Densities are dimensionless: multiply by
// hbar/a^3 to get the physical spectral density dP/domega.
struct SpectralSample {
  double xi = 0.0;
  double pw_te = 0.0;
  double pw_tm = 0.0;
  double ew_te = 0.0;
  double ew_tm = 0.0;

  double& pw(Polarization s) { return s == Polarization::te ? pw_te : pw_tm; }
  double& ew(Polarization s) { return s == Polarization::te ? ew_te : ew_tm; }
  double pw(Polarization s) const { return s == Polarization::te ? pw_te : pw_tm; }
  double ew(Polarization s) const { return s == Polarization::te ? ew_te : ew_tm; }
  double total() const { return pw_te + pw_tm + ew_te + ew_tm; }
};

enum class Method { closed_form, real_frequency, imag_frequency };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::closed_form: return "closed_form";
    case Method::real_frequency: return "real_frequency";
    case Method::imag_frequency: return "imag_frequency";
  }
  return "unknown";
}

// A pressure value (Pa, negative = attractive) with its provenance and splits.
// propagating/evanescent is only meaningful for the real-frequency route; the
// imaginary-frequency integrand has no such decomposition and reports all of
// the value as "propagating".
struct PressureResult {
  double value = 0.0;
  Method method = Method::closed_form;
  double propagating = 0.0;
  double evanescent = 0.0;
  double te = 0.0;
  double tm = 0.0;
  double error_estimate = 0.0;
};

}  // namespace casimir
