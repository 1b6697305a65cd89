#pragma once

namespace casimir::constants {

// SI values. hbar is h/2pi with h exact; c is exact.
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double c = 299792458.0;         // m/s

// Electron-volt expressed as an angular frequency: omega = E/hbar.
inline constexpr double eV_charge = 1.602176634e-19;            // J
inline constexpr double eV_to_rad_s = eV_charge / hbar;         // 1.519267e15 rad/s per eV

// zeta(2..4), used by the polylogarithm closed forms.
inline constexpr double zeta2 = 1.6449340668482264;
inline constexpr double zeta3 = 1.2020569031595943;
inline constexpr double zeta4 = 1.0823232337111382;

}  // namespace casimir::constants
