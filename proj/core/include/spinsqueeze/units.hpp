#pragma once

#include <numbers>

// Unit conventions used throughout the library:
//   - every frequency-like quantity (couplings, decay rates, detunings,
//     mode frequencies, twisting rates) is stored in angular units, rad/s
//   - I/O boundaries (config files, reports, CSV) speak plain Hz; the
//     conversion is an explicit factor of 2*pi at the boundary
//   - lengths in m, temperatures in K, times in s, strain dimensionless

namespace sqz::units {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA / exact SI values.
inline constexpr double hbar = 1.054571817e-34;        // J s
inline constexpr double k_boltzmann = 1.380649e-23;    // J / K

constexpr double angular_from_hz(double f_hz) { return two_pi * f_hz; }
constexpr double hz_from_angular(double w_rad_s) { return w_rad_s / two_pi; }

} // namespace sqz::units
