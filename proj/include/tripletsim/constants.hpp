#pragma once

#include <complex>
#include <numbers>

namespace tripletsim {

using cd = std::complex<double>;

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kHbar = 1.054571817e-34;
inline constexpr double kEpsilon0 = 8.8541878128e-12;
inline constexpr double kPi = std::numbers::pi;

inline constexpr double angular_frequency_from_wavelength(double wavelength_m) {
  return 2.0 * kPi * kSpeedOfLight / wavelength_m;
}

inline constexpr double wavelength_from_angular_frequency(double omega) {
  return 2.0 * kPi * kSpeedOfLight / omega;
}

}  // namespace tripletsim
