#pragma once

#include <numbers>

namespace imgrx::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt_pi = 1.7724538509055160273;

// Rounded vacuum permittivity used by the bandwidth calibration (F/m).
inline constexpr double vacuum_permittivity = 8.85e-12;
inline constexpr double boltzmann = 1.380649e-23;  // J/K

}  // namespace imgrx::constants
