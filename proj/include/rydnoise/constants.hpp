#pragma once

// CODATA 2018 values, SI units.

#include <numbers>

namespace rydnoise::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

inline constexpr double c = 299792458.0;                  // m/s
inline constexpr double h = 6.62607015e-34;               // J s
inline constexpr double hbar = h / two_pi;                // J s
inline constexpr double e = 1.602176634e-19;              // C
inline constexpr double epsilon0 = 8.8541878128e-12;      // F/m
inline constexpr double mu0 = 1.25663706212e-6;           // N/A^2
inline constexpr double a0 = 5.29177210903e-11;           // m
inline constexpr double kB = 1.380649e-23;                // J/K
inline constexpr double amu = 1.66053906660e-27;          // kg
inline constexpr double electron_mass_u = 5.48579909065e-4;
inline constexpr double rydberg_infinity_hz = 3.2898419602508e15;  // R_inf * c

// Free-space impedance c*mu0.
inline constexpr double z0 = c * mu0;

// 85Rb
inline constexpr double rb85_mass_u = 84.911789738;
inline constexpr double rb85_natural_abundance = 0.7217;

}  // namespace rydnoise::constants
