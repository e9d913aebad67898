#pragma once

#include <numbers>

// SI values (CODATA 2018) plus the few derived factors used throughout.
namespace rydberg::constants {

inline constexpr double pi = std::numbers::pi;

inline constexpr double bohr_radius = 5.29177210903e-11;        // m
inline constexpr double elementary_charge = 1.602176634e-19;    // C
inline constexpr double planck = 6.62607015e-34;                // J s
inline constexpr double hbar = planck / (2.0 * pi);             // J s
inline constexpr double vacuum_permittivity = 8.8541878128e-12; // F/m
inline constexpr double speed_of_light = 299792458.0;           // m/s
inline constexpr double rydberg_frequency = 3.2898419602508e15; // Hz
inline constexpr double boltzmann = 1.380649e-23;               // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;   // kg
inline constexpr double fine_structure = 7.2973525693e-3;

inline constexpr double bohr_magneton_mhz_per_gauss = 1.3996;

// e*a0, the atomic unit of dipole moment.
inline constexpr double atomic_dipole = elementary_charge * bohr_radius;  // C m
// Hartree energy expressed as a frequency.
inline constexpr double hartree_frequency = 2.0 * rydberg_frequency;      // Hz
// Atomic unit of electric field.
inline constexpr double atomic_field = 5.14220674763e11;                  // V/m

}  // namespace rydberg::constants

namespace rydberg {

// Aggregate view of the constants for code that wants to pass them around.
struct PhysicalConstants {
    double bohr_radius = constants::bohr_radius;
    double elementary_charge = constants::elementary_charge;
    double hbar = constants::hbar;
    double planck = constants::planck;
    double vacuum_permittivity = constants::vacuum_permittivity;
    double speed_of_light = constants::speed_of_light;
    double rydberg_frequency = constants::rydberg_frequency;
    double bohr_magneton_mhz_per_gauss = constants::bohr_magneton_mhz_per_gauss;
    double boltzmann = constants::boltzmann;
};

const PhysicalConstants& physical_constants();

}  // namespace rydberg
