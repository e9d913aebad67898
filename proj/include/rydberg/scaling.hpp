#pragma once

#include "rydberg/state.hpp"

namespace rydberg {

// Classical orbit radius 1.5 n^2 - L(L+1)/2, in Bohr radii.
double orbit_radius(double n, int L);

// Largest n with orbit radius not exceeding R/10 (R in metres). Real valued;
// callers floor it when they need an integer.
double max_principal_quantum_number(double R_m, int L);
// Circular-state variant, orbit radius n^2.
double max_principal_quantum_number_circular(double R_m);

// Rough n^2 estimate of the transition dipole, atomic units.
double estimate_dipole(double n);

// Classical field-ionization threshold 3.2e8 n_eff^-4 V/cm.
double sfi_critical_field(double n_eff);
double sfi_critical_field(const RydbergState& s);

double lande_g(const RydbergState& s);
// Splitting between adjacent mJ sublevels per unit field, MHz/G.
double zeeman_splitting_rate(const RydbergState& s);

}  // namespace rydberg
