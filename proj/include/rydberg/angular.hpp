#pragma once

#include "rydberg/state.hpp"

namespace rydberg {

// All arguments are twice the quantum number.
double wigner_3j(int tj1, int tj2, int tj3, int tm1, int tm2, int tm3);
double wigner_6j(int tj1, int tj2, int tj3, int tj4, int tj5, int tj6);

enum class Polarization { z = 0, plus = 1, minus = -1 };

// Reduced element <L1 J1 || C1 || L2 J2> with the electron spin as spectator.
double reduced_c1(int L1, HalfInteger J1, int L2, HalfInteger J2);

// <a| C1_q |b>; zero for dipole-forbidden pairs.
double angular_factor(const RydbergState& a, const RydbergState& b, int q);
double angular_factor(const RydbergState& a, const RydbergState& b, Polarization p);

// Sum over mJ' and q of |<a|C1_q|b>|^2, independent of the mJ of a.
double line_strength_factor(int L_upper, HalfInteger J_upper, int L_lower, HalfInteger J_lower);

// Dipole matrix element <a| r C1_q |b> in atomic units.
double dipole_matrix_element(const RydbergState& a, const RydbergState& b, int q);

}  // namespace rydberg
