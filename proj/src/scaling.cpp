#include "rydberg/scaling.hpp"

#include <cmath>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"

namespace rydberg {

double orbit_radius(double n, int L) {
    if (L < 0 || L >= n) throw DomainError("orbit_radius requires 0 <= L < n");
    return 0.5 * (3.0 * n * n - L * (L + 1.0));
}

double max_principal_quantum_number(double R_m, int L) {
    if (!(R_m > 0.0)) throw DomainError("R must be positive");
    return std::sqrt(R_m / (15.0 * constants::bohr_radius) + L * (L + 1.0) / 3.0);
}

double max_principal_quantum_number_circular(double R_m) {
    if (!(R_m > 0.0)) throw DomainError("R must be positive");
    const double x = R_m / (15.0 * constants::bohr_radius);
    double n = std::sqrt(x);
    for (int it = 0; it < 1000; ++it) {
        const double next = std::sqrt(x + n * (n - 1.0) / 3.0);
        if (std::abs(next - n) < 1e-6) return next;
        n = next;
    }
    throw NumericalError("circular n_max iteration did not converge");
}

double estimate_dipole(double n) {
    if (n < 1) throw DomainError("n must be at least 1");
    return n * n;
}

double sfi_critical_field(double n_eff) {
    if (!(n_eff > 0.0)) throw DomainError("n_eff must be positive");
    return 3.2e8 / std::pow(n_eff, 4);
}

double sfi_critical_field(const RydbergState& s) {
    return sfi_critical_field(effective_quantum_number(s));
}

double lande_g(const RydbergState& s) {
    const double J = s.J().value();
    const double L = s.L();
    const double S = 0.5;
    return 1.0 + (J * (J + 1.0) + S * (S + 1.0) - L * (L + 1.0)) / (2.0 * J * (J + 1.0));
}

double zeeman_splitting_rate(const RydbergState& s) {
    return lande_g(s) * constants::bohr_magneton_mhz_per_gauss;
}

}  // namespace rydberg
