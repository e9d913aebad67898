#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydberg/state.hpp"

namespace rydberg {

enum class TransitionKind { one_photon, two_photon };

// All rates in rad/s.
struct DriveParameters {
    TransitionKind kind = TransitionKind::one_photon;
    double rabi = 0.0;        // Omega_1, or the effective Omega_2
    double light_shift = 0.0; // delta_0, two-photon only
    double tau = 0.0;         // interaction time, s
};

// Omega_1 = d1 E / hbar.
double one_photon_rabi(double field_V_per_m, double d1_si);
// Omega_2 = d1 d2 E^2 / (4 hbar^2 Delta), delta_0 = (d1^2 - d2^2) E^2 / (8 hbar^2 Delta).
// Delta is the detuning of the intermediate level, rad/s; zero throws DomainError.
double two_photon_rabi(double field_V_per_m, double d1_si, double d2_si, double Delta);
double two_photon_light_shift(double field_V_per_m, double d1_si, double d2_si, double Delta);

DriveParameters drive_from_field(TransitionKind kind, double field_V_per_m, double d1_si,
                                 double d2_si, double Delta, double tau);

// Field giving a rotation angle `theta` (pi for population inversion) on resonance.
double field_for_rotation(TransitionKind kind, double theta, double tau, double d1_si,
                          double d2_si = 0.0, double Delta = 0.0);

// omega(lower -> mid) - omega_photon with omega_photon = omega(lower -> upper) / 2.
double two_photon_intermediate_detuning(const RydbergState& lower, const RydbergState& mid,
                                        const RydbergState& upper);

// Photon number density of a classical field, cm^-3.
double photon_density(double field_V_per_m, double omega);

// Upper-state probability at detuning delta (rad/s). For two-photon, delta is
// the single-photon detuning.
double one_photon_probability(double Omega1, double delta, double tau);
double two_photon_probability(double Omega2, double delta0, double delta, double tau);
double transition_probability(const DriveParameters& drive, double delta);

struct Spectrum {
    std::vector<double> detunings_hz;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> curves;  // [label][detuning]
    std::size_t atoms = 1;

    const std::vector<double>& curve(const std::string& label) const;
};

// Curves "1" and "2": populations of the lower and upper level.
Spectrum single_atom_spectrum(const DriveParameters& drive, const std::vector<double>& detunings_hz);

// Warning text when tau is not small against the effective lifetimes of the
// states involved (spontaneous decay is left out of the lineshapes).
std::optional<std::string> decay_validity_warning(const std::vector<RydbergState>& states, double tau,
                                                  double temperature_K, double fraction = 0.1);

// Label of a multiset pattern with k atoms in the upper level, e.g. "{112}".
std::string multiset_label(std::size_t N, std::size_t k);
// Probability of a labeled pattern such as "12212", atoms independent.
double pattern_probability(const std::string& pattern, double rho);
double multiset_probability(std::size_t N, std::size_t k, double rho);

// All N + 1 multiset curves from the single-atom upper-level curve.
Spectrum multi_atom_spectrum(std::size_t N, const std::vector<double>& detunings_hz,
                             const std::vector<double>& rho);
// One labeled pattern.
Spectrum multi_atom_pattern(const std::string& pattern, const std::vector<double>& detunings_hz,
                            const std::vector<double>& rho);

// FWHM (rad/s) of the fully excited N-atom line, two-photon pi-pulse form.
double narrowed_width(double Omega2, std::size_t N);
double narrowing_ratio(std::size_t N);
double narrowing_ratio_asymptotic(std::size_t N);

struct DipCheck {
    double centre_value = 0.0;
    double maximum = 0.0;
    bool dip_present = false;
};

// Compares the value at `centre_index` with the curve maximum.
DipCheck dip_feature_check(const std::vector<double>& curve, std::size_t centre_index,
                           double tolerance = 1e-6);

}  // namespace rydberg
