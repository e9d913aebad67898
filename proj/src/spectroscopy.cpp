#include "rydberg/spectroscopy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/lifetime.hpp"

namespace rydberg {

double one_photon_rabi(double field, double d1) { return d1 * field / constants::hbar; }

double two_photon_rabi(double field, double d1, double d2, double Delta) {
    if (Delta == 0.0) throw DomainError("two-photon drive resonant with the intermediate level");
    return d1 * d2 * field * field / (4.0 * constants::hbar * constants::hbar * Delta);
}

double two_photon_light_shift(double field, double d1, double d2, double Delta) {
    if (Delta == 0.0) throw DomainError("two-photon drive resonant with the intermediate level");
    return (d1 - d2) * (d1 + d2) * field * field / (8.0 * constants::hbar * constants::hbar * Delta);
}

DriveParameters drive_from_field(TransitionKind kind, double field, double d1, double d2, double Delta, double tau) {
    if (!(tau > 0.0)) throw DomainError("interaction time must be positive");
    DriveParameters p;
    p.kind = kind;
    p.tau = tau;
    if (kind == TransitionKind::one_photon) {
        p.rabi = one_photon_rabi(field, d1);
    } else {
        p.rabi = two_photon_rabi(field, d1, d2, Delta);
        p.light_shift = two_photon_light_shift(field, d1, d2, Delta);
    }
    return p;
}

double field_for_rotation(TransitionKind kind, double theta, double tau, double d1, double d2, double Delta) {
    if (!(tau > 0.0)) throw DomainError("interaction time must be positive");
    if (kind == TransitionKind::one_photon) {
        if (d1 == 0.0) throw DomainError("vanishing dipole");
        return theta * constants::hbar / (std::abs(d1) * tau);
    }
    // 2 Omega_2 tau = theta
    const double omega2 = theta / (2.0 * tau);
    const double prod = d1 * d2 / Delta;
    if (Delta == 0.0) throw DomainError("two-photon drive resonant with the intermediate level");
    if (prod == 0.0) throw DomainError("vanishing dipole");
    return std::sqrt(4.0 * constants::hbar * constants::hbar * omega2 / std::abs(prod));
}

double two_photon_intermediate_detuning(const RydbergState& lower, const RydbergState& mid, const RydbergState& upper) {
    const double f_mid = transition_frequency_hz(lower, mid);
    const double f_photon = 0.5 * transition_frequency_hz(lower, upper);
    return 2.0 * constants::pi * (f_mid - f_photon);
}

double photon_density(double field, double omega) {
    if (!(omega > 0.0)) throw DomainError("photon frequency must be positive");
    const double per_m3 = constants::vacuum_permittivity * field * field / (2.0 * constants::hbar * omega);
    return per_m3 * 1e-6;
}

double one_photon_probability(double Omega1, double delta, double tau) {
    const double W2 = delta * delta + Omega1 * Omega1;
    if (W2 == 0.0) return 0.0;
    const double s = std::sin(0.5 * tau * std::sqrt(W2));
    return Omega1 * Omega1 / W2 * s * s;
}

double two_photon_probability(double Omega2, double delta0, double delta, double tau) {
    const double x = delta - delta0;
    const double W2 = x * x + Omega2 * Omega2;
    if (W2 == 0.0) return 0.0;
    const double s = std::sin(tau * std::sqrt(W2));
    return Omega2 * Omega2 / W2 * s * s;
}

double transition_probability(const DriveParameters& d, double delta) {
    if (d.kind == TransitionKind::one_photon) return one_photon_probability(d.rabi, delta, d.tau);
    return two_photon_probability(d.rabi, d.light_shift, delta, d.tau);
}

const std::vector<double>& Spectrum::curve(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw DomainError("spectrum has no curve " + label);
    return curves[static_cast<std::size_t>(it - labels.begin())];
}

Spectrum single_atom_spectrum(const DriveParameters& drive, const std::vector<double>& detunings_hz) {
    Spectrum s;
    s.detunings_hz = detunings_hz;
    s.labels = {"1", "2"};
    s.curves.assign(2, std::vector<double>(detunings_hz.size()));
    for (std::size_t i = 0; i < detunings_hz.size(); ++i) {
        const double rho = transition_probability(drive, 2.0 * constants::pi * detunings_hz[i]);
        s.curves[0][i] = 1.0 - rho;
        s.curves[1][i] = rho;
    }
    return s;
}

std::optional<std::string> decay_validity_warning(const std::vector<RydbergState>& states, double tau,
                                                  double temperature_K, double fraction) {
    for (const auto& st : states) {
        LifetimeOptions opt;
        opt.check_convergence = false;
        const double life = lifetime(st, temperature_K, opt).effective_lifetime;
        if (tau > fraction * life) {
            std::ostringstream msg;
            msg << "interaction time " << tau * 1e6 << " us is not small against the " << life * 1e6
                << " us lifetime of " << st.label() << "; decay is not modelled";
            return msg.str();
        }
    }
    return std::nullopt;
}

std::string multiset_label(std::size_t N, std::size_t k) {
    if (k > N) throw DomainError("more excited atoms than atoms");
    return "{" + std::string(N - k, '1') + std::string(k, '2') + "}";
}

double pattern_probability(const std::string& pattern, double rho) {
    if (pattern.empty()) throw DomainError("empty pattern");
    double p = 1.0;
    for (char c : pattern) {
        if (c == '1')
            p *= 1.0 - rho;
        else if (c == '2')
            p *= rho;
        else
            throw DomainError("pattern may only contain 1 and 2");
    }
    return p;
}

double multiset_probability(std::size_t N, std::size_t k, double rho) {
    if (N == 0) throw DomainError("need at least one atom");
    if (k > N) throw DomainError("more excited atoms than atoms");
    double binom = 1.0;
    for (std::size_t i = 1; i <= k; ++i) binom = binom * static_cast<double>(N - k + i) / static_cast<double>(i);
    return binom * std::pow(rho, static_cast<double>(k)) * std::pow(1.0 - rho, static_cast<double>(N - k));
}

Spectrum multi_atom_spectrum(std::size_t N, const std::vector<double>& detunings_hz, const std::vector<double>& rho) {
    if (N == 0) throw DomainError("need at least one atom");
    if (rho.size() != detunings_hz.size()) throw DomainError("curve and detuning grid differ in length");
    Spectrum s;
    s.detunings_hz = detunings_hz;
    s.atoms = N;
    for (std::size_t k = 0; k <= N; ++k) {
        s.labels.push_back(multiset_label(N, k));
        std::vector<double> c(rho.size());
        for (std::size_t i = 0; i < rho.size(); ++i) c[i] = multiset_probability(N, k, rho[i]);
        s.curves.push_back(std::move(c));
    }
    return s;
}

Spectrum multi_atom_pattern(const std::string& pattern, const std::vector<double>& detunings_hz,
                            const std::vector<double>& rho) {
    if (rho.size() != detunings_hz.size()) throw DomainError("curve and detuning grid differ in length");
    Spectrum s;
    s.detunings_hz = detunings_hz;
    s.atoms = pattern.size();
    s.labels = {pattern};
    std::vector<double> c(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) c[i] = pattern_probability(pattern, rho[i]);
    s.curves.push_back(std::move(c));
    return s;
}

double narrowed_width(double Omega2, std::size_t N) {
    if (N == 0) throw DomainError("need at least one atom");
    return 2.0 * Omega2 * std::sqrt(std::exp2(1.0 / static_cast<double>(N)) - 1.0);
}

double narrowing_ratio(std::size_t N) { return narrowed_width(1.0, 1) / narrowed_width(1.0, N); }

double narrowing_ratio_asymptotic(std::size_t N) {
    if (N == 0) throw DomainError("need at least one atom");
    return std::sqrt(static_cast<double>(N) / std::log(2.0));
}

DipCheck dip_feature_check(const std::vector<double>& curve, std::size_t centre, double tolerance) {
    if (centre >= curve.size()) throw DomainError("centre index outside the curve");
    DipCheck d;
    d.centre_value = curve[centre];
    const auto left = std::max_element(curve.begin(), curve.begin() + static_cast<std::ptrdiff_t>(centre) + 1);
    const auto right = std::max_element(curve.begin() + static_cast<std::ptrdiff_t>(centre), curve.end());
    d.maximum = std::max(*left, *right);
    const double flank = std::min(*left, *right);
    d.dip_present = flank - d.centre_value > tolerance * std::max(flank, 1e-300);
    return d;
}

}  // namespace rydberg
