#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rydberg/numerics.hpp"
#include "rydberg/radial.hpp"
#include "rydberg/state.hpp"

namespace rydberg {

struct DecayChannel {
    RydbergState partner;
    double frequency_hz = 0.0;      // signed, E(partner) - E(state)
    double spontaneous_rate = 0.0;  // 1/s
    double bbr_rate = 0.0;          // 1/s
};

struct LifetimeOptions {
    int window = 5;                 // |delta n| kept for thermal transitions
    bool check_convergence = true;  // compare against a wider window
    double warning_threshold = 0.01;
    Execution execution = Execution::parallel;
};

struct LifetimeResult {
    RydbergState state;
    double temperature_K = 0.0;
    double radiative_lifetime = 0.0;  // s, T = 0
    double effective_lifetime = 0.0;  // s
    double spontaneous_rate = 0.0;    // 1/s
    double bbr_rate = 0.0;            // 1/s
    std::vector<DecayChannel> dominant_decay_channels;  // by spontaneous rate
    std::optional<std::string> accuracy_warning;
};

// A = omega^3 d^2 / (3 pi eps0 hbar c^3) for an already J-averaged d^2 (C^2 m^2).
double einstein_a(double omega, double dipole_squared_si);

// Mean photon occupation 1/(exp(h f / k T) - 1); zero at T = 0.
double photon_occupation(double frequency_hz, double temperature_K);

// Every dipole-allowed partner (L +- 1, all J') with n' in [lowest, n + window].
std::vector<DecayChannel> decay_channels(const RydbergState& s, double temperature_K, int window,
                                         WavefunctionCache& cache,
                                         Execution execution = Execution::parallel);

LifetimeResult lifetime(const RydbergState& s, double temperature_K,
                        const LifetimeOptions& options = {});
LifetimeResult lifetime(const RydbergState& s, double temperature_K, const LifetimeOptions& options,
                        WavefunctionCache& cache);

}  // namespace rydberg
