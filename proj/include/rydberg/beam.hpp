#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rydberg/detection.hpp"
#include "rydberg/numerics.hpp"
#include "rydberg/spectroscopy.hpp"

namespace rydberg {

// coherent: signed cos(k x(t)) drive, Doppler components carried by the path.
// envelope: |cos(k x(t))| amplitude with a sampled travelling-wave Doppler
// shift; two-photon pairs are counter-propagating with probability 1/2.
enum class StandingWaveModel { coherent, envelope };

struct BeamConfig {
    double temperature_K = 450.0;
    double mean_speed = 600.0;              // m/s
    bool mean_speed_override = true;        // skip the Maxwell consistency check
    double mass_kg = 22.99 * 1.66053906660e-27;
    double transition_frequency_hz = 70e9;  // microwave photon frequency
    double interaction_time = 2.8e-6;       // s
    bool standing_wave = true;
    StandingWaveModel wave_model = StandingWaveModel::coherent;
    double field_fluctuation_rms = 0.10;    // fraction of E, per atom
    double excitation_length = 2e-4;        // m, laser spot along the beam
    std::size_t time_steps = 200;           // per trajectory
};

// Mean speed of an effusive beam, (3/4) sqrt(pi) sqrt(2 k T / m).
double maxwell_beam_mean_speed(double temperature_K, double mass_kg);
bool mean_speed_consistent(const BeamConfig& config, double tolerance = 0.05);

// (v / c) f.
double doppler_width(double mean_speed, double frequency_hz);

// Defaults for the sodium 37S -> 37P and 37S -> 38S beam measurements. The
// two-photon noise fraction follows from an absolute stray field equal to the
// one-photon fraction of the one-photon inversion field.
BeamConfig default_beam_config(TransitionKind kind);
// Matching inversion drives at the nominal interaction time.
DriveParameters default_beam_drive(TransitionKind kind);

struct AtomSample {
    double speed = 0.0;      // m/s
    double x0 = 0.0;         // m, start position relative to an antinode
    double amplitude = 1.0;  // field amplitude factor
    int direction = 1;       // sign of the travelling component seen
    bool counter_propagating = false;  // two-photon pair from opposite components
};

AtomSample sample_atom(const BeamConfig& config, std::mt19937_64& rng);

// Upper-level probability for one atom after the interaction time.
double atom_transfer_probability(const BeamConfig& config, const DriveParameters& drive,
                                 const AtomSample& atom, double detuning);

// Rescales the microwave field amplitude by `scale`.
DriveParameters scale_field(const DriveParameters& drive, double scale);

struct BeamDiagnostics {
    std::size_t samples = 0;
    std::size_t rejected = 0;
};

struct BeamResult {
    Spectrum spectrum;                   // curves "1" and "2"
    std::vector<double> standard_error;  // of curve "2"
    BeamDiagnostics diagnostics;
};

BeamResult beam_monte_carlo(const BeamConfig& config, const DriveParameters& drive,
                            const std::vector<double>& detunings_hz, std::size_t samples,
                            std::uint64_t seed, Execution execution = Execution::parallel);

// Field scale maximising the Monte Carlo transfer at zero detuning.
DriveParameters tune_drive_for_inversion(const BeamConfig& config, const DriveParameters& drive,
                                         std::size_t samples, std::uint64_t seed);

struct ShotSettings {
    std::size_t shots_per_detuning = 1000;
    double mean_atoms = 2.0;                // Poisson mean
    std::optional<int> fixed_atoms;         // overrides the Poisson draw
    DetectionModel detection;
};

struct BeamEvent {
    std::size_t detuning_index = 0;
    std::vector<int> final_states;  // 1 or 2 per atom
    double amplitude_lower_mV = 0.0;
    double amplitude_upper_mV = 0.0;
    int inferred_lower = 0;
    int inferred_upper = 0;
    bool reliable = true;
};

std::vector<BeamEvent> simulate_beam_events(const BeamConfig& config, const DriveParameters& drive,
                                            const std::vector<double>& detunings_hz,
                                            const ShotSettings& shots, std::uint64_t seed);

struct SortedSpectrum {
    Spectrum spectrum;                  // NaN marks detunings without selected events
    std::vector<std::size_t> selected;  // events passing the N filter, per detuning
};

// Post-selects events with inferred total count N and bins them by the number
// k found in the upper level. An empty pattern_filter keeps all k = 0..N,
// otherwise it names one multiset label.
SortedSpectrum sorted_multi_atom_spectra(const std::vector<BeamEvent>& events,
                                         const std::vector<double>& detunings_hz, int N,
                                         const std::string& pattern_filter = "");

}  // namespace rydberg
