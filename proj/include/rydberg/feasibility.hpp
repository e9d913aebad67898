#pragma once

#include <string>
#include <vector>

#include "rydberg/state.hpp"

namespace rydberg {

struct ExperimentConfig {
    SpeciesRef species;
    int n_s = 30;                    // qubit states nS1/2 and nP1/2
    int n_p = 30;
    double R_m = 5e-6;
    double pulse_duration_s = 50e-9;
    double spot_diameter_m = 1e-6;
    double magnetic_field_G = 10.0;
    double temperature_K = 300.0;
    double gate_time_s = 500e-9;
};

ExperimentConfig recommended_config();  // Na, n = 30, 50 ns pulses, 500 ns gate
ExperimentConfig fast_gate_config();    // Na, n = 50, 5 ns pulses, 50 ns gate

enum class Verdict { pass, fail, warning };
std::string to_string(Verdict v);

struct FeasibilityEntry {
    std::string name;
    double value = 0.0;
    std::string unit;
    double threshold = 0.0;
    std::string requirement;  // human readable threshold
    Verdict verdict = Verdict::pass;
    std::string formula;      // relation the value comes from
    int summary_item = 0;     // 1-based index in the limitations summary
    std::string note;
};

struct FeasibilityReport {
    ExperimentConfig config;
    std::vector<FeasibilityEntry> entries;
    bool all_pass() const;
    const FeasibilityEntry& entry(const std::string& name) const;
};

// Number of items in the limitations summary the report covers.
inline constexpr int kSummaryItems = 8;

// Per-atom laser power above which the excitation is flagged, W.
inline constexpr double kMaxLaserPowerPerAtom = 10e-3;
inline constexpr double kResolutionRequirementHz = 20e6;
// Gate time must stay below this fraction of the shortest effective lifetime.
inline constexpr double kBbrLifetimeFraction = 0.1;
// Largest ionisation field the detection ramp is assumed to reach, V/cm.
inline constexpr double kMaxSfiField = 1000.0;

struct PulseIntensity {
    double dipole_si = 0.0;        // C m
    double field_V_per_m = 0.0;
    double intensity_W_per_cm2 = 0.0;
    double power_W = 0.0;          // over a disc of the spot diameter
};

// Field from Omega tau = area with Omega = d E / hbar, I = eps0 c E^2 / 2.
// The polarisation is fixed by upper.mJ - lower.mJ. Throws DomainError if d = 0.
PulseIntensity pulse_intensity(const RydbergState& lower, const RydbergState& upper, double area,
                               double duration_s, double spot_diameter_m = 1e-6);

// Field giving the target splitting between adjacent sublevels, G.
double zeeman_requirement(double target_mhz, const RydbergState& s);

struct BbrVerdict {
    bool pass = false;
    double margin = 0.0;  // allowed gate time / actual gate time
    double min_lifetime_s = 0.0;
};

BbrVerdict bbr_verdict(const std::vector<RydbergState>& states, double gate_time_s,
                       double temperature_K);

// Never throws on physically inconsistent input; failed checks become entries.
FeasibilityReport feasibility_report(const ExperimentConfig& config);

std::string format_report_text(const FeasibilityReport& report);

}  // namespace rydberg
