#pragma once

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "rydberg/state.hpp"

namespace rydberg {

// Two atoms, each with levels {0, 1, S, P}. Atom a's laser drives 1 <-> S,
// atom b's drives 1 <-> P. The dipole coupling exchanges |SP> and |PS>.
struct GateConfig {
    double V_hz = 0.0;           // exchange coupling
    double pulse_ratio = 10.0;   // T / tau_pulse
    std::optional<double> gate_time_s;  // overrides 1 / (2 V), required when V = 0
    double steps_per_gate = 1e4; // RK4 steps per gate time
    // Excitation is a pi rotation, de-excitation 3 pi, both of length tau_pulse.
    double excite_rotation = 1.0;    // units of pi
    double deexcite_rotation = 3.0;  // units of pi
    // Pulse centres separated by T instead of a free gap of T.
    bool centre_to_centre = true;

    static GateConfig from_states(const RydbergState& s, const RydbergState& p, double R_m,
                                  double pulse_ratio);
};

struct GateResult {
    std::string input;       // "00", "01", "10", "11"
    double phase_rad = 0.0;  // relative to the |00> amplitude, wrapped to (-pi, pi]
    double leakage = 0.0;    // 1 - |<in|U|in>|^2
    std::complex<double> amplitude;
};

struct QpgResult {
    std::array<GateResult, 4> truth_table;
    double gate_time_s = 0.0;
    double pulse_duration_s = 0.0;
    double V_hz = 0.0;
};

QpgResult qpg_sequence(const GateConfig& config);

// Fixed-step RK4 for i d psi/dt = H(t) psi, H in rad/s.
using HamiltonianFn = std::function<Eigen::MatrixXcd(double)>;
Eigen::VectorXcd integrate_rk4(const HamiltonianFn& H, Eigen::VectorXcd psi, double t0, double t1,
                               std::size_t steps);

// Smallest distance between two angles on the circle.
double angle_distance(double a, double b);
double wrap_phase(double phi);

}  // namespace rydberg
