#include "rydberg/qpg.hpp"

#include <cmath>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/pair.hpp"

namespace rydberg {

double wrap_phase(double phi) {
    double w = std::remainder(phi, 2.0 * constants::pi);
    if (w <= -constants::pi) w += 2.0 * constants::pi;
    return w;
}

double angle_distance(double a, double b) { return std::abs(std::remainder(a - b, 2.0 * constants::pi)); }

Eigen::VectorXcd integrate_rk4(const HamiltonianFn& H, Eigen::VectorXcd psi, double t0, double t1, std::size_t steps) {
    if (steps == 0) throw DomainError("RK4 needs at least one step");
    const double dt = (t1 - t0) / static_cast<double>(steps);
    const std::complex<double> mi(0.0, -1.0);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = t0 + dt * static_cast<double>(k);
        const Eigen::MatrixXcd Ha = H(t);
        const Eigen::MatrixXcd Hm = H(t + 0.5 * dt);
        const Eigen::MatrixXcd Hb = H(t + dt);
        const Eigen::VectorXcd k1 = mi * (Ha * psi);
        const Eigen::VectorXcd k2 = mi * (Hm * (psi + 0.5 * dt * k1));
        const Eigen::VectorXcd k3 = mi * (Hm * (psi + 0.5 * dt * k2));
        const Eigen::VectorXcd k4 = mi * (Hb * (psi + dt * k3));
        psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

GateConfig GateConfig::from_states(const RydbergState& s, const RydbergState& p, double R_m, double pulse_ratio) {
    GateConfig c;
    c.V_hz = dipole_dipole_shift(s, p, R_m);
    c.pulse_ratio = pulse_ratio;
    return c;
}

namespace {

// Single-atom levels
constexpr int kZero = 0, kOne = 1, kS = 2, kP = 3;
constexpr int idx(int a, int b) { return 4 * a + b; }

Eigen::MatrixXcd gate_hamiltonian(double omega_a, double omega_b, double coupling) {
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(16, 16);
    for (int other = 0; other < 4; ++other) {
        H(idx(kOne, other), idx(kS, other)) += 0.5 * omega_a;
        H(idx(kS, other), idx(kOne, other)) += 0.5 * omega_a;
        H(idx(other, kOne), idx(other, kP)) += 0.5 * omega_b;
        H(idx(other, kP), idx(other, kOne)) += 0.5 * omega_b;
    }
    H(idx(kS, kP), idx(kP, kS)) += coupling;
    H(idx(kP, kS), idx(kS, kP)) += coupling;
    return H;
}

}  // namespace

QpgResult qpg_sequence(const GateConfig& config) {
    if (!(config.pulse_ratio > 0.0)) throw DomainError("pulse ratio must be positive");
    if (!(config.steps_per_gate >= 1.0)) throw DomainError("steps per gate must be at least one");
    double T = 0.0;
    if (config.gate_time_s) {
        T = *config.gate_time_s;
    } else {
        if (config.V_hz == 0.0) throw DomainError("zero coupling needs an explicit gate time");
        T = interaction_time(config.V_hz);
    }
    if (!(T > 0.0)) throw DomainError("gate time must be positive");

    const double tau = T / config.pulse_ratio;
    const double coupling = 2.0 * constants::pi * config.V_hz;
    const double omega_up = config.excite_rotation * constants::pi / tau;
    const double omega_down = config.deexcite_rotation * constants::pi / tau;
    const double gap = config.centre_to_centre ? T - tau : T;
    if (gap < 0.0) throw DomainError("pulses longer than the gate time");
    const double dt_max = T / config.steps_per_gate;
    auto steps = [&](double d) { return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(d / dt_max - 1e-9))); };

    const Eigen::MatrixXcd H_up = gate_hamiltonian(omega_up, omega_up, coupling);
    const Eigen::MatrixXcd H_free = gate_hamiltonian(0.0, 0.0, coupling);
    const Eigen::MatrixXcd H_down = gate_hamiltonian(omega_down, omega_down, coupling);

    QpgResult result;
    result.gate_time_s = T;
    result.pulse_duration_s = tau;
    result.V_hz = config.V_hz;

    const std::array<std::pair<const char*, int>, 4> inputs{
        {{"00", idx(kZero, kZero)}, {"01", idx(kZero, kOne)}, {"10", idx(kOne, kZero)}, {"11", idx(kOne, kOne)}}};
    std::array<std::complex<double>, 4> amps{};
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(16);
        psi(inputs[k].second) = 1.0;
        double t = 0.0;
        psi = integrate_rk4([&](double) { return H_up; }, psi, t, t + tau, steps(tau));
        t += tau;
        if (gap > 0.0) psi = integrate_rk4([&](double) { return H_free; }, psi, t, t + gap, steps(gap));
        t += gap;
        psi = integrate_rk4([&](double) { return H_down; }, psi, t, t + tau, steps(tau));
        amps[k] = psi(inputs[k].second);
    }
    const double ref = std::arg(amps[0]);
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        auto& g = result.truth_table[k];
        g.input = inputs[k].first;
        g.amplitude = amps[k];
        g.phase_rad = wrap_phase(std::arg(amps[k]) - ref);
        g.leakage = 1.0 - std::norm(amps[k]);
    }
    return result;
}

}  // namespace rydberg
