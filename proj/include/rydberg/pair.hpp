#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydberg/state.hpp"

namespace rydberg {

// z dipole (C m) of the a -> b transition.
double transition_dipole_z(const RydbergState& a, const RydbergState& b);

// |V_dd| = 2 d_z^2 / (4 pi eps0 R^3) as a frequency, Hz.
double dipole_dipole_shift(double d_z_si, double R_m);
double dipole_dipole_shift(const RydbergState& a, const RydbergState& b, double R_m);

// Time for complete exchange |12> -> |21> and back with a sign flip: 1 / (2 V).
double interaction_time(double V_hz);

struct PairLevel {
    double energy_hz = 0.0;
    std::string label;  // "+" or "-"
};

struct PairEigenstates {
    std::array<PairLevel, 2> levels;
    bool decoupled = false;  // d_z vanished, levels degenerate
};

PairEigenstates pair_eigenstates(const RydbergState& a, const RydbergState& b, double R_m);

// Amplitudes (c12, c21) after time t starting from |12>.
std::pair<std::complex<double>, std::complex<double>> exchange_evolution(double V_hz, double t);

struct PairBasis {
    std::vector<RydbergState> single;  // one-atom states
    double R_m = 0.0;
    std::size_t dimension() const { return single.size() * single.size(); }
    std::size_t index(std::size_t a, std::size_t b) const { return a * single.size() + b; }
};

// Throws DomainError if R is below ten orbit radii of any member.
PairBasis make_pair_basis(std::vector<RydbergState> single, double R_m);

// Pair Hamiltonian in Hz, relative to the lowest pair energy. Quantisation
// axis along the interatomic axis. zz_only keeps just the d_z d_z term.
Eigen::MatrixXd build_pair_hamiltonian(const PairBasis& basis, bool include_dd = true,
                                       bool zz_only = false);

struct BlockadeVerdict {
    double ratio = 0.0;  // (V/h) tau
    bool satisfied = false;
    bool at_boundary = false;
};

// Requires (V_dd/h) tau >= threshold.
BlockadeVerdict blockade_condition(double V_hz, double tau_s, double threshold = 10.0);

struct DegenerateResult {
    std::vector<double> exchange_levels_hz;  // full exchange manifold spectrum
    std::vector<double> m0_levels_hz;        // distinct levels of the M = 0 sector
    double best_mixture_fidelity = 0.0;      // max over t of mean return probability
    double best_time_s = 0.0;
    double best_fidelity_with_phase = 0.0;   // same, only where every phase is within tol of pi
    bool phase_condition_met = false;
};

// Evolves every sublevel configuration |S m, P m'> of the exchange manifold
// over [0, t_max] on `samples` points. With only_stretched the single mJ = 1/2
// configuration is used.
DegenerateResult degenerate_pair_evolution(const RydbergState& s, const RydbergState& p, double R_m,
                                           double t_max, std::size_t samples,
                                           bool only_stretched = false);

// Exact propagator of the exchange manifold at time t; rows/cols follow configs.
struct ExchangeManifold {
    std::vector<std::pair<RydbergState, RydbergState>> configs;
    Eigen::MatrixXd hamiltonian_hz;
};

ExchangeManifold exchange_manifold(const RydbergState& s, const RydbergState& p, double R_m,
                                   bool only_stretched = false);

}  // namespace rydberg
