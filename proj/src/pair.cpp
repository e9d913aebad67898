#include "rydberg/pair.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "rydberg/angular.hpp"
#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/radial.hpp"
#include "rydberg/scaling.hpp"

namespace rydberg {

namespace {

// (e a0)^2 / (4 pi eps0 R^3 h), Hz per (atomic unit)^2
double coupling_scale(double R_m) {
    if (!(R_m > 0.0)) throw DomainError("separation must be positive");
    using namespace constants;
    return atomic_dipole * atomic_dipole / (4.0 * pi * vacuum_permittivity * R_m * R_m * R_m * planck);
}

}  // namespace

double transition_dipole_z(const RydbergState& a, const RydbergState& b) {
    return dipole_matrix_element(a, b, 0) * constants::atomic_dipole;
}

double dipole_dipole_shift(double d_z_si, double R_m) {
    if (!(R_m > 0.0)) throw DomainError("separation must be positive");
    using namespace constants;
    return 2.0 * d_z_si * d_z_si / (4.0 * pi * vacuum_permittivity * R_m * R_m * R_m) / planck;
}

double dipole_dipole_shift(const RydbergState& a, const RydbergState& b, double R_m) {
    return dipole_dipole_shift(transition_dipole_z(a, b), R_m);
}

double interaction_time(double V_hz) {
    if (V_hz == 0.0) throw DomainError("no exchange without coupling");
    // pi hbar / V_dd with V_dd = h V
    return constants::pi * constants::hbar / (constants::planck * std::abs(V_hz));
}

PairEigenstates pair_eigenstates(const RydbergState& a, const RydbergState& b, double R_m) {
    if (a.mJ() != b.mJ()) throw DomainError("pair eigenstates need equal mJ");
    // z along R: <21|H|12> = -2 d_z^2 / (4 pi eps0 R^3)
    const double dz = dipole_matrix_element(a, b, 0);
    const double coupling = -2.0 * dz * dz * coupling_scale(R_m);
    PairEigenstates out;
    out.decoupled = (dz == 0.0);
    // |+> = (|12> + |21>)/sqrt2 sits at +coupling
    out.levels = {PairLevel{coupling, "+"}, PairLevel{-coupling, "-"}};
    if (out.levels[0].energy_hz > out.levels[1].energy_hz) std::swap(out.levels[0], out.levels[1]);
    return out;
}

std::pair<std::complex<double>, std::complex<double>> exchange_evolution(double V_hz, double t) {
    const double phase = 2.0 * constants::pi * V_hz * t;
    return {std::complex<double>(std::cos(phase), 0.0), std::complex<double>(0.0, -std::sin(phase))};
}

PairBasis make_pair_basis(std::vector<RydbergState> single, double R_m) {
    if (single.empty()) throw DomainError("empty pair basis");
    if (!(R_m > 0.0)) throw DomainError("separation must be positive");
    double largest = 0.0;
    for (const auto& s : single) largest = std::max(largest, orbit_radius(s.n(), s.L()));
    if (R_m <= 10.0 * largest * constants::bohr_radius)
        throw DomainError("separation inside ten orbit radii, collisional regime");
    return PairBasis{std::move(single), R_m};
}

Eigen::MatrixXd build_pair_hamiltonian(const PairBasis& basis, bool include_dd, bool zz_only) {
    const std::size_t m = basis.single.size();
    const auto dim = static_cast<Eigen::Index>(basis.dimension());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);

    std::vector<double> energy(m);
    for (std::size_t i = 0; i < m; ++i) energy[i] = state_energy_hz(basis.single[i]);
    double lowest = energy[0] * 2.0;
    for (double ea : energy)
        for (double eb : energy) lowest = std::min(lowest, ea + eb);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            const auto k = static_cast<Eigen::Index>(basis.index(a, b));
            H(k, k) = (energy[a] - lowest / 2.0) + (energy[b] - lowest / 2.0);
        }
    if (!include_dd) return H;

    // D[q][i][j] = <i| r C1_q |j>
    std::array<std::vector<double>, 3> D;
    for (int q = -1; q <= 1; ++q) {
        auto& t = D[static_cast<std::size_t>(q + 1)];
        t.assign(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) t[i * m + j] = dipole_matrix_element(basis.single[i], basis.single[j], q);
    }
    auto d = [&](int q, std::size_t i, std::size_t j) { return D[static_cast<std::size_t>(q + 1)][i * m + j]; };

    const double K = coupling_scale(basis.R_m);
    for (std::size_t a1 = 0; a1 < m; ++a1)
        for (std::size_t b1 = 0; b1 < m; ++b1)
            for (std::size_t a2 = 0; a2 < m; ++a2)
                for (std::size_t b2 = 0; b2 < m; ++b2) {
                    double v = -2.0 * d(0, a1, a2) * d(0, b1, b2);
                    if (!zz_only) v -= d(1, a1, a2) * d(-1, b1, b2) + d(-1, a1, a2) * d(1, b1, b2);
                    if (v == 0.0) continue;
                    H(static_cast<Eigen::Index>(basis.index(a1, b1)), static_cast<Eigen::Index>(basis.index(a2, b2))) += K * v;
                }
    return H;
}

BlockadeVerdict blockade_condition(double V_hz, double tau_s, double threshold) {
    if (!(tau_s > 0.0)) throw DomainError("pulse duration must be positive");
    BlockadeVerdict v;
    v.ratio = std::abs(V_hz) * tau_s;
    v.at_boundary = std::abs(v.ratio - threshold) <= 1e-12 * std::max(1.0, threshold);
    v.satisfied = v.ratio >= threshold || v.at_boundary;
    return v;
}

ExchangeManifold exchange_manifold(const RydbergState& s, const RydbergState& p, double R_m, bool only_stretched) {
    if (std::abs(s.L() - p.L()) != 1) throw DomainError("exchange needs a dipole-allowed pair");
    auto sublevels = [&](const RydbergState& x) {
        std::vector<RydbergState> out;
        if (only_stretched) {
            out.push_back(x);
        } else {
            for (int tm = -x.J().twice; tm <= x.J().twice; tm += 2) out.push_back(x.with_mJ(HalfInteger(tm)));
        }
        return out;
    };
    const auto ss = sublevels(s);
    const auto ps = sublevels(p);
    ExchangeManifold em;
    for (const auto& a : ss)
        for (const auto& b : ps) em.configs.emplace_back(a, b);
    for (const auto& a : ss)
        for (const auto& b : ps) em.configs.emplace_back(b, a);

    const double K = coupling_scale(R_m);
    const double radial = radial_matrix_element(s, p);
    auto d = [&](const RydbergState& x, const RydbergState& y, int q) { return radial * angular_factor(x, y, q); };
    const auto n = static_cast<Eigen::Index>(em.configs.size());
    em.hamiltonian_hz = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto& [a1, b1] = em.configs[static_cast<std::size_t>(i)];
            const auto& [a2, b2] = em.configs[static_cast<std::size_t>(j)];
            if (a1.L() == a2.L()) continue;
            double v = -2.0 * d(a1, a2, 0) * d(b1, b2, 0);
            if (!only_stretched) v -= d(a1, a2, 1) * d(b1, b2, -1) + d(a1, a2, -1) * d(b1, b2, 1);
            em.hamiltonian_hz(i, j) = K * v;
        }
    return em;
}

namespace {

std::vector<double> distinct(std::vector<double> v, double tol) {
    std::sort(v.begin(), v.end());
    std::vector<double> out;
    for (double x : v)
        if (out.empty() || std::abs(x - out.back()) > tol) out.push_back(x);
    return out;
}

}  // namespace

DegenerateResult degenerate_pair_evolution(const RydbergState& s, const RydbergState& p, double R_m, double t_max,
                                           std::size_t samples, bool only_stretched) {
    if (!(t_max > 0.0) || samples < 2) throw DomainError("bad time grid");
    const ExchangeManifold em = exchange_manifold(s, p, R_m, only_stretched);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(em.hamiltonian_hz);
    if (solver.info() != Eigen::Success) throw NumericalError("exchange manifold diagonalisation failed");

    DegenerateResult r;
    const Eigen::VectorXd& lam = solver.eigenvalues();
    const Eigen::MatrixXd& V = solver.eigenvectors();
    const double scale = lam.cwiseAbs().maxCoeff();
    const double tol = 1e-9 * std::max(scale, 1.0);
    r.exchange_levels_hz = distinct({lam.data(), lam.data() + lam.size()}, tol);

    std::vector<Eigen::Index> m0;
    for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(em.configs.size()); ++i) {
        const auto& [a, b] = em.configs[static_cast<std::size_t>(i)];
        if (a.mJ().twice + b.mJ().twice == 0) m0.push_back(i);
    }
    if (!m0.empty()) {
        Eigen::MatrixXd H0(static_cast<Eigen::Index>(m0.size()), static_cast<Eigen::Index>(m0.size()));
        for (std::size_t i = 0; i < m0.size(); ++i)
            for (std::size_t j = 0; j < m0.size(); ++j)
                H0(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = em.hamiltonian_hz(m0[i], m0[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s0(H0, Eigen::EigenvaluesOnly);
        r.m0_levels_hz = distinct({s0.eigenvalues().data(), s0.eigenvalues().data() + s0.eigenvalues().size()}, tol);
    }

    // Initial configurations: atom a in S, atom b in P (first half of the list).
    const std::size_t n_init = em.configs.size() / 2;
    for (std::size_t k = 1; k < samples + 1; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(samples);
        double fidelity = 0.0;
        bool phase_ok = true;
        for (std::size_t i = 0; i < n_init; ++i) {
            std::complex<double> c = 0.0;
            for (Eigen::Index e = 0; e < lam.size(); ++e) {
                const double w = V(static_cast<Eigen::Index>(i), e) * V(static_cast<Eigen::Index>(i), e);
                c += w * std::polar(1.0, -2.0 * constants::pi * lam(e) * t);
            }
            fidelity += std::norm(c);
            const double dist = std::abs(std::remainder(std::arg(c) - constants::pi, 2.0 * constants::pi));
            if (!(dist < 0.1)) phase_ok = false;
        }
        fidelity /= static_cast<double>(n_init);
        if (fidelity > r.best_mixture_fidelity) {
            r.best_mixture_fidelity = fidelity;
            r.best_time_s = t;
        }
        if (phase_ok) {
            r.best_fidelity_with_phase = std::max(r.best_fidelity_with_phase, fidelity);
            if (fidelity > 0.99) r.phase_condition_met = true;
        }
    }
    return r;
}

}  // namespace rydberg
