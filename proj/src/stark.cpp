#include "rydberg/stark.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "rydberg/angular.hpp"
#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"

namespace rydberg {

StarkBasis make_stark_basis(SpeciesRef species, HalfInteger mJ, int n_min, int n_max, int l_max) {
    if (n_min < 1 || n_max < n_min) throw DomainError("Stark basis needs 1 <= n_min <= n_max");
    if (!mJ.is_half_odd()) throw DomainError("mJ must be half-odd");
    StarkBasis b{species, mJ, n_min, n_max, {}};
    for (int n = n_min; n <= n_max; ++n) {
        const int top = l_max < 0 ? n - 1 : std::min(l_max, n - 1);
        for (int L = 0; L <= top; ++L) {
            if (n < species->lowest_n(L)) continue;
            for (int tj : {2 * L - 1, 2 * L + 1}) {
                if (tj < 1 || tj < std::abs(mJ.twice)) continue;
                b.states.emplace_back(species, n, L, HalfInteger(tj), mJ);
            }
        }
    }
    return b;
}

double stark_coupling_ghz() {
    // e * a0 * (1 V/cm) / h
    return constants::atomic_dipole * 100.0 / constants::planck / 1e9;
}

StarkOperator::StarkOperator(const StarkBasis& basis, Execution execution) : basis_(basis) {
    const auto n = static_cast<std::ptrdiff_t>(basis_.states.size());
    for (const auto& s : basis_.states)
        if (s.mJ() != basis_.mJ) throw DomainError("Stark basis states must share mJ");
    energies_.resize(n);
    dipole_ = Eigen::MatrixXd::Zero(n, n);
    for (std::ptrdiff_t i = 0; i < n; ++i) energies_(i) = state_energy_hz(basis_.states[i]) / 1e9;

    WavefunctionCache cache;
    auto row = [&](std::ptrdiff_t i) {
        const auto& a = basis_.states[static_cast<std::size_t>(i)];
        for (std::ptrdiff_t j = i + 1; j < n; ++j) {
            const auto& b = basis_.states[static_cast<std::size_t>(j)];
            if (std::abs(a.L() - b.L()) != 1) continue;
            const double ang = angular_factor(a, b, 0);
            if (ang == 0.0) continue;
            const double z = ang * cache.matrix_element(a, b);
            dipole_(i, j) = z;
            dipole_(j, i) = z;
        }
    };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < n; ++i) row(i);
    } else {
        for (std::ptrdiff_t i = 0; i < n; ++i) row(i);
    }
}

Eigen::MatrixXd StarkOperator::hamiltonian(double field_V_per_cm) const {
    Eigen::MatrixXd H = (field_V_per_cm * stark_coupling_ghz()) * dipole_;
    H.diagonal() += energies_;
    return H;
}

Eigen::MatrixXd build_stark_hamiltonian(const StarkBasis& basis, double field_V_per_cm) {
    return StarkOperator(basis).hamiltonian(field_V_per_cm);
}

std::size_t StarkMap::curve_for(const std::string& label) const {
    auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw DomainError("no Stark curve labelled " + label);
    return static_cast<std::size_t>(it - labels.begin());
}

std::vector<double> StarkMap::curve(std::size_t index) const {
    std::vector<double> out;
    out.reserve(energies_ghz.size());
    for (const auto& row : energies_ghz) out.push_back(row.at(index));
    return out;
}

namespace {

struct Eigenpairs {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

Eigenpairs diagonalize(const StarkOperator& op, double field) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(op.hamiltonian(field));
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "Stark eigensolver failed at " << field << " V/cm";
        throw NumericalError(msg.str());
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

// order[c] = eigenpair index continuing curve c.
std::vector<std::size_t> match_curves(const Eigen::MatrixXd& previous, const Eigen::MatrixXd& current,
                                      const Eigen::VectorXd& previous_energy, const Eigen::VectorXd& values) {
    const auto n = static_cast<std::size_t>(previous.cols());
    const Eigen::MatrixXd overlap = (previous.transpose() * current).cwiseAbs2();

    std::vector<std::tuple<double, std::size_t, std::size_t>> candidates;
    candidates.reserve(3 * n);
    for (std::size_t c = 0; c < n; ++c) {
        // three best partners of each curve are enough in practice
        std::array<std::pair<double, std::size_t>, 3> best{};
        for (auto& b : best) b = {-1.0, 0};
        for (std::size_t j = 0; j < n; ++j) {
            const double o = overlap(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j));
            if (o > best[2].first) {
                best[2] = {o, j};
                std::sort(best.begin(), best.end(), [](auto& a, auto& b) { return a.first > b.first; });
            }
        }
        for (auto& [o, j] : best)
            if (o > 0.0) candidates.emplace_back(o, c, j);
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });

    std::vector<std::size_t> order(n, n);
    std::vector<bool> taken(n, false);
    for (const auto& [o, c, j] : candidates) {
        if (order[c] != n || taken[j]) continue;
        order[c] = j;
        taken[j] = true;
    }
    // Leftovers pair up in energy order.
    std::vector<std::size_t> free_curves, free_pairs;
    for (std::size_t c = 0; c < n; ++c)
        if (order[c] == n) free_curves.push_back(c);
    for (std::size_t j = 0; j < n; ++j)
        if (!taken[j]) free_pairs.push_back(j);
    std::sort(free_curves.begin(), free_curves.end(), [&](std::size_t a, std::size_t b) {
        return previous_energy(static_cast<Eigen::Index>(a)) < previous_energy(static_cast<Eigen::Index>(b));
    });
    std::sort(free_pairs.begin(), free_pairs.end(), [&](std::size_t a, std::size_t b) {
        return values(static_cast<Eigen::Index>(a)) < values(static_cast<Eigen::Index>(b));
    });
    for (std::size_t k = 0; k < free_curves.size(); ++k) order[free_curves[k]] = free_pairs[k];
    return order;
}

}  // namespace

StarkMap stark_map(const StarkOperator& op, const std::vector<double>& fields, Execution execution) {
    if (fields.empty() || fields.front() != 0.0) throw DomainError("Stark fields must start at zero");
    for (std::size_t i = 1; i < fields.size(); ++i)
        if (!(fields[i] > fields[i - 1])) throw DomainError("Stark fields must increase");

    const auto n = static_cast<Eigen::Index>(op.dimension());
    const auto& states = op.basis().states;

    StarkMap map;
    map.fields_V_per_cm = fields;

    // Zero field: the basis states themselves, sorted by energy.
    std::vector<Eigen::Index> by_energy(static_cast<std::size_t>(n));
    std::iota(by_energy.begin(), by_energy.end(), 0);
    std::stable_sort(by_energy.begin(), by_energy.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return op.energies_ghz()(a) < op.energies_ghz()(b); });
    Eigen::MatrixXd tracked = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd tracked_energy(n);
    std::vector<double> row(static_cast<std::size_t>(n));
    for (Eigen::Index c = 0; c < n; ++c) {
        const Eigen::Index k = by_energy[static_cast<std::size_t>(c)];
        tracked(k, c) = 1.0;
        tracked_energy(c) = op.energies_ghz()(k);
        row[static_cast<std::size_t>(c)] = tracked_energy(c);
        map.labels.push_back(states[static_cast<std::size_t>(k)].label());
    }
    map.energies_ghz.push_back(row);

    int chunk = 1;
#ifdef _OPENMP
    if (execution == Execution::parallel) chunk = 2 * omp_get_max_threads();
#endif
    std::size_t next = 1;
    while (next < fields.size()) {
        const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(chunk), fields.size() - next);
        std::vector<Eigenpairs> block(count);
        std::vector<std::string> errors(count);
        if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
            for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
                try {
                    block[static_cast<std::size_t>(i)] = diagonalize(op, fields[next + static_cast<std::size_t>(i)]);
                } catch (const std::exception& e) {
                    errors[static_cast<std::size_t>(i)] = e.what();
                }
            }
        } else {
            for (std::size_t i = 0; i < count; ++i) {
                try {
                    block[i] = diagonalize(op, fields[next + i]);
                } catch (const std::exception& e) {
                    errors[i] = e.what();
                }
            }
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (!errors[i].empty()) throw NumericalError(errors[i]);
            const auto order = match_curves(tracked, block[i].vectors, tracked_energy, block[i].values);
            Eigen::MatrixXd next_tracked(n, n);
            for (Eigen::Index c = 0; c < n; ++c) {
                const auto j = static_cast<Eigen::Index>(order[static_cast<std::size_t>(c)]);
                next_tracked.col(c) = block[i].vectors.col(j);
                tracked_energy(c) = block[i].values(j);
                row[static_cast<std::size_t>(c)] = tracked_energy(c);
            }
            tracked.swap(next_tracked);
            map.energies_ghz.push_back(row);
        }
        next += count;
    }
    return map;
}

StarkMap stark_map(const StarkBasis& basis, const std::vector<double>& fields, Execution execution) {
    return stark_map(StarkOperator(basis, execution), fields, execution);
}

PolarizabilityResult polarizability(const RydbergState& s, double fit_window, double max_relative_residual) {
    if (!(fit_window > 0.0)) throw DomainError("fit window must be positive");
    if (s.L() > s.species().highest_tabulated_L())
        throw DomainError("polarizability needs a non-hydrogenic state");
    const int lo = std::max(1, s.n() - 3);
    const StarkBasis basis = make_stark_basis(s.species_ref(), s.mJ(), lo, s.n() + 3);
    const auto fields = linspace(0.0, fit_window, 11);
    const StarkMap map = stark_map(basis, fields);
    const auto curve = map.curve(map.curve_for(s.label()));

    std::vector<double> f2(fields.size()), shift(fields.size());
    for (std::size_t i = 0; i < fields.size(); ++i) {
        f2[i] = fields[i] * fields[i];
        shift[i] = (curve[i] - curve[0]) * 1e3;  // MHz
    }
    const auto c = fit_polynomial(f2, shift, 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < fields.size(); ++i) worst = std::max(worst, std::abs(c[0] + c[1] * f2[i] - shift[i]));
    const double total = std::abs(shift.back());
    PolarizabilityResult r{-2.0 * c[1], total > 0.0 ? worst / total : 0.0};
    if (!(r.relative_residual <= max_relative_residual)) {
        std::ostringstream msg;
        msg << "quadratic fit of " << s.label() << " over 0-" << fit_window << " V/cm has relative residual "
            << r.relative_residual;
        throw FitQualityError(msg.str());
    }
    return r;
}

GapTrace sfi_gap_trace(const RydbergState& a, const RydbergState& b, double field, std::size_t steps) {
    if (a.species().name() != b.species().name()) throw DomainError("states of different species");
    if (a.mJ() != b.mJ()) throw DomainError("states must share mJ");
    if (!(field >= 0.0) || steps < 2) throw DomainError("bad field ramp");
    GapTrace t;
    t.fields_V_per_cm = linspace(0.0, field, steps);
    if (a == b) {
        t.gaps_ghz.assign(steps, 0.0);
        return t;
    }
    if (field == 0.0) {
        t.fields_V_per_cm = {0.0};
        t.gaps_ghz = {(state_energy_hz(b) - state_energy_hz(a)) / 1e9};
        return t;
    }
    const int lo = std::max(1, std::min(a.n(), b.n()) - 3);
    const int hi = std::max(a.n(), b.n()) + 3;
    const StarkMap map = stark_map(make_stark_basis(a.species_ref(), a.mJ(), lo, hi), t.fields_V_per_cm);
    const auto ca = map.curve(map.curve_for(a.label()));
    const auto cb = map.curve(map.curve_for(b.label()));
    for (std::size_t i = 0; i < steps; ++i) t.gaps_ghz.push_back(cb[i] - ca[i]);
    return t;
}

double sfi_crossing_check(const RydbergState& a, const RydbergState& b, double field) {
    const auto t = sfi_gap_trace(a, b, field);
    return t.gaps_ghz.back();
}

}  // namespace rydberg
