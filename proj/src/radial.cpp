#include "rydberg/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "rydberg/errors.hpp"

namespace rydberg {

RadialGrid RadialGrid::for_state(double n_eff, double step) {
    RadialGrid g;
    g.step = step;
    g.r_max = g.outer_radius(n_eff);
    return g;
}

double RadialGrid::outer_radius(double n_eff) const {
    if (r_max > 0.0) return r_max;
    return std::max(2.5 * n_eff * (n_eff + 15.0), 3.0 * (n_eff + 4.0) * (n_eff + 4.0));
}

RadialWavefunction::RadialWavefunction(double n_eff, int L, double step, std::size_t first,
                                       std::vector<double> w)
    : n_eff_(n_eff), L_(L), step_(step), first_(first), w_(std::move(w)) {}

double RadialWavefunction::u(std::size_t k) const { return std::sqrt(x(k)) * w_[k]; }

std::vector<double> RadialWavefunction::r_values() const {
    std::vector<double> out(w_.size());
    for (std::size_t k = 0; k < w_.size(); ++k) out[k] = r(k);
    return out;
}

std::vector<double> RadialWavefunction::u_values() const {
    std::vector<double> out(w_.size());
    for (std::size_t k = 0; k < w_.size(); ++k) out[k] = u(k);
    return out;
}

int RadialWavefunction::node_count() const {
    double peak = 0.0;
    for (double v : w_) peak = std::max(peak, std::abs(v));
    const double floor = 1e-12 * peak;
    int nodes = 0;
    double last = 0.0;
    for (double v : w_) {
        if (std::abs(v) <= floor) continue;
        if (last != 0.0 && (v > 0) != (last > 0)) ++nodes;
        last = v;
    }
    return nodes;
}

double RadialWavefunction::norm() const {
    double s = 0.0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        const double xx = x(k);
        s += 2.0 * xx * xx * w_[k] * w_[k];
    }
    return s * step_;
}

double RadialWavefunction::expectation_r(int power) const {
    double s = 0.0;
    for (std::size_t k = 0; k < w_.size(); ++k) {
        const double xx = x(k);
        s += 2.0 * xx * xx * std::pow(xx * xx, power) * w_[k] * w_[k];
    }
    return s * step_;
}

RadialWavefunction integrate_radial(double n_eff, int L, const RadialGrid& grid) {
    if (!(n_eff > 0.0)) throw DomainError("n_eff must be positive");
    if (L < 0) throw DomainError("L must be non-negative");
    if (!(grid.step > 0.0) || !(grid.r_min > 0.0)) throw DomainError("bad radial grid");

    const double h = grid.step;
    const double E = -0.5 / (n_eff * n_eff);
    const double r_max = grid.outer_radius(n_eff);
    if (r_max <= grid.r_min) throw DomainError("radial grid is empty");
    const auto imax = static_cast<std::size_t>(std::ceil(std::sqrt(r_max) / h));
    const auto imin = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(grid.r_min) / h));
    if (imax < imin + 4) throw DomainError("radial grid too coarse");

    // w'' = g w with u = sqrt(x) w, r = x^2
    const double centrifugal = 4.0 * L * (L + 1.0) + 0.75;
    auto g = [&](std::size_t i) {
        const double x = static_cast<double>(i) * h;
        return centrifugal / (x * x) - 8.0 - 8.0 * E * x * x;
    };
    auto f = [&](std::size_t i) { return 1.0 - h * h * g(i) / 12.0; };

    std::vector<double> w(imax + 1, 0.0);
    w[imax] = 1e-10;
    w[imax - 1] = 1e-10 * (1.0 + h * std::sqrt(std::max(g(imax), 0.0)));

    const double r_inner =
        L > 0 ? n_eff * n_eff * (1.0 - std::sqrt(std::max(0.0, 1.0 - L * (L + 1.0) / (n_eff * n_eff)))) : 0.0;

    std::size_t stop = imin;
    double f_next = f(imax), f_here = f(imax - 1);
    for (std::size_t i = imax - 1; i > imin; --i) {
        const double f_prev = f(i - 1);
        w[i - 1] = ((12.0 - 10.0 * f_here) * w[i] - f_next * w[i + 1]) / f_prev;
        if (std::abs(w[i - 1]) > 1e100)
            for (std::size_t k = i - 1; k <= imax; ++k) w[k] *= 1e-100;
        const double x = static_cast<double>(i - 1) * h;
        if (x * x < r_inner && std::abs(w[i - 1]) > std::abs(w[i])) {
            stop = i;
            break;
        }
        f_next = f_here;
        f_here = f_prev;
    }

    auto u_at = [&](std::size_t i) { return std::sqrt(static_cast<double>(i) * h) * w[i]; };
    double peak = 0.0;
    for (std::size_t i = std::max(stop, imin); i <= imax; ++i) peak = std::max(peak, std::abs(u_at(i)));
    // Innermost sign change at or beyond `from`, snapped to the grid point nearer zero.
    auto innermost_node = [&](std::size_t from) {
        for (std::size_t i = from; i < imax; ++i)
            if ((w[i] > 0) != (w[i + 1] > 0)) return std::abs(u_at(i)) < std::abs(u_at(i + 1)) ? i : i + 1;
        return from;
    };

    std::size_t cut = stop > imin ? stop : imin;
    if (std::abs(u_at(cut)) > 1e-3 * peak) cut = innermost_node(cut);
    std::vector<double> kept(w.begin() + static_cast<std::ptrdiff_t>(cut), w.end());
    double norm = 0.0;
    for (std::size_t k = 0; k < kept.size(); ++k) {
        const double x = static_cast<double>(cut + k) * h;
        norm += 2.0 * x * x * kept[k] * kept[k];
    }
    norm *= h;
    if (!std::isfinite(norm) || !(norm > 0.0))
        throw IntegrationError("radial normalisation failed for n_eff=" + std::to_string(n_eff) +
                               " L=" + std::to_string(L));
    const double scale = 1.0 / std::sqrt(norm);
    for (double& v : kept) v *= scale;

    RadialWavefunction wf(n_eff, L, h, cut, std::move(kept));
    const double expected = n_eff - L - 1.0;
    if (std::abs(wf.node_count() - expected) > 1.5)
        throw IntegrationError("node count " + std::to_string(wf.node_count()) + " inconsistent with n_eff=" +
                               std::to_string(n_eff) + " L=" + std::to_string(L));
    return wf;
}

RadialWavefunction integrate_radial(const RydbergState& s, const RadialGrid& grid) {
    return integrate_radial(effective_quantum_number(s), s.L(), grid);
}

RadialWavefunction integrate_radial(const RydbergState& s) {
    const double neff = effective_quantum_number(s);
    return integrate_radial(neff, s.L(), RadialGrid::for_state(neff));
}

double points_per_wavelength(double n_eff, int L, const RadialGrid& grid) {
    const double h = grid.step;
    const double E = -0.5 / (n_eff * n_eff);
    const double r_max = grid.outer_radius(n_eff);
    const auto imax = static_cast<std::size_t>(std::ceil(std::sqrt(r_max) / h));
    const auto imin = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(grid.r_min) / h));
    double k_max = 0.0;
    for (std::size_t i = imin; i <= imax; ++i) {
        const double x = static_cast<double>(i) * h;
        const double g = (4.0 * L * (L + 1.0) + 0.75) / (x * x) - 8.0 - 8.0 * E * x * x;
        if (g < 0.0) k_max = std::max(k_max, std::sqrt(-g));
    }
    if (k_max == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * std::numbers::pi / (k_max * h);
}

namespace {

double overlap_with_power(const RadialWavefunction& a, const RadialWavefunction& b, int x_power) {
    if (a.step() != b.step()) throw DomainError("wavefunctions on different grids");
    const std::size_t lo = std::max(a.first_index(), b.first_index());
    const std::size_t hi = std::min(a.last_index(), b.last_index());
    const double h = a.step();
    double s = 0.0;
    for (std::size_t i = lo; i <= hi && lo <= hi; ++i) {
        const double x = static_cast<double>(i) * h;
        const double x2 = x * x;
        const double weight = x_power == 4 ? x2 * x2 : x2;
        s += weight * a.w(i - a.first_index()) * b.w(i - b.first_index());
    }
    return 2.0 * s * h;
}

}  // namespace

double radial_overlap_r(const RadialWavefunction& a, const RadialWavefunction& b) {
    if (a.step() != b.step()) {
        const RadialWavefunction b2 = integrate_radial(b.n_eff(), b.L(), RadialGrid::for_state(b.n_eff(), a.step()));
        return overlap_with_power(a, b2, 4);
    }
    return overlap_with_power(a, b, 4);
}

double radial_overlap(const RadialWavefunction& a, const RadialWavefunction& b) {
    if (a.step() != b.step()) {
        const RadialWavefunction b2 = integrate_radial(b.n_eff(), b.L(), RadialGrid::for_state(b.n_eff(), a.step()));
        return overlap_with_power(a, b2, 2);
    }
    return overlap_with_power(a, b, 2);
}

double radial_matrix_element(const RydbergState& a, const RydbergState& b) {
    if (std::abs(a.L() - b.L()) != 1) throw DomainError("radial dipole element needs |L1 - L2| = 1");
    return radial_overlap_r(integrate_radial(a), integrate_radial(b));
}

struct WavefunctionCache::Impl {
    std::mutex mutex;
    std::map<std::pair<double, int>, WavefunctionRef> entries;
};

std::shared_ptr<WavefunctionCache::Impl> WavefunctionCache::make_impl() {
    return std::make_shared<Impl>();
}

WavefunctionRef WavefunctionCache::get(double n_eff, int L) {
    const auto key = std::make_pair(n_eff, L);
    {
        std::lock_guard lock(impl_->mutex);
        if (auto it = impl_->entries.find(key); it != impl_->entries.end()) return it->second;
    }
    auto wf = std::make_shared<const RadialWavefunction>(integrate_radial(n_eff, L, RadialGrid::for_state(n_eff, step_)));
    std::lock_guard lock(impl_->mutex);
    return impl_->entries.emplace(key, std::move(wf)).first->second;
}

WavefunctionRef WavefunctionCache::get(const RydbergState& s) {
    return get(effective_quantum_number(s), s.L());
}

double WavefunctionCache::matrix_element(const RydbergState& a, const RydbergState& b) {
    if (std::abs(a.L() - b.L()) != 1) throw DomainError("radial dipole element needs |L1 - L2| = 1");
    return radial_overlap_r(*get(a), *get(b));
}

std::size_t WavefunctionCache::size() const {
    std::lock_guard lock(impl_->mutex);
    return impl_->entries.size();
}

}  // namespace rydberg
