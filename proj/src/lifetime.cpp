#include "rydberg/lifetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rydberg/angular.hpp"
#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"

namespace rydberg {

double einstein_a(double omega, double dipole_squared_si) {
    using namespace constants;
    return std::pow(omega, 3) * dipole_squared_si /
           (3.0 * pi * vacuum_permittivity * hbar * std::pow(speed_of_light, 3));
}

double photon_occupation(double frequency_hz, double temperature_K) {
    if (temperature_K < 0.0) throw DomainError("temperature must be non-negative");
    if (temperature_K == 0.0) return 0.0;
    const double x = constants::planck * std::abs(frequency_hz) / (constants::boltzmann * temperature_K);
    return 1.0 / std::expm1(x);
}

std::vector<DecayChannel> decay_channels(const RydbergState& s, double temperature_K, int window,
                                         WavefunctionCache& cache, Execution execution) {
    if (temperature_K < 0.0) throw DomainError("temperature must be non-negative");
    const auto& sp = s.species();
    const double e_self = state_energy_hz(s);

    std::vector<DecayChannel> channels;
    for (int Lp : {s.L() - 1, s.L() + 1}) {
        if (Lp < 0) continue;
        for (int tjp : {2 * Lp - 1, 2 * Lp + 1}) {
            if (tjp < 1 || std::abs(tjp - s.J().twice) > 2) continue;
            if (!sp.has_defect(Lp, HalfInteger(tjp))) continue;
            for (int np = std::max(sp.lowest_n(Lp), Lp + 1); np <= s.n() + window; ++np) {
                RydbergState partner(s.species_ref(), np, Lp, HalfInteger(tjp));
                const double f = state_energy_hz(partner) - e_self;
                if (f == 0.0) continue;
                // Upper levels only matter through thermal absorption within the window.
                if (f > 0.0 && temperature_K == 0.0) continue;
                channels.push_back({partner, f, 0.0, 0.0});
            }
        }
    }

    const double d_unit2 = constants::atomic_dipole * constants::atomic_dipole;
    const auto count = static_cast<std::ptrdiff_t>(channels.size());
    auto fill = [&](std::ptrdiff_t i) {
        auto& c = channels[static_cast<std::size_t>(i)];
        const double R = cache.matrix_element(s, c.partner);
        const double strength = line_strength_factor(s.L(), s.J(), c.partner.L(), c.partner.J());
        const double omega = 2.0 * constants::pi * std::abs(c.frequency_hz);
        const double a = einstein_a(omega, R * R * strength * d_unit2);
        const double nbar = photon_occupation(c.frequency_hz, temperature_K);
        c.spontaneous_rate = c.frequency_hz < 0.0 ? a : 0.0;
        c.bbr_rate = a * nbar;
    };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t i = 0; i < count; ++i) fill(i);
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) fill(i);
    }
    return channels;
}

namespace {

struct Totals {
    double spontaneous = 0.0;
    double bbr = 0.0;
};

Totals totals(const std::vector<DecayChannel>& channels) {
    CompensatedSum a, b;
    for (const auto& c : channels) {
        a.add(c.spontaneous_rate);
        b.add(c.bbr_rate);
    }
    return {a.value(), b.value()};
}

}  // namespace

LifetimeResult lifetime(const RydbergState& s, double temperature_K, const LifetimeOptions& options) {
    WavefunctionCache cache;
    return lifetime(s, temperature_K, options, cache);
}

LifetimeResult lifetime(const RydbergState& s, double temperature_K, const LifetimeOptions& options,
                        WavefunctionCache& cache) {
    if (options.window < 0) throw DomainError("summation window must be non-negative");
    auto channels = decay_channels(s, temperature_K, options.window, cache, options.execution);
    const Totals t = totals(channels);
    if (!(t.spontaneous > 0.0)) throw NumericalError("no radiative decay channel for " + s.label());

    LifetimeResult r{s, temperature_K, 1.0 / t.spontaneous, 1.0 / (t.spontaneous + t.bbr), t.spontaneous, t.bbr,
                     {}, std::nullopt};

    std::sort(channels.begin(), channels.end(),
              [](const DecayChannel& a, const DecayChannel& b) { return a.spontaneous_rate > b.spontaneous_rate; });
    for (const auto& c : channels) {
        if (c.spontaneous_rate <= 0.0 || r.dominant_decay_channels.size() == 5) break;
        r.dominant_decay_channels.push_back(c);
    }

    if (options.check_convergence && temperature_K > 0.0) {
        const auto wider = decay_channels(s, temperature_K, options.window + 5, cache, options.execution);
        const Totals w = totals(wider);
        const double before = t.spontaneous + t.bbr;
        const double after = w.spontaneous + w.bbr;
        const double change = std::abs(after - before) / before;
        if (change > options.warning_threshold) {
            std::ostringstream msg;
            msg << "total decay rate of " << s.label() << " changes by " << 100.0 * change
                << "% when the window grows from " << options.window << " to " << options.window + 5;
            r.accuracy_warning = msg.str();
        }
    }
    return r;
}

}  // namespace rydberg
