#include "rydberg/beam.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/pair.hpp"
#include "rydberg/species.hpp"
#include "rydberg/state.hpp"

namespace rydberg {

namespace {

constexpr double kGammaRatio = 1.329340388179137;  // Gamma(5/2) / Gamma(2)
constexpr std::size_t kBlock = 256;

struct BeamTransition {
    RydbergState lower, mid, upper;
};

BeamTransition beam_states(TransitionKind kind) {
    auto na = species::sodium();
    RydbergState s = parse_state(na, "37S1/2");
    RydbergState p = parse_state(na, "37P1/2");
    RydbergState s2 = parse_state(na, "38S1/2");
    if (kind == TransitionKind::one_photon) return {s, p, p};
    return {s, p, s2};
}

double inversion_field(TransitionKind kind, double tau) {
    const auto t = beam_states(kind);
    const double d1 = transition_dipole_z(t.lower, t.mid);
    if (kind == TransitionKind::one_photon) return field_for_rotation(kind, constants::pi, tau, d1);
    const double d2 = transition_dipole_z(t.mid, t.upper);
    const double Delta = two_photon_intermediate_detuning(t.lower, t.mid, t.upper);
    return field_for_rotation(kind, constants::pi, tau, d1, d2, Delta);
}

// Exact propagator of H = (Omega sigma_x - Delta sigma_z) / 2 over dt.
void su2_step(std::complex<double>& c1, std::complex<double>& c2, double omega, double delta, double dt) {
    const double w = std::hypot(omega, delta);
    if (w == 0.0) return;
    const double th = 0.5 * w * dt;
    const double c = std::cos(th);
    const double s = std::sin(th) / w;
    const std::complex<double> i(0.0, 1.0);
    const std::complex<double> n1 = (c + i * s * delta) * c1 - i * s * omega * c2;
    const std::complex<double> n2 = -i * s * omega * c1 + (c - i * s * delta) * c2;
    c1 = n1;
    c2 = n2;
}

struct Partial {
    std::vector<CompensatedSum> sum, sum_sq;
    std::size_t rejected = 0;
};

}  // namespace

double maxwell_beam_mean_speed(double temperature_K, double mass_kg) {
    if (!(temperature_K > 0.0) || !(mass_kg > 0.0)) throw DomainError("temperature and mass must be positive");
    return 0.75 * std::sqrt(constants::pi) * std::sqrt(2.0 * constants::boltzmann * temperature_K / mass_kg);
}

bool mean_speed_consistent(const BeamConfig& config, double tolerance) {
    if (config.mean_speed_override) return true;
    const double v = maxwell_beam_mean_speed(config.temperature_K, config.mass_kg);
    return std::abs(config.mean_speed - v) <= tolerance * v;
}

double doppler_width(double mean_speed, double frequency_hz) {
    return mean_speed / constants::speed_of_light * frequency_hz;
}

BeamConfig default_beam_config(TransitionKind kind) {
    BeamConfig c;
    const auto t = beam_states(kind);
    c.mass_kg = species::sodium()->mass_kg();
    if (kind == TransitionKind::one_photon) {
        c.transition_frequency_hz = transition_frequency_hz(t.lower, t.upper);
    } else {
        c.transition_frequency_hz = 0.5 * transition_frequency_hz(t.lower, t.upper);
        const double e1 = inversion_field(TransitionKind::one_photon, c.interaction_time);
        const double e2 = inversion_field(TransitionKind::two_photon, c.interaction_time);
        c.field_fluctuation_rms = 0.10 * e1 / e2;
    }
    return c;
}

DriveParameters default_beam_drive(TransitionKind kind) {
    const BeamConfig c = default_beam_config(kind);
    const auto t = beam_states(kind);
    const double d1 = transition_dipole_z(t.lower, t.mid);
    const double E = inversion_field(kind, c.interaction_time);
    if (kind == TransitionKind::one_photon) return drive_from_field(kind, E, d1, 0.0, 0.0, c.interaction_time);
    const double d2 = transition_dipole_z(t.mid, t.upper);
    const double Delta = two_photon_intermediate_detuning(t.lower, t.mid, t.upper);
    return drive_from_field(kind, E, d1, d2, Delta, c.interaction_time);
}

AtomSample sample_atom(const BeamConfig& config, std::mt19937_64& rng) {
    AtomSample a;
    if (config.mean_speed > 0.0) {
        std::gamma_distribution<double> g(2.0, 1.0);
        a.speed = config.mean_speed * std::sqrt(g(rng)) / kGammaRatio;
    }
    if (config.excitation_length > 0.0) {
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        a.x0 = u(rng) * config.excitation_length;
    }
    std::uniform_int_distribution<int> pick(0, 3);
    const int u = pick(rng);
    a.direction = (u & 1) ? 1 : -1;
    a.counter_propagating = (u & 2) != 0;
    if (config.field_fluctuation_rms > 0.0) {
        std::normal_distribution<double> n(0.0, 1.0);
        a.amplitude = 1.0 + config.field_fluctuation_rms * n(rng);
    }
    return a;
}

double atom_transfer_probability(const BeamConfig& config, const DriveParameters& drive, const AtomSample& atom,
                                 double detuning) {
    const double tau = drive.tau > 0.0 ? drive.tau : config.interaction_time;
    const double k = 2.0 * constants::pi * config.transition_frequency_hz / constants::speed_of_light;
    const bool two = drive.kind == TransitionKind::two_photon;
    const double order = two ? 2.0 : 1.0;
    const bool envelope = config.wave_model == StandingWaveModel::envelope;

    auto couplings = [&](double t, double& omega, double& delta) {
        double s = 1.0;
        double doppler = order * k * atom.speed;
        if (config.standing_wave) {
            s = std::cos(k * (atom.x0 + atom.speed * t));
            if (envelope) {
                s = std::abs(s);
                doppler *= (two && atom.counter_propagating) ? 0.0 : atom.direction;
            } else {
                doppler = 0.0;
            }
        }
        if (two) {
            const double f = atom.amplitude * atom.amplitude * s * s;
            omega = 2.0 * drive.rabi * f;
            delta = 2.0 * (detuning - drive.light_shift * f) - doppler;
        } else {
            omega = drive.rabi * atom.amplitude * s;
            delta = detuning - doppler;
        }
    };

    std::complex<double> c1(1.0, 0.0), c2(0.0, 0.0);
    const bool constant = !config.standing_wave || atom.speed == 0.0;
    if (constant) {
        double omega = 0.0, delta = 0.0;
        couplings(0.0, omega, delta);
        su2_step(c1, c2, omega, delta, tau);
    } else {
        const std::size_t nt = std::max<std::size_t>(1, config.time_steps);
        const double dt = tau / static_cast<double>(nt);
        for (std::size_t i = 0; i < nt; ++i) {
            double omega = 0.0, delta = 0.0;
            couplings((static_cast<double>(i) + 0.5) * dt, omega, delta);
            su2_step(c1, c2, omega, delta, dt);
        }
    }
    return std::norm(c2);
}

DriveParameters scale_field(const DriveParameters& drive, double scale) {
    DriveParameters d = drive;
    if (drive.kind == TransitionKind::one_photon) {
        d.rabi *= scale;
    } else {
        d.rabi *= scale * scale;
        d.light_shift *= scale * scale;
    }
    return d;
}

BeamResult beam_monte_carlo(const BeamConfig& config, const DriveParameters& drive,
                            const std::vector<double>& detunings_hz, std::size_t samples, std::uint64_t seed,
                            Execution execution) {
    if (samples < 1000) throw DomainError("at least 1000 Monte Carlo samples required");
    if (!mean_speed_consistent(config)) throw ConfigurationError("mean speed inconsistent with beam temperature");
    if (detunings_hz.empty()) throw DomainError("empty detuning grid");
    const std::size_t nd = detunings_hz.size();
    const std::size_t nblocks = (samples + kBlock - 1) / kBlock;
    std::vector<Partial> partials(nblocks);

    auto run_block = [&](std::size_t b) {
        Partial& part = partials[b];
        part.sum.assign(nd, CompensatedSum{});
        part.sum_sq.assign(nd, CompensatedSum{});
        std::vector<double> p(nd);
        const std::size_t end = std::min(samples, (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) {
            std::mt19937_64 rng(substream_seed(seed, i));
            for (;;) {
                const AtomSample atom = sample_atom(config, rng);
                bool ok = true;
                for (std::size_t j = 0; j < nd; ++j) {
                    p[j] = atom_transfer_probability(config, drive, atom, 2.0 * constants::pi * detunings_hz[j]);
                    if (!std::isfinite(p[j])) {
                        ok = false;
                        break;
                    }
                }
                if (ok) break;
                ++part.rejected;
            }
            for (std::size_t j = 0; j < nd; ++j) {
                part.sum[j].add(p[j]);
                part.sum_sq[j].add(p[j] * p[j]);
            }
        }
    };

    const auto nb = static_cast<std::ptrdiff_t>(nblocks);
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic)
        for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
    } else {
        for (std::ptrdiff_t b = 0; b < nb; ++b) run_block(static_cast<std::size_t>(b));
    }

    BeamResult r;
    r.spectrum.detunings_hz = detunings_hz;
    r.spectrum.labels = {"1", "2"};
    r.spectrum.curves.assign(2, std::vector<double>(nd));
    r.standard_error.resize(nd);
    r.diagnostics.samples = samples;
    const double n = static_cast<double>(samples);
    for (std::size_t j = 0; j < nd; ++j) {
        CompensatedSum s, s2;
        for (const auto& part : partials) {
            s.add(part.sum[j].value());
            s2.add(part.sum_sq[j].value());
        }
        const double mean = s.value() / n;
        const double var = std::max(0.0, (s2.value() / n - mean * mean) * n / (n - 1.0));
        r.spectrum.curves[1][j] = mean;
        r.spectrum.curves[0][j] = 1.0 - mean;
        r.standard_error[j] = std::sqrt(var / n);
    }
    for (const auto& part : partials) r.diagnostics.rejected += part.rejected;
    return r;
}

DriveParameters tune_drive_for_inversion(const BeamConfig& config, const DriveParameters& drive, std::size_t samples,
                                         std::uint64_t seed) {
    const std::vector<double> zero{0.0};
    auto transfer = [&](double scale) {
        return beam_monte_carlo(config, scale_field(drive, scale), zero, samples, seed).spectrum.curves[1][0];
    };
    double best_scale = 1.0;
    double best = -1.0;
    for (double s : linspace(0.5, 2.5, 41)) {
        const double v = transfer(s);
        if (v > best) {
            best = v;
            best_scale = s;
        }
    }
    const double centre = best_scale;
    for (double s : linspace(centre - 0.025, centre + 0.025, 11)) {
        const double v = transfer(s);
        if (v > best) {
            best = v;
            best_scale = s;
        }
    }
    return scale_field(drive, best_scale);
}

std::vector<BeamEvent> simulate_beam_events(const BeamConfig& config, const DriveParameters& drive,
                                            const std::vector<double>& detunings_hz, const ShotSettings& shots,
                                            std::uint64_t seed) {
    if (shots.fixed_atoms && *shots.fixed_atoms < 0) throw DomainError("atom count must be non-negative");
    if (!mean_speed_consistent(config)) throw ConfigurationError("mean speed inconsistent with beam temperature");
    if (!shots.fixed_atoms && !(shots.mean_atoms >= 0.0)) throw DomainError("mean atom number must be non-negative");
    const std::size_t per = shots.shots_per_detuning;
    std::vector<BeamEvent> events(detunings_hz.size() * per);
    const auto total = static_cast<std::ptrdiff_t>(events.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t e = 0; e < total; ++e) {
        const auto idx = static_cast<std::size_t>(e);
        std::mt19937_64 rng(substream_seed(seed, idx));
        BeamEvent& ev = events[idx];
        ev.detuning_index = idx / per;
        int atoms = 0;
        if (shots.fixed_atoms) {
            atoms = *shots.fixed_atoms;
        } else if (shots.mean_atoms > 0.0) {
            std::poisson_distribution<int> pois(shots.mean_atoms);
            atoms = pois(rng);
        }
        const double delta = 2.0 * constants::pi * detunings_hz[ev.detuning_index];
        int lower = 0, upper = 0;
        ev.final_states.reserve(static_cast<std::size_t>(atoms));
        for (int a = 0; a < atoms; ++a) {
            const AtomSample atom = sample_atom(config, rng);
            double p = atom_transfer_probability(config, drive, atom, delta);
            if (!std::isfinite(p)) p = 0.0;
            std::bernoulli_distribution up(std::clamp(p, 0.0, 1.0));
            const int state = up(rng) ? 2 : 1;
            ev.final_states.push_back(state);
            (state == 2 ? upper : lower)++;
        }
        ev.amplitude_lower_mV = draw_amplitude(lower, shots.detection, rng);
        ev.amplitude_upper_mV = draw_amplitude(upper, shots.detection, rng);
        ev.inferred_lower = classify_amplitude(ev.amplitude_lower_mV, shots.detection);
        ev.inferred_upper = classify_amplitude(ev.amplitude_upper_mV, shots.detection);
        ev.reliable = ev.inferred_lower <= shots.detection.max_resolvable &&
                      ev.inferred_upper <= shots.detection.max_resolvable;
    }
    return events;
}

SortedSpectrum sorted_multi_atom_spectra(const std::vector<BeamEvent>& events,
                                         const std::vector<double>& detunings_hz, int N,
                                         const std::string& pattern_filter) {
    if (N < 1) throw DomainError("atom number must be at least 1");
    const auto n = static_cast<std::size_t>(N);
    std::vector<std::size_t> ks;
    for (std::size_t k = 0; k <= n; ++k)
        if (pattern_filter.empty() || multiset_label(n, k) == pattern_filter) ks.push_back(k);
    if (ks.empty()) throw DomainError("pattern '" + pattern_filter + "' does not match N = " + std::to_string(N));

    const std::size_t nd = detunings_hz.size();
    std::vector<std::vector<std::size_t>> counts(n + 1, std::vector<std::size_t>(nd, 0));
    SortedSpectrum out;
    out.selected.assign(nd, 0);
    for (const auto& e : events) {
        if (e.detuning_index >= nd || !e.reliable) continue;
        if (e.inferred_lower + e.inferred_upper != N) continue;
        ++out.selected[e.detuning_index];
        ++counts[static_cast<std::size_t>(e.inferred_upper)][e.detuning_index];
    }
    out.spectrum.detunings_hz = detunings_hz;
    out.spectrum.atoms = n;
    for (std::size_t k : ks) {
        out.spectrum.labels.push_back(multiset_label(n, k));
        std::vector<double> c(nd, std::numeric_limits<double>::quiet_NaN());
        for (std::size_t j = 0; j < nd; ++j)
            if (out.selected[j] > 0)
                c[j] = static_cast<double>(counts[k][j]) / static_cast<double>(out.selected[j]);
        out.spectrum.curves.push_back(std::move(c));
    }
    return out;
}

}  // namespace rydberg
