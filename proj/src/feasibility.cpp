#include "rydberg/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <locale>
#include <sstream>

#include "rydberg/angular.hpp"
#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/lifetime.hpp"
#include "rydberg/pair.hpp"
#include "rydberg/scaling.hpp"
#include "rydberg/species.hpp"

namespace rydberg {

namespace {

constexpr double kRelTol = 1e-9;
constexpr double kMinSpacing = 5e-6;
constexpr double kMinPulseRatio = 10.0;
constexpr double kExcitationArea = 1.5 * constants::pi;

struct QubitStates {
    RydbergState s, p;
};

QubitStates qubit_states(const ExperimentConfig& c) {
    return {RydbergState(c.species, c.n_s, 0, HalfInteger{1}, HalfInteger{1}),
            RydbergState(c.species, c.n_p, 1, HalfInteger{1}, HalfInteger{1})};
}

FeasibilityEntry make_entry(std::string name, std::string unit, int item, std::string formula) {
    FeasibilityEntry e;
    e.name = std::move(name);
    e.unit = std::move(unit);
    e.summary_item = item;
    e.formula = std::move(formula);
    return e;
}

template <class F>
FeasibilityEntry guarded(FeasibilityEntry e, F&& fill) {
    try {
        fill(e);
    } catch (const std::exception& ex) {
        e.verdict = Verdict::fail;
        e.value = std::nan("");
        e.note = ex.what();
    }
    return e;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os << std::setprecision(4) << v;
    return os.str();
}

}  // namespace

ExperimentConfig recommended_config() {
    ExperimentConfig c;
    c.species = species::sodium();
    return c;
}

ExperimentConfig fast_gate_config() {
    ExperimentConfig c = recommended_config();
    c.n_s = 50;
    c.n_p = 50;
    c.pulse_duration_s = 5e-9;
    c.gate_time_s = 50e-9;
    return c;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        case Verdict::warning: return "warning";
    }
    return "fail";
}

bool FeasibilityReport::all_pass() const {
    return std::all_of(entries.begin(), entries.end(), [](const auto& e) { return e.verdict == Verdict::pass; });
}

const FeasibilityEntry& FeasibilityReport::entry(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return e;
    throw DomainError("no feasibility entry named '" + name + "'");
}

PulseIntensity pulse_intensity(const RydbergState& lower, const RydbergState& upper, double area, double duration_s,
                               double spot_diameter_m) {
    if (!(duration_s > 0.0)) throw DomainError("pulse duration must be positive");
    if (!(spot_diameter_m > 0.0)) throw DomainError("spot diameter must be positive");
    const int q = (upper.mJ().twice - lower.mJ().twice) / 2;
    if (std::abs(q) > 1) throw DomainError("|delta mJ| > 1 is not dipole allowed");
    const double d_au = dipole_matrix_element(upper, lower, q);
    PulseIntensity r;
    r.dipole_si = std::abs(d_au) * constants::atomic_dipole;
    if (r.dipole_si == 0.0) throw DomainError("forbidden transition " + lower.label() + " -> " + upper.label());
    r.field_V_per_m = area * constants::hbar / (r.dipole_si * duration_s);
    const double I = 0.5 * constants::vacuum_permittivity * constants::speed_of_light * r.field_V_per_m * r.field_V_per_m;
    r.intensity_W_per_cm2 = I * 1e-4;
    r.power_W = I * constants::pi * 0.25 * spot_diameter_m * spot_diameter_m;
    return r;
}

double zeeman_requirement(double target_mhz, const RydbergState& s) {
    if (target_mhz < 0.0) throw DomainError("target splitting must be non-negative");
    return target_mhz / zeeman_splitting_rate(s);
}

BbrVerdict bbr_verdict(const std::vector<RydbergState>& states, double gate_time_s, double temperature_K) {
    if (states.empty()) throw DomainError("no states given");
    if (!(gate_time_s > 0.0)) throw DomainError("gate time must be positive");
    BbrVerdict v;
    v.min_lifetime_s = std::numeric_limits<double>::infinity();
    LifetimeOptions opts;
    opts.check_convergence = false;
    for (const auto& s : states)
        v.min_lifetime_s = std::min(v.min_lifetime_s, lifetime(s, temperature_K, opts).effective_lifetime);
    v.margin = kBbrLifetimeFraction * v.min_lifetime_s / gate_time_s;
    v.pass = v.margin >= 1.0;
    return v;
}

FeasibilityReport feasibility_report(const ExperimentConfig& c) {
    FeasibilityReport r;
    r.config = c;
    auto states = [&] {
        if (!c.species) throw DomainError("species not set");
        return qubit_states(c);
    };
    auto vdd = [&] {
        const auto q = states();
        return dipole_dipole_shift(q.s, q.p, c.R_m);
    };

    r.entries.push_back(guarded(make_entry("spacing", "um", 1, "R >= 5 um for optical access"), [&](auto& e) {
        e.value = c.R_m * 1e6;
        e.threshold = kMinSpacing * 1e6;
        e.requirement = ">= " + fmt(e.threshold);
        e.verdict = c.R_m >= kMinSpacing * (1.0 - kRelTol) ? Verdict::pass : Verdict::warning;
    }));

    r.entries.push_back(guarded(make_entry("collision_bound", "n", 2, "n_max = sqrt(R / (15 a0))"), [&](auto& e) {
        if (!(c.R_m > 0.0)) throw DomainError("spacing must be positive");
        e.value = std::max(c.n_s, c.n_p);
        e.threshold = max_principal_quantum_number(c.R_m, 0);
        e.requirement = "<= " + fmt(e.threshold);
        e.verdict = e.value <= e.threshold ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("interaction_time", "ns", 3, "T = 1 / (2 V_dd)"), [&](auto& e) {
        const double V = vdd();
        e.value = interaction_time(V) * 1e9;
        e.threshold = c.gate_time_s * 1e9;
        e.requirement = "<= " + fmt(e.threshold);
        e.note = "V_dd = " + fmt(V * 1e-6) + " MHz";
        e.verdict = e.value <= e.threshold * (1.0 + kRelTol) ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("pulse_ratio", "", 3, "gate time / pulse duration"), [&](auto& e) {
        if (!(c.pulse_duration_s > 0.0)) throw DomainError("pulse duration must be positive");
        e.value = c.gate_time_s / c.pulse_duration_s;
        e.threshold = kMinPulseRatio;
        e.requirement = ">= " + fmt(e.threshold);
        e.verdict = e.value >= e.threshold * (1.0 - kRelTol) ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("laser_power", "mW", 4, "E = area hbar / (d tau), P = eps0 c E^2 / 2 x spot"),
                                [&](auto& e) {
                                    if (!c.species) throw DomainError("species not set");
                                    RydbergState ground(c.species, c.species->ground_n(), 0, HalfInteger{1}, HalfInteger{1});
                                    RydbergState upper(c.species, c.n_p, 1, HalfInteger{3}, HalfInteger{3});
                                    const auto p = pulse_intensity(ground, upper, kExcitationArea, c.pulse_duration_s,
                                                                   c.spot_diameter_m);
                                    e.value = p.power_W * 1e3;
                                    e.threshold = kMaxLaserPowerPerAtom * 1e3;
                                    e.requirement = "<= " + fmt(e.threshold);
                                    e.note = fmt(p.intensity_W_per_cm2 * 1e-6) + " MW/cm^2 for a 3pi/2 pulse " +
                                             ground.label() + " -> " + upper.label();
                                    e.verdict = e.value <= e.threshold * (1.0 + kRelTol) ? Verdict::pass : Verdict::fail;
                                }));

    r.entries.push_back(guarded(make_entry("spectral_resolution", "MHz", 4, "Fourier width 1 / tau"), [&](auto& e) {
        if (!c.species) throw DomainError("species not set");
        if (!(c.pulse_duration_s > 0.0)) throw DomainError("pulse duration must be positive");
        e.value = 1e-6 / c.pulse_duration_s;
        e.threshold = kResolutionRequirementHz * 1e-6;
        const double fs = c.species->fine_structure_50p_mhz();
        e.requirement = "<= " + fmt(e.threshold) + " and < " + fmt(fs) + " (50P fine structure)";
        const bool ok = e.value <= e.threshold * (1.0 + kRelTol) && (fs <= 0.0 || e.value < fs);
        e.verdict = ok ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("zeeman_field", "G", 5, "B >= V_dd / (g_J mu_B) for nP1/2"), [&](auto& e) {
        const auto q = states();
        const double V_mhz = vdd() * 1e-6;
        e.value = c.magnetic_field_G;
        e.threshold = zeeman_requirement(V_mhz, q.p);
        e.requirement = ">= " + fmt(e.threshold);
        e.note = "10 MHz on " + q.p.label() + " needs " + fmt(zeeman_requirement(10.0, q.p)) + " G";
        e.verdict = e.value >= e.threshold * (1.0 - kRelTol) ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("stark_sensitivity", "L", 6, "quadratic Stark effect for L <= 1"), [&](auto& e) {
        const auto q = states();
        e.value = std::max(q.s.L(), q.p.L());
        e.threshold = 1.0;
        e.requirement = "S or P states";
        e.verdict = e.value <= 1.0 ? Verdict::pass : (e.value == 2.0 ? Verdict::warning : Verdict::fail);
    }));

    r.entries.push_back(guarded(make_entry("bbr", "ns", 7, "gate <= 0.1 tau_eff(T)"), [&](auto& e) {
        const auto q = states();
        const auto v = bbr_verdict({q.s, q.p}, c.gate_time_s, c.temperature_K);
        e.value = c.gate_time_s * 1e9;
        e.threshold = kBbrLifetimeFraction * v.min_lifetime_s * 1e9;
        e.requirement = "<= " + fmt(e.threshold);
        e.note = "shortest lifetime " + fmt(v.min_lifetime_s * 1e6) + " us at " + fmt(c.temperature_K) + " K";
        e.verdict = v.pass ? Verdict::pass : Verdict::fail;
    }));

    r.entries.push_back(guarded(make_entry("sfi_field", "V/cm", 8, "E_c = 3.2e8 / n_eff^4"), [&](auto& e) {
        const auto q = states();
        e.value = std::max(sfi_critical_field(q.s), sfi_critical_field(q.p));
        e.threshold = kMaxSfiField;
        e.requirement = "<= " + fmt(e.threshold);
        e.verdict = e.value <= e.threshold ? Verdict::pass : Verdict::fail;
    }));

    return r;
}

std::string format_report_text(const FeasibilityReport& report) {
    std::size_t wn = 4, wv = 5, wr = 11;
    std::vector<std::string> values;
    for (const auto& e : report.entries) {
        values.push_back(fmt(e.value) + (e.unit.empty() ? "" : " " + e.unit));
        wn = std::max(wn, e.name.size());
        wv = std::max(wv, values.back().size());
        wr = std::max(wr, e.requirement.size());
    }
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(wn)) << "name" << "  " << std::setw(static_cast<int>(wv)) << "value"
       << "  " << std::setw(static_cast<int>(wr)) << "requirement" << "  verdict  item  note\n";
    for (std::size_t i = 0; i < report.entries.size(); ++i) {
        const auto& e = report.entries[i];
        os << std::setw(static_cast<int>(wn)) << e.name << "  " << std::setw(static_cast<int>(wv)) << values[i] << "  "
           << std::setw(static_cast<int>(wr)) << e.requirement << "  " << std::setw(7) << to_string(e.verdict) << "  "
           << std::setw(4) << e.summary_item << "  " << e.note << "\n";
    }
    os << "overall: " << (report.all_pass() ? "pass" : "fail") << "\n";
    return os.str();
}

}  // namespace rydberg
