#include "cli_app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "output.hpp"
#include "rydberg/angular.hpp"
#include "rydberg/beam.hpp"
#include "rydberg/constants.hpp"
#include "rydberg/detection.hpp"
#include "rydberg/errors.hpp"
#include "rydberg/feasibility.hpp"
#include "rydberg/lifetime.hpp"
#include "rydberg/pair.hpp"
#include "rydberg/qpg.hpp"
#include "rydberg/radial.hpp"
#include "rydberg/scaling.hpp"
#include "rydberg/spectroscopy.hpp"
#include "rydberg/stark.hpp"

namespace rydsim {

using nlohmann::json;
using namespace rydberg;

namespace {

constexpr double kTwoPi = 2.0 * constants::pi;

struct Globals {
    std::string out_dir;
    unsigned long long seed = 1;
    std::size_t samples = 20000;
    std::string config_path;
    std::string format;
};

struct Result {
    std::vector<OutputFile> files;  // first one is the primary payload
    std::string summary;
};

using Handler = std::function<Result(const Globals&)>;

HalfInteger parse_half(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            const double v = std::stod(text);
            const double t = 2.0 * v;
            if (std::abs(t - std::round(t)) > 1e-12) throw DomainError("");
            return HalfInteger(static_cast<int>(std::lround(t)));
        }
        if (text.substr(slash + 1) != "2") throw DomainError("");
        return HalfInteger(std::stoi(text.substr(0, slash)));
    } catch (const std::logic_error&) {
        throw DomainError("'" + text + "' is not a half-integer");
    }
}

std::string fmt(double v, int digits = 6) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(digits);
    os << v;
    return os.str();
}

std::string pick_format(const Globals& g, const char* fallback) {
    return g.format.empty() ? std::string(fallback) : g.format;
}

Result table_result(const std::string& stem, const CsvTable& table, const Globals& g, std::string summary) {
    Result r;
    if (pick_format(g, "csv") == "json")
        r.files.push_back({stem + ".json", dump_json(table_to_json(table))});
    else
        r.files.push_back({stem + ".csv", table.str()});
    r.summary = std::move(summary);
    return r;
}

Result json_result(const std::string& stem, const json& j, const Globals& g, std::string summary,
                   const std::vector<std::string>& columns = {}) {
    Result r;
    if (pick_format(g, "json") == "csv" && !columns.empty()) {
        CsvTable t;
        t.header = columns;
        std::vector<Cell> row;
        for (const auto& c : columns) row.push_back(j.at(c).get<double>());
        t.add_row(row);
        r.files.push_back({stem + ".csv", t.str()});
    } else {
        r.files.push_back({stem + ".json", dump_json(j)});
    }
    r.summary = std::move(summary);
    return r;
}

struct DriveOptions {
    std::string kind = "one";
    std::optional<double> rabi_khz;
    std::optional<double> light_shift_khz;
    std::optional<double> tau_us;
    double span_khz = 1000.0;
    std::size_t points = 201;

    void add(CLI::App* sub) {
        sub->add_option("--kind", kind, "one or two photon")->check(CLI::IsMember({"one", "two"}));
        sub->add_option("--rabi-khz", rabi_khz, "Omega/2pi, kHz (default: inversion field)");
        sub->add_option("--light-shift-khz", light_shift_khz, "delta0/2pi, kHz");
        sub->add_option("--tau-us", tau_us, "interaction time, us")->check(CLI::PositiveNumber);
        sub->add_option("--span-khz", span_khz, "detuning half range, kHz")->check(CLI::PositiveNumber);
        sub->add_option("--points", points, "detuning points")->check(CLI::Range(2, 1000000));
    }

    TransitionKind transition() const {
        return kind == "two" ? TransitionKind::two_photon : TransitionKind::one_photon;
    }

    DriveParameters drive() const {
        DriveParameters d = default_beam_drive(transition());
        if (tau_us) {
            const double scale = d.tau / (*tau_us * 1e-6);
            d.tau = *tau_us * 1e-6;
            d.rabi *= scale;
            d.light_shift *= scale;
        }
        if (rabi_khz) d.rabi = kTwoPi * 1e3 * *rabi_khz;
        if (light_shift_khz) d.light_shift = kTwoPi * 1e3 * *light_shift_khz;
        return d;
    }

    std::vector<double> detunings() const { return linspace(-span_khz * 1e3, span_khz * 1e3, points); }
};

std::vector<std::string> drive_comments(const DriveParameters& d) {
    return {"kind=" + std::string(d.kind == TransitionKind::one_photon ? "one" : "two"),
            "rabi_Hz=" + format_number(d.rabi / kTwoPi), "light_shift_Hz=" + format_number(d.light_shift / kTwoPi),
            "tau_s=" + format_number(d.tau)};
}

// Long format: one row per (detuning, pattern).
CsvTable spectrum_table(const Spectrum& s, const std::vector<double>* extra = nullptr,
                        const std::string& extra_name = "") {
    CsvTable t;
    t.header = {"detuning_MHz", "pattern_label", "probability"};
    if (extra) t.header.push_back(extra_name);
    for (std::size_t j = 0; j < s.detunings_hz.size(); ++j)
        for (std::size_t c = 0; c < s.curves.size(); ++c) {
            std::vector<Cell> row{s.detunings_hz[j] * 1e-6, s.labels[c], s.curves[c][j]};
            if (extra) row.emplace_back((*extra)[j]);
            t.add_row(std::move(row));
        }
    return t;
}

Result matrix_element_table(const SpeciesRef& sp, int n_min, int n_max, const Globals& g) {
    if (n_min < 1 || n_max < n_min) throw DomainError("need 1 <= n-min <= n-max");
    std::vector<RydbergState> states;
    for (int n = n_min; n <= n_max; ++n)
        for (int L = 0; L <= std::min(3, n - 1); ++L) {
            if (n < sp->lowest_n(L)) continue;
            for (int tj : {2 * L - 1, 2 * L + 1})
                if (tj > 0) states.emplace_back(sp, n, L, HalfInteger(tj));
        }
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < states.size(); ++i)
        for (std::size_t k = i + 1; k < states.size(); ++k)
            if (std::abs(states[i].L() - states[k].L()) == 1 &&
                std::abs(states[i].J().twice - states[k].J().twice) <= 2)
                pairs.emplace_back(i, k);
    std::vector<double> radial(pairs.size());
    WavefunctionCache cache;
    const auto np = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < np; ++i) {
        const auto& [a, b] = pairs[static_cast<std::size_t>(i)];
        radial[static_cast<std::size_t>(i)] = cache.matrix_element(states[a], states[b]);
    }
    CsvTable t;
    t.header = {"species", "n1", "L1", "J1", "n2", "L2", "J2", "radial_au", "frequency_GHz"};
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& a = states[pairs[i].first];
        const auto& b = states[pairs[i].second];
        t.add_row({sp->name(), static_cast<double>(a.n()), static_cast<double>(a.L()), a.J().value(),
                   static_cast<double>(b.n()), static_cast<double>(b.L()), b.J().value(), radial[i],
                   transition_frequency_hz(a, b) * 1e-9});
    }
    return table_result("matrix_elements", t, g, std::to_string(pairs.size()) + " matrix elements");
}

json entry_json(const FeasibilityEntry& e) {
    return {{"name", e.name},
            {"value", std::isfinite(e.value) ? json(e.value) : json(nullptr)},
            {"unit", e.unit},
            {"threshold", e.threshold},
            {"requirement", e.requirement},
            {"verdict", to_string(e.verdict)},
            {"formula", e.formula},
            {"summary_item", e.summary_item},
            {"note", e.note}};
}

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig c = recommended_config();
    static const std::vector<std::string> keys{"species",        "n_s",          "n_p",
                                               "R_m",            "pulse_duration_s", "spot_diameter_m",
                                               "magnetic_field_G", "temperature_K", "gate_time_s"};
    if (!j.is_object()) throw DomainError("feasibility config must be a JSON object");
    for (const auto& [k, v] : j.items())
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw DomainError("unknown config key '" + k + "'");
    if (j.contains("species")) c.species = species::by_name(j["species"].get<std::string>());
    if (j.contains("n_s")) c.n_s = j["n_s"].get<int>();
    if (j.contains("n_p")) c.n_p = j["n_p"].get<int>();
    if (j.contains("R_m")) c.R_m = j["R_m"].get<double>();
    if (j.contains("pulse_duration_s")) c.pulse_duration_s = j["pulse_duration_s"].get<double>();
    if (j.contains("spot_diameter_m")) c.spot_diameter_m = j["spot_diameter_m"].get<double>();
    if (j.contains("magnetic_field_G")) c.magnetic_field_G = j["magnetic_field_G"].get<double>();
    if (j.contains("temperature_K")) c.temperature_K = j["temperature_K"].get<double>();
    if (j.contains("gate_time_s")) c.gate_time_s = j["gate_time_s"].get<double>();
    return c;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError("config '" + path + "': " + e.what());
    }
}

// Turns {"key": value} into "--key value" tokens.
std::vector<std::string> config_tokens(const json& j) {
    if (!j.is_object()) throw DomainError("config must be a JSON object");
    std::vector<std::string> tokens;
    for (const auto& [k, v] : j.items()) {
        if (v.is_boolean()) {
            if (v.get<bool>()) tokens.push_back("--" + k);
            continue;
        }
        tokens.push_back("--" + k);
        if (v.is_string())
            tokens.push_back(v.get<std::string>());
        else if (v.is_number_integer())
            tokens.push_back(std::to_string(v.get<long long>()));
        else if (v.is_number())
            tokens.push_back(format_number(v.get<double>()));
        else
            throw DomainError("config value for '" + k + "' must be a scalar");
    }
    return tokens;
}

json collect_parameters(const CLI::App* sub) {
    json p = json::object();
    for (const CLI::Option* o : sub->get_options()) {
        if (o->get_name() == "--help" || o->get_name() == "-h") continue;
        std::string name = o->get_single_name();
        if (o->count() > 0) {
            const auto& res = o->results();
            std::string v;
            for (std::size_t i = 0; i < res.size(); ++i) v += (i ? "," : "") + res[i];
            p[name] = v;
        } else {
            p[name] = o->get_default_str();
        }
    }
    return p;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rydberg-atom quantum logic and microwave spectroscopy toolkit", "rydsim"};
    app.require_subcommand(1);
    app.fallthrough();
    app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    Globals g;
    app.add_option("--out", g.out_dir, "output directory (payload and manifest.json)");
    app.add_option("--seed", g.seed, "random seed");
    app.add_option("--samples", g.samples, "Monte Carlo samples");
    app.add_option("--config", g.config_path, "JSON file with option values");
    app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

    std::map<CLI::App*, Handler> handlers;
    auto add = [&](const std::string& name, const std::string& desc) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        return sub;
    };

    // state
    std::string species_name = "Na";
    std::string state_text;
    {
        CLI::App* sub = add("state", "quantum defect data of one level");
        sub->add_option("--species", species_name);
        sub->add_option("--state", state_text, "e.g. 37S1/2")->required();
        handlers[sub] = [&](const Globals& gl) {
            const auto s = parse_state(species::by_name(species_name), state_text);
            json j{{"label", s.label()},
                   {"n", s.n()},
                   {"L", s.L()},
                   {"J", s.J().value()},
                   {"n_eff", effective_quantum_number(s)},
                   {"energy_GHz", state_energy_hz(s) * 1e-9},
                   {"orbit_radius_a0", orbit_radius(s.n(), s.L())},
                   {"sfi_field_V_per_cm", sfi_critical_field(s)},
                   {"zeeman_MHz_per_G", zeeman_splitting_rate(s)}};
            return json_result("state", j, gl,
                               s.label() + ": n_eff " + fmt(j["n_eff"]) + ", E " + fmt(j["energy_GHz"]) + " GHz",
                               {"n", "L", "J", "n_eff", "energy_GHz", "orbit_radius_a0", "sfi_field_V_per_cm",
                                "zeeman_MHz_per_G"});
        };
    }

    // dipole
    std::string from_text, to_text, mj_from = "1/2", mj_to = "1/2";
    bool dipole_table = false;
    int table_n_min = 30, table_n_max = 32;
    {
        CLI::App* sub = add("dipole", "transition frequency and dipole matrix element");
        sub->add_option("--species", species_name);
        auto* from_opt = sub->add_option("--from", from_text);
        auto* to_opt = sub->add_option("--to", to_text);
        auto* table_opt = sub->add_flag("--table", dipole_table, "radial matrix elements for all L <= 3 pairs");
        sub->add_option("--n-min", table_n_min);
        sub->add_option("--n-max", table_n_max);
        table_opt->excludes(from_opt)->excludes(to_opt);
        from_opt->needs(to_opt);
        to_opt->needs(from_opt);
        sub->add_option("--mj-from", mj_from);
        sub->add_option("--mj-to", mj_to);
        handlers[sub] = [&](const Globals& gl) {
            auto sp = species::by_name(species_name);
            if (dipole_table) return matrix_element_table(sp, table_n_min, table_n_max, gl);
            if (from_text.empty()) throw DomainError("--from and --to, or --table, are required");
            const auto a = parse_state(sp, from_text, parse_half(mj_from));
            const auto b = parse_state(sp, to_text, parse_half(mj_to));
            const int q = (a.mJ().twice - b.mJ().twice) / 2;
            const double radial = radial_matrix_element(a, b);
            const double ang = std::abs(q) <= 1 ? angular_factor(a, b, q) : 0.0;
            json j{{"from", a.label()},
                   {"to", b.label()},
                   {"q", q},
                   {"frequency_GHz", transition_frequency_hz(a, b) * 1e-9},
                   {"radial_au", radial},
                   {"angular", ang},
                   {"dipole_au", radial * ang},
                   {"dipole_Cm", radial * ang * constants::atomic_dipole}};
            return json_result("dipole", j, gl,
                               a.label() + " -> " + b.label() + ": radial " + fmt(radial) + " a.u., " +
                                   fmt(j["frequency_GHz"]) + " GHz",
                               {"q", "frequency_GHz", "radial_au", "angular", "dipole_au", "dipole_Cm"});
        };
    }

    // stark-map
    std::string mj_text = "1/2";
    int n_min = 32, n_max = 40, l_max = -1;
    double field_max = 10.0;
    std::size_t field_points = 201;
    bool serial = false;
    {
        CLI::App* sub = add("stark-map", "adiabatic Stark map");
        sub->add_option("--species", species_name);
        sub->add_option("--mj", mj_text);
        sub->add_option("--n-min", n_min);
        sub->add_option("--n-max", n_max);
        sub->add_option("--l-max", l_max, "-1 keeps all L");
        sub->add_option("--field-max", field_max, "V/cm")->check(CLI::NonNegativeNumber);
        sub->add_option("--points", field_points)->check(CLI::Range(2, 100000));
        sub->add_flag("--serial", serial, "single-threaded reference path");
        handlers[sub] = [&](const Globals& gl) {
            const auto basis = make_stark_basis(species::by_name(species_name), parse_half(mj_text), n_min, n_max, l_max);
            const auto map = stark_map(basis, linspace(0.0, field_max, field_points),
                                       serial ? Execution::serial : Execution::parallel);
            CsvTable t;
            t.header = {"field_V_per_cm", "curve_index", "zero_field_label", "energy_GHz"};
            for (std::size_t f = 0; f < map.fields_V_per_cm.size(); ++f)
                for (std::size_t c = 0; c < map.curve_count(); ++c)
                    t.add_row({map.fields_V_per_cm[f], static_cast<double>(c), map.labels[c], map.energies_ghz[f][c]});
            return table_result("stark_map", t, gl,
                                std::to_string(basis.states.size()) + " states, " + std::to_string(field_points) +
                                    " fields up to " + fmt(field_max) + " V/cm");
        };
    }

    // lifetime
    double temperature = 300.0;
    int window = 5;
    {
        CLI::App* sub = add("lifetime", "radiative and blackbody-limited lifetime");
        sub->add_option("--species", species_name);
        sub->add_option("--state", state_text)->required();
        sub->add_option("--temperature", temperature, "K")->check(CLI::NonNegativeNumber);
        sub->add_option("--window", window, "n' above n kept for thermal transfer")->check(CLI::Range(1, 100));
        handlers[sub] = [&](const Globals& gl) {
            const auto s = parse_state(species::by_name(species_name), state_text);
            LifetimeOptions opts;
            opts.window = window;
            const auto r = lifetime(s, temperature, opts);
            json channels = json::array();
            for (const auto& c : r.dominant_decay_channels)
                channels.push_back({{"partner", c.partner.label()},
                                    {"frequency_GHz", c.frequency_hz * 1e-9},
                                    {"spontaneous_per_s", c.spontaneous_rate},
                                    {"bbr_per_s", c.bbr_rate}});
            json j{{"state", s.label()},
                   {"temperature_K", temperature},
                   {"radiative_lifetime_us", r.radiative_lifetime * 1e6},
                   {"effective_lifetime_us", r.effective_lifetime * 1e6},
                   {"spontaneous_rate_per_s", r.spontaneous_rate},
                   {"bbr_rate_per_s", r.bbr_rate},
                   {"channels", channels},
                   {"warning", r.accuracy_warning ? json(*r.accuracy_warning) : json(nullptr)}};
            std::string summary = s.label() + ": tau0 " + fmt(r.radiative_lifetime * 1e6, 4) + " us, tau(" +
                                  fmt(temperature) + " K) " + fmt(r.effective_lifetime * 1e6, 4) + " us";
            if (r.accuracy_warning) summary += "\nwarning: " + *r.accuracy_warning;
            return json_result("lifetime", j, gl, summary,
                               {"temperature_K", "radiative_lifetime_us", "effective_lifetime_us",
                                "spontaneous_rate_per_s", "bbr_rate_per_s"});
        };
    }

    // pair
    std::string s_text = "50S1/2", p_text = "50P1/2";
    double R_um = 5.0;
    std::optional<double> tau_ns;
    std::size_t trace_points = 201;
    {
        CLI::App* sub = add("pair", "dipole-dipole shift of an S-P pair");
        sub->add_option("--species", species_name);
        sub->add_option("--s", s_text);
        sub->add_option("--p", p_text);
        sub->add_option("--R-um", R_um, "interatomic distance, um")->check(CLI::PositiveNumber);
        sub->add_option("--tau-ns", tau_ns, "excitation time for the blockade check, ns");
        sub->add_option("--trace-points", trace_points, "samples of the exchange trace over 2T")
            ->check(CLI::Range(2, 1000000));
        handlers[sub] = [&](const Globals& gl) {
            auto sp = species::by_name(species_name);
            const auto a = parse_state(sp, s_text);
            const auto b = parse_state(sp, p_text);
            const double R = R_um * 1e-6;
            const double V = dipole_dipole_shift(a, b, R);
            const auto eig = pair_eigenstates(a, b, R);
            json j{{"s", a.label()},
                   {"p", b.label()},
                   {"R_um", R_um},
                   {"dipole_z_au", transition_dipole_z(a, b) / constants::atomic_dipole},
                   {"V_dd_MHz", V * 1e-6},
                   {"interaction_time_ns", interaction_time(V) * 1e9},
                   {"level_minus_MHz", eig.levels[0].energy_hz * 1e-6},
                   {"level_plus_MHz", eig.levels[1].energy_hz * 1e-6}};
            for (const auto& l : eig.levels)
                if (l.label == "+") j["level_plus_MHz"] = l.energy_hz * 1e-6;
                else j["level_minus_MHz"] = l.energy_hz * 1e-6;
            if (tau_ns) {
                const auto bl = blockade_condition(V, *tau_ns * 1e-9);
                j["blockade_ratio"] = bl.ratio;
                j["blockade_satisfied"] = bl.satisfied;
            }
            Result res = json_result("pair", j, gl,
                                     "V_dd " + fmt(V * 1e-6) + " MHz, T " + fmt(interaction_time(V) * 1e9) + " ns",
                                     {"R_um", "dipole_z_au", "V_dd_MHz", "interaction_time_ns", "level_minus_MHz",
                                      "level_plus_MHz"});
            CsvTable trace;
            trace.header = {"t_ns", "p12", "p21"};
            const double t_end = V > 0.0 ? 2.0 * interaction_time(V) : 1e-6;
            for (double t : linspace(0.0, t_end, trace_points)) {
                const auto [c12, c21] = exchange_evolution(V, t);
                trace.add_row({t * 1e9, std::norm(c12), std::norm(c21)});
            }
            res.files.push_back({"pair_exchange.csv", trace.str()});
            return res;
        };
    }

    // qpg
    std::string preset = "paper-optimal";
    std::optional<int> n_gate;
    double ratio = 10.0;
    double steps = 1e4;
    {
        CLI::App* sub = add("qpg", "conditional phase gate truth table");
        sub->add_option("--preset", preset)->check(CLI::IsMember({"paper-optimal", "fast"}));
        sub->add_option("--species", species_name);
        sub->add_option("--n", n_gate, "principal quantum number of nS1/2 and nP1/2");
        sub->add_option("--R-um", R_um)->check(CLI::PositiveNumber);
        sub->add_option("--ratio", ratio, "gate time / pulse duration")->check(CLI::PositiveNumber);
        sub->add_option("--steps", steps, "RK4 steps per gate time")->check(CLI::Range(10.0, 1e8));
        handlers[sub] = [&](const Globals& gl) {
            const int n = n_gate.value_or(preset == "fast" ? 50 : 30);
            auto sp = species::by_name(species_name);
            const RydbergState s(sp, n, 0, HalfInteger{1}, HalfInteger{1});
            const RydbergState p(sp, n, 1, HalfInteger{1}, HalfInteger{1});
            GateConfig cfg = GateConfig::from_states(s, p, R_um * 1e-6, ratio);
            cfg.steps_per_gate = steps;
            const auto r = qpg_sequence(cfg);
            json table = json::array();
            std::string summary = "gate time " + fmt(r.gate_time_s * 1e9) + " ns";
            for (const auto& e : r.truth_table) {
                table.push_back({{"input", e.input}, {"phase_rad", e.phase_rad}, {"leakage", e.leakage}});
                summary += "\n|" + e.input + ">: phase " + fmt(e.phase_rad, 4) + " rad, leakage " + fmt(e.leakage, 3);
            }
            json j{{"species", sp->name()},
                   {"n", n},
                   {"R_um", R_um},
                   {"pulse_ratio", ratio},
                   {"V_dd_MHz", r.V_hz * 1e-6},
                   {"gate_time_ns", r.gate_time_s * 1e9},
                   {"pulse_duration_ns", r.pulse_duration_s * 1e9},
                   {"truth_table", table}};
            if (pick_format(gl, "json") == "csv") {
                CsvTable t;
                t.header = {"input", "phase_rad", "leakage"};
                for (const auto& e : r.truth_table) t.add_row({e.input, e.phase_rad, e.leakage});
                return table_result("qpg", t, gl, summary);
            }
            return json_result("qpg", j, gl, summary);
        };
    }

    // spectrum
    DriveOptions spec_drive;
    {
        CLI::App* sub = add("spectrum", "single-atom Rabi lineshape");
        spec_drive.add(sub);
        handlers[sub] = [&](const Globals& gl) {
            const auto d = spec_drive.drive();
            const auto s = single_atom_spectrum(d, spec_drive.detunings());
            CsvTable t = spectrum_table(s);
            t.comments = drive_comments(d);
            return table_result("spectrum", t, gl, "peak upper population " + fmt(*std::max_element(
                                                       s.curves[1].begin(), s.curves[1].end())));
        };
    }

    // multi-atom
    DriveOptions multi_drive;
    std::size_t atoms = 2;
    std::string pattern;
    {
        CLI::App* sub = add("multi-atom", "multi-atom excitation spectra of independent atoms");
        multi_drive.add(sub);
        sub->add_option("--N", atoms, "atom number")->check(CLI::Range(1, 30));
        sub->add_option("--pattern", pattern, "labeled pattern such as 12212");
        handlers[sub] = [&](const Globals& gl) {
            const auto d = multi_drive.drive();
            const auto det = multi_drive.detunings();
            const auto rho = single_atom_spectrum(d, det).curves[1];
            const auto s = pattern.empty() ? multi_atom_spectrum(atoms, det, rho) : multi_atom_pattern(pattern, det, rho);
            CsvTable t = spectrum_table(s);
            t.comments = drive_comments(d);
            t.comments.push_back("N=" + std::to_string(s.atoms));
            return table_result("multi_atom", t, gl, std::to_string(s.labels.size()) + " curves for N = " +
                                                         std::to_string(s.atoms));
        };
    }

    // narrowing
    std::size_t narrow_n = 5;
    {
        CLI::App* sub = add("narrowing", "width ratio of single and N-atom full-excitation lines");
        sub->add_option("--N", narrow_n)->check(CLI::Range(1, 100000));
        handlers[sub] = [&](const Globals& gl) {
            CsvTable t;
            t.header = {"N", "exact_ratio", "asymptotic_ratio"};
            for (std::size_t n = 1; n <= narrow_n; ++n)
                t.add_row({static_cast<double>(n), narrowing_ratio(n), narrowing_ratio_asymptotic(n)});
            return table_result("narrowing", t, gl,
                                "N = " + std::to_string(narrow_n) + ": exact " + fmt(narrowing_ratio(narrow_n), 4) +
                                    ", asymptotic " + fmt(narrowing_ratio_asymptotic(narrow_n), 4));
        };
    }

    // beam
    DriveOptions beam_drive;
    bool tune = false, no_standing = false, events_mode = false;
    std::string wave_model = "coherent";
    std::optional<double> fluctuation, speed;
    std::size_t tune_samples = 2000, shots = 2000;
    double mean_atoms = 2.0;
    std::optional<int> fixed_atoms;
    int post_n = 1;
    std::string beam_pattern;
    {
        CLI::App* sub = add("beam", "thermal-beam Monte Carlo spectra");
        beam_drive.add(sub);
        sub->add_flag("--tune", tune, "rescale the field for maximum central transfer");
        sub->add_option("--tune-samples", tune_samples)->check(CLI::Range(1000, 100000000));
        sub->add_flag("--no-standing-wave", no_standing);
        sub->add_option("--wave-model", wave_model)->check(CLI::IsMember({"coherent", "envelope"}));
        sub->add_option("--fluctuation", fluctuation, "rms field noise fraction")->check(CLI::NonNegativeNumber);
        sub->add_option("--speed", speed, "mean speed, m/s")->check(CLI::NonNegativeNumber);
        sub->add_flag("--events", events_mode, "simulate detected events and post-select by atom number");
        sub->add_option("--shots", shots, "events per detuning");
        sub->add_option("--mean-atoms", mean_atoms, "Poisson mean")->check(CLI::NonNegativeNumber);
        sub->add_option("--atoms", fixed_atoms, "fixed atom number per event");
        sub->add_option("--N", post_n, "post-selected total count")->check(CLI::Range(1, 5));
        sub->add_option("--pattern", beam_pattern, "multiset label, e.g. {12}");
        handlers[sub] = [&](const Globals& gl) {
            const auto kind = beam_drive.transition();
            BeamConfig cfg = default_beam_config(kind);
            cfg.standing_wave = !no_standing;
            cfg.wave_model = wave_model == "envelope" ? StandingWaveModel::envelope : StandingWaveModel::coherent;
            if (fluctuation) cfg.field_fluctuation_rms = *fluctuation;
            if (speed) cfg.mean_speed = *speed;
            DriveParameters d = beam_drive.drive();
            cfg.interaction_time = d.tau;
            if (tune) d = tune_drive_for_inversion(cfg, d, tune_samples, gl.seed);
            const auto det = beam_drive.detunings();
            std::vector<std::string> comments = drive_comments(d);
            comments.push_back("seed=" + std::to_string(gl.seed));
            comments.push_back("standing_wave=" + std::string(cfg.standing_wave ? "1" : "0") + " wave_model=" + wave_model);
            comments.push_back("field_fluctuation_rms=" + format_number(cfg.field_fluctuation_rms));
            comments.push_back("mean_speed_m_per_s=" + format_number(cfg.mean_speed));
            if (!events_mode) {
                const auto r = beam_monte_carlo(cfg, d, det, gl.samples, gl.seed);
                std::vector<double> se;
                for (std::size_t j = 0; j < det.size(); ++j) se.push_back(r.standard_error[j]);
                CsvTable t = spectrum_table(r.spectrum, &se, "stderr");
                comments.push_back("samples=" + std::to_string(gl.samples));
                comments.push_back("rejected=" + std::to_string(r.diagnostics.rejected));
                t.comments = comments;
                const auto& up = r.spectrum.curves[1];
                return table_result("beam", t, gl,
                                    "peak upper population " + fmt(*std::max_element(up.begin(), up.end()), 4));
            }
            ShotSettings ss;
            ss.shots_per_detuning = shots;
            ss.mean_atoms = mean_atoms;
            ss.fixed_atoms = fixed_atoms;
            const auto events = simulate_beam_events(cfg, d, det, ss, gl.seed);
            const auto sorted = sorted_multi_atom_spectra(events, det, post_n, beam_pattern);
            std::vector<double> sel(sorted.selected.begin(), sorted.selected.end());
            CsvTable t = spectrum_table(sorted.spectrum, &sel, "selected_events");
            comments.push_back("shots_per_detuning=" + std::to_string(shots));
            comments.push_back("N=" + std::to_string(post_n));
            t.comments = comments;
            std::size_t total = 0;
            for (auto c : sorted.selected) total += c;
            return table_result("beam_events", t, gl,
                                std::to_string(total) + " of " + std::to_string(events.size()) + " events with N = " +
                                    std::to_string(post_n));
        };
    }

    // sfi-sim
    std::vector<int> counts;
    int max_count = 5;
    std::size_t per_count = 1000;
    {
        CLI::App* sub = add("sfi-sim", "channeltron pulse amplitudes and atom counting");
        sub->add_option("--counts", counts, "true atom number per event")->delimiter(',');
        sub->add_option("--max-count", max_count)->check(CLI::Range(0, 1000));
        sub->add_option("--events-per-count", per_count);
        handlers[sub] = [&](const Globals& gl) {
            std::vector<int> c = counts;
            if (c.empty())
                for (int k = 0; k <= max_count; ++k) c.insert(c.end(), per_count, k);
            DetectionModel model;
            const auto ev = sfi_counting_sim(c, model, gl.seed);
            std::map<int, std::pair<std::size_t, std::size_t>> acc;
            for (const auto& e : ev) {
                auto& a = acc[e.true_count];
                ++a.first;
                if (e.inferred_count == e.true_count) ++a.second;
            }
            std::string summary;
            for (const auto& [k, a] : acc)
                summary += (summary.empty() ? "" : "\n") + std::string("count ") + std::to_string(k) + ": accuracy " +
                           fmt(static_cast<double>(a.second) / static_cast<double>(a.first), 4);
            Result r;
            if (pick_format(gl, "json") == "csv") {
                CsvTable t;
                t.header = {"event_id", "true_count", "amplitude_mV", "inferred_count", "reliable"};
                for (const auto& e : ev)
                    t.add_row({static_cast<double>(e.event_id), static_cast<double>(e.true_count), e.amplitude_mV,
                               static_cast<double>(e.inferred_count), e.reliable ? 1.0 : 0.0});
                return table_result("sfi_events", t, gl, summary);
            }
            std::string lines;
            for (const auto& e : ev) {
                json j{{"event_id", e.event_id},
                       {"true_count", e.true_count},
                       {"amplitude_mV", e.amplitude_mV},
                       {"inferred_count", e.inferred_count},
                       {"reliable", e.reliable}};
                lines += j.dump() + "\n";
            }
            r.files.push_back({"sfi_events.jsonl", lines});
            r.summary = summary;
            return r;
        };
    }

    // feasibility
    std::string feas_preset = "recommended";
    {
        CLI::App* sub = add("feasibility", "experimental-limitations budget");
        sub->add_option("--preset", feas_preset)->check(CLI::IsMember({"recommended", "fast"}));
        handlers[sub] = [&](const Globals& gl) {
            ExperimentConfig cfg = feas_preset == "fast" ? fast_gate_config() : recommended_config();
            if (!gl.config_path.empty()) cfg = config_from_json(read_json_file(gl.config_path));
            const auto rep = feasibility_report(cfg);
            json entries = json::array();
            for (const auto& e : rep.entries) entries.push_back(entry_json(e));
            json j{{"config",
                    {{"species", cfg.species ? cfg.species->name() : ""},
                     {"n_s", cfg.n_s},
                     {"n_p", cfg.n_p},
                     {"R_m", cfg.R_m},
                     {"pulse_duration_s", cfg.pulse_duration_s},
                     {"spot_diameter_m", cfg.spot_diameter_m},
                     {"magnetic_field_G", cfg.magnetic_field_G},
                     {"temperature_K", cfg.temperature_K},
                     {"gate_time_s", cfg.gate_time_s}}},
                   {"entries", entries},
                   {"all_pass", rep.all_pass()}};
            const std::string text = format_report_text(rep);
            Result r;
            r.files.push_back({"feasibility.json", dump_json(j)});
            r.files.push_back({"feasibility.txt", text});
            r.summary = text;
            return r;
        };
    }

    // Expand --config for every subcommand but feasibility.
    std::vector<std::string> args = raw_args;
    try {
        auto cfg_it = std::find(args.begin(), args.end(), "--config");
        std::string cfg_path;
        if (cfg_it != args.end() && cfg_it + 1 != args.end()) cfg_path = *(cfg_it + 1);
        for (const auto& a : args)
            if (a.rfind("--config=", 0) == 0) cfg_path = a.substr(9);
        if (!cfg_path.empty()) {
            auto sub_it = std::find_if(args.begin(), args.end(), [&](const std::string& a) {
                return std::any_of(handlers.begin(), handlers.end(),
                                   [&](const auto& h) { return h.first->get_name() == a; });
            });
            if (sub_it != args.end() && *sub_it != "feasibility") {
                const auto tokens = config_tokens(read_json_file(cfg_path));
                args.insert(sub_it + 1, tokens.begin(), tokens.end());
            }
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }

    CLI::App* chosen = nullptr;
    for (auto& [sub, h] : handlers)
        if (sub->parsed()) chosen = sub;
    if (!chosen) {
        err << app.help();
        return kExitInput;
    }

    try {
        Result r = handlers.at(chosen)(g);
        if (!g.out_dir.empty()) {
            json params = collect_parameters(chosen);
            params["samples"] = std::to_string(g.samples);
            params["format"] = g.format;
            params["config"] = g.config_path;
            write_outputs(g.out_dir, chosen->get_name(), params, g.seed, r.files);
            out << r.summary << "\n";
            for (const auto& f : r.files) out << "wrote " << g.out_dir << "/" << f.name << "\n";
        } else if (chosen->get_name() == "feasibility") {
            out << r.summary;
        } else {
            out << r.files.front().content;
        }
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const ConfigurationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "failure: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

}  // namespace rydsim
