#include "rydberg/species.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"

namespace rydberg {

std::string to_string(HalfInteger h) {
    if (h.twice % 2 == 0) return std::to_string(h.twice / 2);
    return std::to_string(h.twice) + "/2";
}

AtomSpecies::AtomSpecies(Element element, std::string name, double mass_kg)
    : element_(element), name_(std::move(name)), mass_kg_(mass_kg) {}

void AtomSpecies::set_defect(int L, int twice_J, double defect) {
    if (L < 0) throw ConfigurationError("negative L in defect table for " + name_);
    if (twice_J >= 0 && std::abs(twice_J - 2 * L) != 1)
        throw ConfigurationError("J incompatible with L in defect table for " + name_);
    if (!(defect >= 0.0)) throw ConfigurationError("quantum defects must be non-negative");
    defects_[{L, twice_J < 0 ? -1 : twice_J}] = defect;
    highest_L_ = std::max(highest_L_, L);
}

bool AtomSpecies::has_defect(int L, HalfInteger J) const {
    if (L > highest_L_) return true;
    return defects_.count({L, J.twice}) || defects_.count({L, -1});
}

double AtomSpecies::quantum_defect(int L, HalfInteger J) const {
    if (L > highest_L_) return 0.0;
    if (auto it = defects_.find({L, J.twice}); it != defects_.end()) return it->second;
    if (auto it = defects_.find({L, -1}); it != defects_.end()) return it->second;
    throw ConfigurationError("no quantum defect for " + name_ + " L=" + std::to_string(L) +
                             " J=" + to_string(J));
}

int AtomSpecies::lowest_n(int L) const {
    if (auto it = lowest_n_.find(L); it != lowest_n_.end()) return std::max(it->second, L + 1);
    return L + 1;
}

namespace {

std::shared_ptr<AtomSpecies> make_sodium() {
    auto s = std::make_shared<AtomSpecies>(Element::Na, "Na", 22.98976928 * constants::atomic_mass_unit);
    s->set_defect(0, 1, 1.348);
    s->set_defect(1, -1, 0.855);
    s->set_defect(2, -1, 0.015);
    s->set_lowest_n(0, 3);
    s->set_lowest_n(1, 3);
    s->set_lowest_n(2, 3);
    s->set_fine_structure_50p_mhz(45.0);
    s->set_ground_n(3);
    return s;
}

std::shared_ptr<AtomSpecies> make_rubidium() {
    auto s = std::make_shared<AtomSpecies>(Element::Rb, "Rb", 86.909180527 * constants::atomic_mass_unit);
    s->set_defect(0, 1, 3.131);
    s->set_defect(1, 1, 2.654);
    s->set_defect(1, 3, 2.641);
    s->set_defect(2, -1, 1.347);
    s->set_defect(3, -1, 0.0165);
    s->set_lowest_n(0, 5);
    s->set_lowest_n(1, 5);
    s->set_lowest_n(2, 4);
    s->set_lowest_n(3, 4);
    s->set_fine_structure_50p_mhz(819.0);
    s->set_ground_n(5);
    return s;
}

std::shared_ptr<AtomSpecies> make_hydrogen() {
    auto s = std::make_shared<AtomSpecies>(Element::H, "H", 1.00782503223 * constants::atomic_mass_unit);
    s->set_ground_n(1);
    return s;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::shared_ptr<AtomSpecies> fresh_builtin(const std::string& name) {
    const std::string k = lower(name);
    if (k == "na" || k == "sodium") return make_sodium();
    if (k == "rb" || k == "rubidium") return make_rubidium();
    if (k == "h" || k == "hydrogen") return make_hydrogen();
    throw ConfigurationError("unknown species '" + name + "'");
}

int parse_twice_j(const std::string& text) {
    if (text == "*") return -1;
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return 2 * std::stoi(text);
        if (text.substr(slash + 1) != "2") throw ConfigurationError("J must be a multiple of 1/2: " + text);
        return std::stoi(text.substr(0, slash));
    } catch (const std::logic_error&) {
        throw ConfigurationError("bad J value '" + text + "'");
    }
}

}  // namespace

namespace species {

SpeciesRef sodium() {
    static const SpeciesRef s = make_sodium();
    return s;
}

SpeciesRef rubidium() {
    static const SpeciesRef s = make_rubidium();
    return s;
}

SpeciesRef hydrogen() {
    static const SpeciesRef s = make_hydrogen();
    return s;
}

SpeciesRef by_name(const std::string& name) {
    const std::string k = lower(name);
    if (k == "na" || k == "sodium") return sodium();
    if (k == "rb" || k == "rubidium") return rubidium();
    if (k == "h" || k == "hydrogen") return hydrogen();
    throw ConfigurationError("unknown species '" + name + "'");
}

}  // namespace species

std::map<std::string, SpeciesRef> load_species(std::istream& in) {
    std::map<std::string, std::shared_ptr<AtomSpecies>> building;
    std::map<std::string, bool> cleared;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string element, L_text, J_text, defect_text;
        if (!(ls >> element)) continue;
        if (!(ls >> L_text >> J_text >> defect_text))
            throw ConfigurationError("species file line " + std::to_string(line_no) +
                                     ": expected <element> <L> <J> <defect>");
        std::string extra;
        if (ls >> extra)
            throw ConfigurationError("species file line " + std::to_string(line_no) + ": trailing text");

        auto& sp = building[element];
        if (!sp) sp = fresh_builtin(element);
        // The file replaces the built-in table wholesale.
        if (!cleared[element]) {
            auto replacement = std::make_shared<AtomSpecies>(sp->element(), sp->name(), sp->mass_kg());
            for (int L = 0; L <= 3; ++L) replacement->set_lowest_n(L, sp->lowest_n(L));
            replacement->set_fine_structure_50p_mhz(sp->fine_structure_50p_mhz());
            replacement->set_ground_n(sp->ground_n());
            sp = replacement;
            cleared[element] = true;
        }
        int L = 0;
        double defect = 0.0;
        try {
            std::size_t used = 0;
            L = std::stoi(L_text, &used);
            if (used != L_text.size()) throw std::invalid_argument(L_text);
            defect = std::stod(defect_text, &used);
            if (used != defect_text.size()) throw std::invalid_argument(defect_text);
        } catch (const std::logic_error&) {
            throw ConfigurationError("species file line " + std::to_string(line_no) + ": bad number");
        }
        sp->set_defect(L, parse_twice_j(J_text), defect);
    }
    std::map<std::string, SpeciesRef> out;
    for (auto& [k, v] : building) out[v->name()] = v;
    return out;
}

std::map<std::string, SpeciesRef> load_species_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigurationError("cannot open species file " + path);
    return load_species(f);
}

}  // namespace rydberg
