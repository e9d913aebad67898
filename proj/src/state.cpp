#include "rydberg/state.hpp"

#include <cctype>
#include <cstdlib>
#include <string_view>

#include "rydberg/constants.hpp"
#include "rydberg/errors.hpp"

namespace rydberg {

namespace {
constexpr std::string_view kLetters = "SPDFGHIKLMNOQRTUVWXYZ";
}

char orbital_letter(int L) {
    if (L < 0 || L >= static_cast<int>(kLetters.size())) throw DomainError("L out of range for letter");
    return kLetters[static_cast<std::size_t>(L)];
}

int orbital_from_letter(char c) {
    auto pos = kLetters.find(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    if (pos == std::string_view::npos) throw ConfigurationError(std::string("unknown orbital letter '") + c + "'");
    return static_cast<int>(pos);
}

RydbergState::RydbergState(SpeciesRef species, int n, int L, HalfInteger J, HalfInteger mJ)
    : species_(std::move(species)), n_(n), L_(L), J_(J), mJ_(mJ) {
    if (!species_) throw DomainError("state without species");
    if (n_ < 1) throw DomainError("n must be positive");
    if (L_ < 0 || L_ >= n_) throw DomainError("L must satisfy 0 <= L < n");
    if (std::abs(J_.twice - 2 * L_) != 1) throw DomainError("|J - L| must equal 1/2");
    if (!mJ_.is_half_odd() || std::abs(mJ_.twice) > J_.twice) throw DomainError("|mJ| must not exceed J");
}

RydbergState::RydbergState(SpeciesRef species, int n, int L, HalfInteger J)
    : RydbergState(std::move(species), n, L, J, HalfInteger(1)) {}

RydbergState RydbergState::with_mJ(HalfInteger mJ) const {
    return RydbergState(species_, n_, L_, J_, mJ);
}

std::string RydbergState::label() const {
    if (L_ < static_cast<int>(kLetters.size())) return std::to_string(n_) + orbital_letter(L_) + to_string(J_);
    return std::to_string(n_) + "[" + std::to_string(L_) + "]" + to_string(J_);
}

bool RydbergState::same_level(const RydbergState& o) const {
    return species_->name() == o.species_->name() && n_ == o.n_ && L_ == o.L_ && J_ == o.J_;
}

bool RydbergState::operator==(const RydbergState& o) const {
    return same_level(o) && mJ_ == o.mJ_;
}

RydbergState parse_state(SpeciesRef species, const std::string& text) {
    return parse_state(std::move(species), text, HalfInteger(1));
}

RydbergState parse_state(SpeciesRef species, const std::string& text, HalfInteger mJ) {
    std::size_t i = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == 0 || i >= text.size()) throw ConfigurationError("bad state label '" + text + "'");
    const int n = std::stoi(text.substr(0, i));
    const int L = orbital_from_letter(text[i]);
    std::string jtext = text.substr(i + 1);
    int twiceJ = 0;
    if (jtext.empty()) {
        twiceJ = 2 * L + 1;
    } else {
        auto slash = jtext.find('/');
        if (slash == std::string::npos || jtext.substr(slash + 1) != "2")
            throw ConfigurationError("bad J in state label '" + text + "'");
        try {
            std::size_t used = 0;
            twiceJ = std::stoi(jtext.substr(0, slash), &used);
            if (used != slash) throw std::invalid_argument(jtext);
        } catch (const std::logic_error&) {
            throw ConfigurationError("bad J in state label '" + text + "'");
        }
    }
    return RydbergState(std::move(species), n, L, HalfInteger(twiceJ), mJ);
}

double effective_quantum_number(const RydbergState& s) {
    const double neff = s.n() - s.species().quantum_defect(s.L(), s.J());
    if (!(neff > 0.0)) throw DomainError("effective quantum number must be positive for " + s.label());
    return neff;
}

double state_energy_hz(const RydbergState& s) {
    const double neff = effective_quantum_number(s);
    return -constants::rydberg_frequency / (neff * neff);
}

double transition_frequency_hz(const RydbergState& from, const RydbergState& to) {
    return state_energy_hz(to) - state_energy_hz(from);
}

}  // namespace rydberg
