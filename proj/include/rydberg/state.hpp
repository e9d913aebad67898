#pragma once

#include <string>

#include "rydberg/species.hpp"

namespace rydberg {

class RydbergState {
public:
    // Throws DomainError unless n >= 1, 0 <= L < n, |J - L| = 1/2, |mJ| <= J.
    RydbergState(SpeciesRef species, int n, int L, HalfInteger J, HalfInteger mJ);
    RydbergState(SpeciesRef species, int n, int L, HalfInteger J);

    const AtomSpecies& species() const { return *species_; }
    const SpeciesRef& species_ref() const { return species_; }
    int n() const { return n_; }
    int L() const { return L_; }
    HalfInteger J() const { return J_; }
    HalfInteger mJ() const { return mJ_; }

    RydbergState with_mJ(HalfInteger mJ) const;

    // "37S1/2"
    std::string label() const;

    bool same_level(const RydbergState& other) const;
    bool operator==(const RydbergState& other) const;

private:
    SpeciesRef species_;
    int n_;
    int L_;
    HalfInteger J_;
    HalfInteger mJ_;
};

// Parses "<n><L-letter><J-fraction>", e.g. "37S1/2" or "50p3/2".
// mJ defaults to +1/2.
RydbergState parse_state(SpeciesRef species, const std::string& text);
RydbergState parse_state(SpeciesRef species, const std::string& text, HalfInteger mJ);

char orbital_letter(int L);
int orbital_from_letter(char c);

double effective_quantum_number(const RydbergState& s);
// Binding energy relative to the ionization limit, Hz (negative).
double state_energy_hz(const RydbergState& s);
// E(to) - E(from), Hz.
double transition_frequency_hz(const RydbergState& from, const RydbergState& to);

}  // namespace rydberg
