#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <utility>

namespace rydberg {

enum class Element { Na, Rb, H };

// Half-integer quantum number stored as twice its value.
struct HalfInteger {
    int twice = 0;

    constexpr HalfInteger() = default;
    constexpr explicit HalfInteger(int twice_value) : twice(twice_value) {}
    static constexpr HalfInteger half(int numerator) { return HalfInteger(numerator); }
    static constexpr HalfInteger whole(int value) { return HalfInteger(2 * value); }

    constexpr double value() const { return 0.5 * twice; }
    constexpr bool is_half_odd() const { return (twice % 2) != 0; }
    constexpr auto operator<=>(const HalfInteger&) const = default;
};

std::string to_string(HalfInteger h);

class AtomSpecies {
public:
    AtomSpecies(Element element, std::string name, double mass_kg);

    Element element() const { return element_; }
    const std::string& name() const { return name_; }
    double mass_kg() const { return mass_kg_; }

    // Quantum defect for (L, J). J-specific entries win over J-independent ones.
    // L above the highest tabulated L returns zero.
    double quantum_defect(int L, HalfInteger J) const;
    bool has_defect(int L, HalfInteger J) const;
    int highest_tabulated_L() const { return highest_L_; }

    // twice_J < 0 marks an entry valid for both J of that L.
    void set_defect(int L, int twice_J, double defect);

    // Lowest physical n for a given L (core-occupied shells excluded).
    int lowest_n(int L) const;
    void set_lowest_n(int L, int n) { lowest_n_[L] = n; }

    // Fine-structure interval of the 50P level, MHz.
    double fine_structure_50p_mhz() const { return fs_50p_mhz_; }
    void set_fine_structure_50p_mhz(double v) { fs_50p_mhz_ = v; }

    // Ground state used as the lower level of the laser excitation.
    int ground_n() const { return ground_n_; }
    void set_ground_n(int n) { ground_n_ = n; }

private:
    Element element_;
    std::string name_;
    double mass_kg_;
    std::map<std::pair<int, int>, double> defects_;
    int highest_L_ = -1;
    std::map<int, int> lowest_n_;
    double fs_50p_mhz_ = 0.0;
    int ground_n_ = 1;
};

using SpeciesRef = std::shared_ptr<const AtomSpecies>;

namespace species {
SpeciesRef sodium();
SpeciesRef rubidium();
SpeciesRef hydrogen();
// Accepts "Na", "Rb", "H" (case-insensitive) and the full element names.
SpeciesRef by_name(const std::string& name);
}  // namespace species

// Reads defect tables from a whitespace separated text stream:
//   <element> <L> <J> <defect>
// J is a fraction such as 1/2, or '*' for both J. '#' starts a comment.
// Entries override the built-in table of the named element.
std::map<std::string, SpeciesRef> load_species(std::istream& in);
std::map<std::string, SpeciesRef> load_species_file(const std::string& path);

}  // namespace rydberg
