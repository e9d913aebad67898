#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rydberg/numerics.hpp"
#include "rydberg/radial.hpp"
#include "rydberg/state.hpp"

namespace rydberg {

struct StarkBasis {
    SpeciesRef species;
    HalfInteger mJ;
    int n_min = 0;
    int n_max = 0;
    std::vector<RydbergState> states;  // all L, J with |mJ| <= J
};

// l_max < 0 keeps every L up to n - 1.
StarkBasis make_stark_basis(SpeciesRef species, HalfInteger mJ, int n_min, int n_max, int l_max = -1);

// Field-independent pieces of the Stark Hamiltonian: zero-field energies and
// the z dipole matrix. H(F) = diag(E) + F * coupling * Z.
class StarkOperator {
public:
    explicit StarkOperator(const StarkBasis& basis, Execution execution = Execution::parallel);

    const StarkBasis& basis() const { return basis_; }
    std::size_t dimension() const { return energies_.size(); }
    const Eigen::VectorXd& energies_ghz() const { return energies_; }
    const Eigen::MatrixXd& dipole_z_au() const { return dipole_; }

    Eigen::MatrixXd hamiltonian(double field_V_per_cm) const;

private:
    StarkBasis basis_;
    Eigen::VectorXd energies_;
    Eigen::MatrixXd dipole_;
};

// GHz per (atomic unit of dipole) per (V/cm).
double stark_coupling_ghz();

Eigen::MatrixXd build_stark_hamiltonian(const StarkBasis& basis, double field_V_per_cm);

struct StarkMap {
    std::vector<double> fields_V_per_cm;
    std::vector<std::string> labels;                 // zero-field label per curve
    std::vector<std::vector<double>> energies_ghz;   // [field][curve]

    std::size_t curve_count() const { return labels.size(); }
    // Curve index whose zero-field label matches; throws DomainError if absent.
    std::size_t curve_for(const std::string& label) const;
    std::vector<double> curve(std::size_t index) const;
};

// Adiabatic curves, matched between neighbouring fields by eigenvector overlap.
// Fields must start at zero and increase. Throws NumericalError if the
// eigensolver fails.
StarkMap stark_map(const StarkOperator& op, const std::vector<double>& fields,
                   Execution execution = Execution::parallel);
StarkMap stark_map(const StarkBasis& basis, const std::vector<double>& fields,
                   Execution execution = Execution::parallel);

struct PolarizabilityResult {
    double alpha_mhz_per_v2_cm2 = 0.0;  // E = E0 - alpha F^2 / 2
    double relative_residual = 0.0;
};

// Quadratic fit over [0, fit_window] V/cm with a basis spanning n +- 3.
// Throws FitQualityError when the residual exceeds max_relative_residual.
PolarizabilityResult polarizability(const RydbergState& s, double fit_window_V_per_cm = 1.0,
                                    double max_relative_residual = 0.02);

// Energy gap (GHz) between the adiabatic curves of a and b along a field ramp.
struct GapTrace {
    std::vector<double> fields_V_per_cm;
    std::vector<double> gaps_ghz;
};

GapTrace sfi_gap_trace(const RydbergState& a, const RydbergState& b, double field_V_per_cm,
                       std::size_t steps = 41);
double sfi_crossing_check(const RydbergState& a, const RydbergState& b, double field_V_per_cm);

}  // namespace rydberg
