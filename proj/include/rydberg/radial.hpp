#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "rydberg/state.hpp"

namespace rydberg {

// Uniform grid in x = sqrt(r), r in Bohr radii. Point i sits at x = i * step.
struct RadialGrid {
    double step = 0.005;
    double r_min = 1e-3;
    double r_max = 0.0;  // 0 selects an outer bound from n_eff

    static RadialGrid for_state(double n_eff, double step = 0.005);
    double outer_radius(double n_eff) const;
};

// Reduced radial function on a sqrt(r) grid. Stores w(x) with u(r) = sqrt(x) w(x),
// normalised so that the integral of u^2 dr is one.
class RadialWavefunction {
public:
    RadialWavefunction(double n_eff, int L, double step, std::size_t first, std::vector<double> w);

    double n_eff() const { return n_eff_; }
    int L() const { return L_; }
    double step() const { return step_; }
    // Index of the first stored point; everything inside is zero.
    std::size_t first_index() const { return first_; }
    std::size_t last_index() const { return first_ + w_.size() - 1; }
    std::size_t size() const { return w_.size(); }

    double x(std::size_t k) const { return static_cast<double>(first_ + k) * step_; }
    double r(std::size_t k) const { double xx = x(k); return xx * xx; }
    double w(std::size_t k) const { return w_[k]; }
    double u(std::size_t k) const;

    std::vector<double> r_values() const;
    std::vector<double> u_values() const;

    int node_count() const;
    double norm() const;
    // <r^p> expectation value.
    double expectation_r(int power) const;

    const std::vector<double>& raw() const { return w_; }

private:
    double n_eff_;
    int L_;
    double step_;
    std::size_t first_;
    std::vector<double> w_;
};

using WavefunctionRef = std::shared_ptr<const RadialWavefunction>;

// Numerov integration inward from the classically forbidden outer region.
// Throws IntegrationError on a non-normalisable result or wrong node count.
RadialWavefunction integrate_radial(double n_eff, int L, const RadialGrid& grid);
RadialWavefunction integrate_radial(const RydbergState& s, const RadialGrid& grid);
RadialWavefunction integrate_radial(const RydbergState& s);

// Smallest number of grid points per local wavelength over the allowed region.
double points_per_wavelength(double n_eff, int L, const RadialGrid& grid);

// <a| r |b> in Bohr radii. Both functions must share the grid step.
double radial_overlap_r(const RadialWavefunction& a, const RadialWavefunction& b);
double radial_overlap(const RadialWavefunction& a, const RadialWavefunction& b);

// Radial part of the dipole matrix element, atomic units.
double radial_matrix_element(const RydbergState& a, const RydbergState& b);

// Thread-safe memo of wavefunctions keyed by (n_eff, L, step).
class WavefunctionCache {
public:
    explicit WavefunctionCache(double step = 0.005) : step_(step) {}
    WavefunctionRef get(double n_eff, int L);
    WavefunctionRef get(const RydbergState& s);
    double matrix_element(const RydbergState& a, const RydbergState& b);
    std::size_t size() const;

private:
    struct Impl;
    double step_;
    std::shared_ptr<Impl> impl_ = make_impl();
    static std::shared_ptr<Impl> make_impl();
};

}  // namespace rydberg
