#pragma once

#include <complex>
#include <vector>

#include "fnls/grid.hpp"

namespace fnls {

using Complex = std::complex<double>;

/// A complex scalar field sampled on a Grid, row-major.
struct Field {
    GridPtr grid;
    std::vector<Complex> values;

    Field() = default;
    explicit Field(GridPtr g) : grid(std::move(g)), values(grid->size()) {}
    Field(GridPtr g, std::vector<Complex> v);

    std::size_t size() const { return values.size(); }
    Complex& operator[](std::size_t i) { return values[i]; }
    const Complex& operator[](std::size_t i) const { return values[i]; }

    bool all_finite() const;
    double max_abs() const;
};

/// Largest |u| on the outermost grid layer divided by the global max;
/// used for the box-size warning (periodization is only controlled when
/// the solution is tiny near the boundary).
double boundary_amplitude_ratio(const Field& f);

/// Checks |u(x)| = |u(x')| for grid points with (numerically) equal |x|.
/// Returns the worst relative spread across shells, 0 for empty fields.
/// Appropriate for closed-form radial data evaluated from |x|^2; a
/// computed lattice profile is rotation-invariant only to discretization
/// accuracy across inequivalent lattice points of equal radius.
double radial_asymmetry(const Field& f);

/// Invariance of |u| under the exact lattice point group (per-axis torus
/// reflection and axis permutations); the certifiable radial check for
/// computed profiles.  Returns the worst orbit spread relative to max |u|.
double lattice_symmetry_asymmetry(const Field& f);

void require_same_grid(const Field& a, const Field& b);

} // namespace fnls
