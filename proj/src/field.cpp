#include "fnls/field.hpp"
#include <array>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace fnls {

Field::Field(GridPtr g, std::vector<Complex> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (values.size() != grid->size())
        throw std::invalid_argument("field: value count does not match grid");
}

bool Field::all_finite() const {
    for (const Complex& z : values)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

double Field::max_abs() const {
    double m = 0.0;
    for (const Complex& z : values) m = std::max(m, std::abs(z));
    return m;
}

double boundary_amplitude_ratio(const Field& f) {
    const Grid& g = *f.grid;
    const std::size_t m = g.points_per_dim();
    double boundary = 0.0, global = 0.0;
    std::size_t idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = std::abs(f.values[i]);
        global = std::max(global, a);
        g.unflatten(i, idx);
        bool edge = false;
        for (int d = 0; d < g.dim(); ++d)
            if (idx[d] == 0 || idx[d] == m - 1) edge = true;
        if (edge) boundary = std::max(boundary, a);
    }
    return global > 0.0 ? boundary / global : 0.0;
}

double radial_asymmetry(const Field& f) {
    const Grid& g = *f.grid;
    // Group points into shells of equal r^2.  Coordinates are products of
    // the (dyadic when L and M are) spacing, so exact keying is usually
    // safe; a scaled long-integer key absorbs the remaining roundoff.
    std::map<long long, std::pair<double, double>> shells; // key -> (min,max)
    std::size_t idx[3];
    double global = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.unflatten(i, idx);
        double r2 = 0.0;
        for (int d = 0; d < g.dim(); ++d) {
            const double x = g.coord(idx[d]);
            r2 += x * x;
        }
        const long long key = std::llround(r2 / (g.spacing() * g.spacing()) * 4096.0);
        const double a = std::abs(f.values[i]);
        global = std::max(global, a);
        auto [it, inserted] = shells.try_emplace(key, std::make_pair(a, a));
        if (!inserted) {
            it->second.first = std::min(it->second.first, a);
            it->second.second = std::max(it->second.second, a);
        }
    }
    if (global == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& [key, mm] : shells)
        worst = std::max(worst, (mm.second - mm.first) / global);
    return worst;
}

double lattice_symmetry_asymmetry(const Field& f) {
    const Grid& g = *f.grid;
    const std::size_t m = g.points_per_dim();
    // canonical orbit key: per-axis min(i, (M - i) mod M), sorted
    std::map<std::array<std::size_t, 3>, std::pair<double, double>> orbits;
    std::size_t idx[3];
    double global = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.unflatten(i, idx);
        std::array<std::size_t, 3> key{0, 0, 0};
        for (int d = 0; d < g.dim(); ++d) {
            const std::size_t mirrored = idx[d] == 0 ? 0 : m - idx[d];
            key[d] = std::min(idx[d], mirrored);
        }
        std::sort(key.begin(), key.begin() + g.dim());
        const double a = std::abs(f.values[i]);
        global = std::max(global, a);
        auto [it, inserted] = orbits.try_emplace(key, std::make_pair(a, a));
        if (!inserted) {
            it->second.first = std::min(it->second.first, a);
            it->second.second = std::max(it->second.second, a);
        }
    }
    if (global == 0.0) return 0.0;
    double worst = 0.0;
    for (const auto& [key, mm] : orbits)
        worst = std::max(worst, (mm.second - mm.first) / global);
    return worst;
}

void require_same_grid(const Field& a, const Field& b) {
    if (!a.grid || !b.grid || *a.grid != *b.grid)
        throw std::invalid_argument("fields live on different grids");
}

} // namespace fnls
