#include "fnls/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace fnls {

InitialData scaling_map(const InitialData& data, double lambda,
                        const PhysParams& params) {
    if (!(lambda > 0.0))
        throw std::invalid_argument("scaling_map: lambda must be > 0");
    InitialData out = data;
    if (data.family == InitialData::Family::Gaussian) {
        out.amplitude =
            data.amplitude * std::pow(lambda, 2.0 * params.s / (params.p - 1.0));
        out.width = data.width / lambda;
        out.chirp = data.chirp * lambda * lambda;
    }
    return out;
}

Field sample_initial_data(const InitialData& data, const GridPtr& grid,
                          const GroundState* ground) {
    Field f(grid);
    if (data.family == InitialData::Family::GroundStateMultiple) {
        if (!ground)
            throw std::invalid_argument(
                "sample_initial_data: ground state required for this family");
        if (*ground->profile.grid != *grid)
            throw std::invalid_argument(
                "sample_initial_data: ground state solved on a different grid");
        for (std::size_t i = 0; i < f.size(); ++i)
            f.values[i] = data.multiple * ground->profile.values[i];
    } else {
        if (!(data.width > 0.0))
            throw std::invalid_argument("sample_initial_data: width must be > 0");
        std::size_t idx[3];
        const double inv_w2 = 1.0 / (data.width * data.width);
        for (std::size_t i = 0; i < f.size(); ++i) {
            grid->unflatten(i, idx);
            double r2 = 0.0;
            for (int d = 0; d < grid->dim(); ++d) {
                const double x = grid->coord(idx[d]);
                r2 += x * x;
            }
            f.values[i] = data.amplitude * std::exp(-r2 * inv_w2) *
                          std::polar(1.0, data.chirp * r2);
        }
    }
    // closed-form families are evaluated from |x|^2, so equal-radius shells
    // must agree exactly; a computed profile is certified through its
    // lattice symmetries instead.
    const double asym = data.family == InitialData::Family::Gaussian
                            ? radial_asymmetry(f)
                            : lattice_symmetry_asymmetry(f);
    if (asym > 1e-12)
        throw std::invalid_argument(
            "sample_initial_data: radial consistency check failed, spread " +
            std::to_string(asym));
    return f;
}

} // namespace fnls
