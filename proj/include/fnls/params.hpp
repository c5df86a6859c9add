#pragma once

#include <stdexcept>

namespace fnls {

/// Physical parameters of i u_t - (-Delta)^s u + |u|^(p-1) u = 0.
struct PhysParams {
    int dim = 2;       // N
    double s = 0.75;   // fractional order, 0 < s < 1
    double p = 3.0;    // nonlinearity power, p > 1

    void validate() const {
        if (dim < 1)
            throw std::invalid_argument("params: N must be >= 1");
        if (!(s > 0.0 && s < 1.0))
            throw std::invalid_argument("params: s must lie in (0, 1)");
        if (!(p > 1.0))
            throw std::invalid_argument("params: p must be > 1");
    }

    /// Critical Sobolev index s_c = N/2 - 2s/(p-1).
    double s_critical() const {
        return 0.5 * dim - 2.0 * s / (p - 1.0);
    }
    /// Scale-invariant Lebesgue exponent p_c = N(p-1)/(2s).
    double p_critical() const { return dim * (p - 1.0) / (2.0 * s); }

    /// Mass-critical power 1 + 4s/N (lower end of the window).
    double mass_critical_power() const { return 1.0 + 4.0 * s / dim; }
    /// Energy-critical power 1 + 4s/(N-2s); only meaningful when N > 2s.
    double energy_critical_power() const {
        return 1.0 + 4.0 * s / (dim - 2.0 * s);
    }

    /// L^2-supercritical window: 1 + 4s/N < p, and p < 1 + 4s/(N-2s)
    /// when N > 2s (no upper bound otherwise).
    bool in_supercritical_window() const {
        if (!(p > mass_critical_power())) return false;
        if (dim > 2.0 * s && !(p < energy_critical_power())) return false;
        return true;
    }

    /// Radial Strichartz range condition of the scattering theorem.
    bool s_in_radial_range() const {
        return s >= static_cast<double>(dim) / (2.0 * dim - 1.0);
    }

    /// Exponent (s - s_c)/s_c of the mass factor in the scale-invariant
    /// products; requires s_c > 0.
    double mass_exponent() const {
        const double sc = s_critical();
        if (!(sc > 0.0))
            throw std::invalid_argument(
                "L2-critical or subcritical: products undefined");
        return (s - sc) / sc;
    }
};

struct CriticalExponents {
    double s_c;
    double p_c;
};

inline CriticalExponents critical_exponents(const PhysParams& params) {
    params.validate();
    return {params.s_critical(), params.p_critical()};
}

} // namespace fnls
