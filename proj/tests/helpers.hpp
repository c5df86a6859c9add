#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "fnls/field.hpp"
#include "fnls/spectral.hpp"

namespace fnls::testing {

/// exp(i k . x) for per-axis wavenumber indices (FFT-ordered).
inline Field plane_wave(const GridPtr& grid, const int* mode_index) {
    Field f(grid);
    std::size_t idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid->unflatten(i, idx);
        double phase = 0.0;
        for (int d = 0; d < grid->dim(); ++d)
            phase += grid->wavenumbers()[mode_index[d]] * grid->coord(idx[d]);
        f.values[i] = std::polar(1.0, phase);
    }
    return f;
}

inline double plane_wave_k2(const GridPtr& grid, const int* mode_index) {
    double k2 = 0.0;
    for (int d = 0; d < grid->dim(); ++d) {
        const double k = grid->wavenumbers()[mode_index[d]];
        k2 += k * k;
    }
    return k2;
}

/// A exp(-|x|^2 / w^2), radial.
inline Field gaussian_field(const GridPtr& grid, double amplitude = 1.0,
                            double width = 1.0) {
    Field f(grid);
    std::size_t idx[3];
    const double inv_w2 = 1.0 / (width * width);
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid->unflatten(i, idx);
        double r2 = 0.0;
        for (int d = 0; d < grid->dim(); ++d) {
            const double x = grid->coord(idx[d]);
            r2 += x * x;
        }
        f.values[i] = amplitude * std::exp(-r2 * inv_w2);
    }
    return f;
}

/// Smooth pseudo-random field: random spectrum with gaussian decay,
/// deterministic per seed.
inline Field random_smooth_field(const GridPtr& grid, std::uint64_t seed,
                                 double k_decay = 1.0) {
    auto ws = Spectral::for_grid(grid);
    Field f(grid);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::vector<double>& k2 = ws->k_squared();
    for (std::size_t i = 0; i < f.size(); ++i)
        f.values[i] = Complex(gauss(rng), gauss(rng)) *
                      std::exp(-k_decay * k2[i]);
    ws->inverse(f.values);
    return f;
}

inline double max_abs_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

inline double rel_l2_diff(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a.values[i] - b.values[i]);
        den += std::norm(b.values[i]);
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

/// Adaptive Simpson quadrature, the independent oracle for the
/// continuum integrals the spectral code is checked against.
inline double adaptive_simpson(const std::function<double(double)>& f,
                               double a, double b, double tol = 1e-12,
                               int depth = 30) {
    const std::function<double(double, double, double, double, double, int)>
        rec = [&](double x0, double x2, double f0, double f1, double f2,
                  int level) -> double {
        const double xm = 0.5 * (x0 + x2);
        const double h = x2 - x0;
        const double x01 = 0.5 * (x0 + xm), x12 = 0.5 * (xm + x2);
        const double f01 = f(x01), f12 = f(x12);
        const double whole = h / 6.0 * (f0 + 4.0 * f1 + f2);
        const double left = h / 12.0 * (f0 + 4.0 * f01 + f1);
        const double right = h / 12.0 * (f1 + 4.0 * f12 + f2);
        if (level <= 0 || std::abs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(x0, xm, f0, f01, f1, level - 1) +
               rec(xm, x2, f1, f12, f2, level - 1);
    };
    const double xm = 0.5 * (a + b);
    return rec(a, b, f(a), f(xm), f(b), depth);
}

} // namespace fnls::testing
