#pragma once

#include <memory>
#include <vector>

#include "fnls/field.hpp"

namespace fnls {

/// FFT plans and cached Fourier-multiplier tables for one grid.
///
/// Convention: forward() is the unnormalized DFT, inverse() divides by M^N,
/// so inverse(forward(f)) == f up to roundoff and Parseval reads
/// h^N sum |f|^2 = (h^N / M^N) sum |fhat|^2.
///
/// Transforms may use FFTW's internal threading (capped by FNLS_THREADS);
/// results are deterministic for a fixed plan.
class Spectral {
public:
    static std::shared_ptr<Spectral> for_grid(const GridPtr& grid);

    const Grid& grid() const { return *grid_; }

    void forward(std::vector<Complex>& io) const;
    void inverse(std::vector<Complex>& io) const;

    /// forward -> pointwise multiplier -> normalized inverse, carried out
    /// entirely in long double.  The double <-> long double conversions
    /// happen once per call, so repeated application (the time stepper)
    /// accumulates no measurable energy bias: the double-precision
    /// transform pair drifts by ~2e-16 of the mass per application, which
    /// over 10^4 steps would break the 1e-12 conservation budget.
    void filtered_roundtrip_l(
        std::vector<Complex>& io,
        const std::vector<std::complex<long double>>& multiplier) const;

    /// |k|^2 for every flat index.
    const std::vector<double>& k_squared() const { return k2_; }
    /// k_d for every flat index (axis component of the wave vector).
    const std::vector<double>& k_axis(int d) const { return kaxis_[d]; }
    /// |k|^(2*sigma) for every flat index; zero mode maps to 0. Cached.
    const std::vector<double>& k_pow(double two_sigma) const;

    ~Spectral();
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

private:
    explicit Spectral(GridPtr grid);

    GridPtr grid_;
    std::vector<double> k2_;
    std::vector<double> kaxis_[3];
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Field fft_forward(const Field& f);
Field fft_inverse(const Field& spectrum);

/// (-Delta)^sigma f as the Fourier multiplier |k|^(2 sigma).
/// The zero mode maps to zero.  Rejects nonpositive sigma and NaN input.
Field fractional_laplacian(const Field& f, double sigma);

/// Discrete L^2 norm, (h^N sum |f|^2)^(1/2).
double norm_l2(const Field& f);
/// Discrete L^q norm, (h^N sum |f|^q)^(1/q), q >= 1.
double norm_lp(const Field& f, double q);
/// Homogeneous Sobolev seminorm |f|_{Hdot^sigma} via Parseval on |k|^sigma fhat.
double seminorm_hs(const Field& f, double sigma);

/// Kahan-compensated sum; keeps the big reductions reproducible and tight.
class KahanSum {
public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

} // namespace fnls
