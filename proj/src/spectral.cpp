#include "fnls/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace fnls {

namespace {

#ifdef FNLS_HAVE_FFTW_THREADS
int requested_threads() {
    const char* env = std::getenv("FNLS_THREADS");
    if (!env) return 1;
    const long n = std::strtol(env, nullptr, 10);
    return n > 1 ? static_cast<int>(n) : 1;
}

std::once_flag fftw_threads_once;
#endif

} // namespace

struct Spectral::Impl {
    fftw_complex* buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
    // long-double lane, planned lazily (only the time stepper pays for it)
    fftwl_complex* buf_l = nullptr;
    fftwl_plan fwd_l = nullptr;
    fftwl_plan bwd_l = nullptr;
    mutable std::mutex exec_mutex;
    mutable std::mutex cache_mutex;
    mutable std::map<double, std::vector<double>> pow_cache;
};

Spectral::Spectral(GridPtr grid) : grid_(std::move(grid)), impl_(new Impl) {
    const int rank = grid_->dim();
    const int m = static_cast<int>(grid_->points_per_dim());
    int n[3] = {m, m, m};

#ifdef FNLS_HAVE_FFTW_THREADS
    const int nthreads = requested_threads();
    if (nthreads > 1) {
        std::call_once(fftw_threads_once, [] { fftw_init_threads(); });
        fftw_plan_with_nthreads(nthreads);
    }
#endif

    impl_->buf = fftw_alloc_complex(grid_->size());
    if (!impl_->buf) throw std::bad_alloc();
    // FFTW_ESTIMATE keeps planning deterministic (no timing-dependent choices).
    impl_->fwd = fftw_plan_dft(rank, n, impl_->buf, impl_->buf,
                               FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft(rank, n, impl_->buf, impl_->buf,
                               FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!impl_->fwd || !impl_->bwd)
        throw std::runtime_error("fftw planning failed");

    const std::vector<double>& k1 = grid_->wavenumbers();
    k2_.resize(grid_->size());
    for (int d = 0; d < rank; ++d) kaxis_[d].resize(grid_->size());
    std::size_t idx[3];
    for (std::size_t i = 0; i < grid_->size(); ++i) {
        grid_->unflatten(i, idx);
        double acc = 0.0;
        for (int d = 0; d < rank; ++d) {
            const double kd = k1[idx[d]];
            kaxis_[d][i] = kd;
            acc += kd * kd;
        }
        k2_[i] = acc;
    }
}

Spectral::~Spectral() {
    if (impl_->fwd) fftw_destroy_plan(impl_->fwd);
    if (impl_->bwd) fftw_destroy_plan(impl_->bwd);
    if (impl_->buf) fftw_free(impl_->buf);
    if (impl_->fwd_l) fftwl_destroy_plan(impl_->fwd_l);
    if (impl_->bwd_l) fftwl_destroy_plan(impl_->bwd_l);
    if (impl_->buf_l) fftwl_free(impl_->buf_l);
}

void Spectral::filtered_roundtrip_l(
    std::vector<Complex>& io,
    const std::vector<std::complex<long double>>& multiplier) const {
    if (io.size() != grid_->size() || multiplier.size() != grid_->size())
        throw std::invalid_argument("spectral: buffer size mismatch");
    std::lock_guard<std::mutex> lock(impl_->exec_mutex);
    if (!impl_->fwd_l) {
        const int rank = grid_->dim();
        const int m = static_cast<int>(grid_->points_per_dim());
        int n[3] = {m, m, m};
        impl_->buf_l = fftwl_alloc_complex(grid_->size());
        if (!impl_->buf_l) throw std::bad_alloc();
        impl_->fwd_l = fftwl_plan_dft(rank, n, impl_->buf_l, impl_->buf_l,
                                      FFTW_FORWARD, FFTW_ESTIMATE);
        impl_->bwd_l = fftwl_plan_dft(rank, n, impl_->buf_l, impl_->buf_l,
                                      FFTW_BACKWARD, FFTW_ESTIMATE);
        if (!impl_->fwd_l || !impl_->bwd_l)
            throw std::runtime_error("fftwl planning failed");
    }
    const std::size_t n = io.size();
    fftwl_complex* b = impl_->buf_l;
    for (std::size_t i = 0; i < n; ++i) {
        b[i][0] = io[i].real();
        b[i][1] = io[i].imag();
    }
    fftwl_execute(impl_->fwd_l);
    for (std::size_t i = 0; i < n; ++i) {
        const long double re = b[i][0] * multiplier[i].real() -
                               b[i][1] * multiplier[i].imag();
        const long double im = b[i][0] * multiplier[i].imag() +
                               b[i][1] * multiplier[i].real();
        b[i][0] = re;
        b[i][1] = im;
    }
    fftwl_execute(impl_->bwd_l);
    const long double scale = 1.0L / static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i)
        io[i] = Complex(static_cast<double>(b[i][0] * scale),
                        static_cast<double>(b[i][1] * scale));
}

std::shared_ptr<Spectral> Spectral::for_grid(const GridPtr& grid) {
    static std::mutex registry_mutex;
    static std::map<std::tuple<int, std::size_t, double>,
                    std::shared_ptr<Spectral>> registry;
    std::lock_guard<std::mutex> lock(registry_mutex);
    const auto key = std::make_tuple(grid->dim(), grid->points_per_dim(),
                                     grid->half_length());
    auto it = registry.find(key);
    if (it != registry.end()) return it->second;
    std::shared_ptr<Spectral> ws(new Spectral(grid));
    registry.emplace(key, ws);
    return ws;
}

void Spectral::forward(std::vector<Complex>& io) const {
    if (io.size() != grid_->size())
        throw std::invalid_argument("spectral: buffer size mismatch");
    std::lock_guard<std::mutex> lock(impl_->exec_mutex);
    std::memcpy(static_cast<void*>(impl_->buf), static_cast<const void*>(io.data()), sizeof(Complex) * io.size());
    fftw_execute(impl_->fwd);
    std::memcpy(static_cast<void*>(io.data()), static_cast<const void*>(impl_->buf), sizeof(Complex) * io.size());
}

void Spectral::inverse(std::vector<Complex>& io) const {
    if (io.size() != grid_->size())
        throw std::invalid_argument("spectral: buffer size mismatch");
    {
        std::lock_guard<std::mutex> lock(impl_->exec_mutex);
        std::memcpy(static_cast<void*>(impl_->buf), static_cast<const void*>(io.data()), sizeof(Complex) * io.size());
        fftw_execute(impl_->bwd);
        std::memcpy(static_cast<void*>(io.data()), static_cast<const void*>(impl_->buf), sizeof(Complex) * io.size());
    }
    const double scale = 1.0 / static_cast<double>(grid_->size());
    for (Complex& z : io) z *= scale;
}

const std::vector<double>& Spectral::k_pow(double two_sigma) const {
    std::lock_guard<std::mutex> lock(impl_->cache_mutex);
    auto it = impl_->pow_cache.find(two_sigma);
    if (it != impl_->pow_cache.end()) return it->second;
    std::vector<double> table(grid_->size());
    for (std::size_t i = 0; i < grid_->size(); ++i)
        table[i] = k2_[i] > 0.0 ? std::pow(k2_[i], 0.5 * two_sigma) : 0.0;
    return impl_->pow_cache.emplace(two_sigma, std::move(table)).first->second;
}

Field fft_forward(const Field& f) {
    Field out = f;
    Spectral::for_grid(f.grid)->forward(out.values);
    return out;
}

Field fft_inverse(const Field& spectrum) {
    Field out = spectrum;
    Spectral::for_grid(spectrum.grid)->inverse(out.values);
    return out;
}

Field fractional_laplacian(const Field& f, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("fractional_laplacian: sigma must be > 0");
    if (!f.all_finite())
        throw std::invalid_argument("fractional_laplacian: input has NaN/Inf");
    auto ws = Spectral::for_grid(f.grid);
    Field out = f;
    ws->forward(out.values);
    const std::vector<double>& mult = ws->k_pow(2.0 * sigma);
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] *= mult[i];
    ws->inverse(out.values);
    return out;
}

double norm_l2(const Field& f) {
    KahanSum s;
    for (const Complex& z : f.values) s.add(std::norm(z));
    return std::sqrt(f.grid->cell_volume() * s.value());
}

double norm_lp(const Field& f, double q) {
    if (!(q >= 1.0)) throw std::invalid_argument("norm_lp: q must be >= 1");
    if (q == 2.0) return norm_l2(f);
    KahanSum s;
    for (const Complex& z : f.values) s.add(std::pow(std::abs(z), q));
    return std::pow(f.grid->cell_volume() * s.value(), 1.0 / q);
}

double seminorm_hs(const Field& f, double sigma) {
    if (!(sigma >= 0.0))
        throw std::invalid_argument("seminorm_hs: sigma must be >= 0");
    auto ws = Spectral::for_grid(f.grid);
    std::vector<Complex> spec = f.values;
    ws->forward(spec);
    const std::vector<double>& mult = ws->k_pow(2.0 * sigma);
    KahanSum s;
    for (std::size_t i = 0; i < spec.size(); ++i)
        s.add(mult[i] * std::norm(spec[i]));
    const double scale =
        f.grid->cell_volume() / static_cast<double>(f.grid->size());
    return std::sqrt(scale * s.value());
}

} // namespace fnls
