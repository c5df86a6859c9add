#include "fnls/evolution.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

#include "fnls/spectral.hpp"

namespace fnls {

const char* to_string(HaltReason r) {
    switch (r) {
        case HaltReason::Completed: return "Completed";
        case HaltReason::BlowupDetected: return "BlowupDetected";
        default: return "Overflow";
    }
}

namespace {

using ComplexL = std::complex<long double>;

// exp(i theta) with a long-double evaluation; the table is applied many
// thousands of times, so its modulus must not carry a systematic rounding.
ComplexL unit_phase_l(long double theta) {
    return ComplexL(cosl(theta), sinl(theta));
}

struct StepTables {
    std::vector<ComplexL> half_phase; // exp(-i (dt/2) |k|^{2s}), dealias folded in
    std::vector<double> sponge_mask;  // empty when sponge off
};

using TableKey =
    std::tuple<int, std::size_t, double, double, double, bool, bool, double>;

std::shared_ptr<const StepTables> step_tables(const GridPtr& grid,
                                              const PhysParams& params,
                                              double dt,
                                              const EvolveOptions& options) {
    static std::mutex mtx;
    static std::map<TableKey, std::shared_ptr<const StepTables>> cache;
    const TableKey key{grid->dim(),   grid->points_per_dim(),
                       grid->half_length(), params.s,
                       dt,            options.dealias,
                       options.sponge, options.sponge_sigma0};
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    auto tables = std::make_shared<StepTables>();
    auto ws = Spectral::for_grid(grid);
    const std::vector<double>& k2s = ws->k_pow(2.0 * params.s);
    const std::size_t n = grid->size();
    tables->half_phase.resize(n);

    const double kmax = M_PI * static_cast<double>(grid->points_per_dim()) /
                        (2.0 * grid->half_length());
    const double kcut = (2.0 / 3.0) * kmax;
    for (std::size_t i = 0; i < n; ++i) {
        ComplexL ph =
            unit_phase_l(-0.5L * static_cast<long double>(dt) *
                         static_cast<long double>(k2s[i]));
        if (options.dealias) {
            for (int d = 0; d < grid->dim(); ++d)
                if (std::abs(ws->k_axis(d)[i]) > kcut) ph = 0.0L;
        }
        tables->half_phase[i] = ph;
    }

    if (options.sponge) {
        tables->sponge_mask.resize(n);
        std::size_t idx[3];
        const double L = grid->half_length();
        for (std::size_t i = 0; i < n; ++i) {
            grid->unflatten(i, idx);
            double r2 = 0.0;
            for (int d = 0; d < grid->dim(); ++d) {
                const double x = grid->coord(idx[d]);
                r2 += x * x;
            }
            const double xi = std::sqrt(r2) / L;
            double ramp = 0.0;
            if (xi > 0.8) {
                const double w = (xi - 0.8) / 0.2;
                ramp = w * w;
            }
            tables->sponge_mask[i] =
                std::exp(-std::abs(dt) * options.sponge_sigma0 * ramp);
        }
    }
    auto shared = std::shared_ptr<const StepTables>(tables);
    cache.emplace(key, shared);
    return shared;
}

} // namespace

void strang_step_inplace(std::vector<Complex>& u, const GridPtr& grid,
                         const PhysParams& params, double dt,
                         const EvolveOptions& options, double* max_abs_out) {
    if (dt == 0.0)
        throw std::invalid_argument("strang_step: dt must be nonzero");
    auto ws = Spectral::for_grid(grid);
    auto tables = step_tables(grid, params, dt, options);
    const std::size_t n = u.size();
    const double pm1 = params.p - 1.0;

    ws->filtered_roundtrip_l(u, tables->half_phase);

    double amax = 0.0;
    if (pm1 == 2.0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double a2 = std::norm(u[i]);
            if (a2 > amax) amax = a2;
            u[i] *= std::polar(1.0, dt * a2);
        }
        amax = std::sqrt(amax);
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double a = std::abs(u[i]);
            if (a > amax) amax = a;
            u[i] *= std::polar(1.0, dt * std::pow(a, pm1));
        }
    }

    ws->filtered_roundtrip_l(u, tables->half_phase);

    if (options.sponge)
        for (std::size_t i = 0; i < n; ++i) u[i] *= tables->sponge_mask[i];

    if (max_abs_out) *max_abs_out = amax;
}

Field linear_half_step(const Field& f, double tau, const PhysParams& params) {
    auto ws = Spectral::for_grid(f.grid);
    const std::vector<double>& k2s = ws->k_pow(2.0 * params.s);
    std::vector<ComplexL> phase(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        phase[i] = unit_phase_l(-static_cast<long double>(tau) *
                                static_cast<long double>(k2s[i]));
    Field out = f;
    ws->filtered_roundtrip_l(out.values, phase);
    return out;
}

Field nonlinear_step(const Field& f, double tau, const PhysParams& params) {
    Field out = f;
    const double pm1 = params.p - 1.0;
    for (Complex& z : out.values)
        z *= std::polar(1.0, tau * std::pow(std::abs(z), pm1));
    return out;
}

EvolutionState strang_step(const EvolutionState& state,
                           const PhysParams& params,
                           const EvolveOptions& options) {
    EvolutionState next = state;
    next.dt = options.dt;
    double amax = 0.0;
    strang_step_inplace(next.field.values, next.field.grid, params, options.dt,
                        options, &amax);
    if (amax > options.overflow_limit)
        throw std::overflow_error("strang_step: field magnitude exceeded limit");
    next.time = state.time + options.dt;
    next.step_count = state.step_count + 1;
    return next;
}

EvolveResult evolve(const Field& u0, const PhysParams& params, double T,
                    const EvolveOptions& options,
                    const SampleCallback& on_sample) {
    if (!(T >= 0.0)) throw std::invalid_argument("evolve: T must be >= 0");
    if (!(options.dt > 0.0)) throw std::invalid_argument("evolve: dt must be > 0");
    if (!u0.all_finite())
        throw std::invalid_argument("evolve: initial data has NaN/Inf");

    EvolveResult result;
    result.sponge_active = options.sponge;
    EvolutionState& st = result.state;
    st.field = u0;
    st.dt = options.dt;
    st.time = 0.0;
    st.step_count = 0;

    if (on_sample && !on_sample(st)) {
        result.reason = HaltReason::BlowupDetected;
        return result;
    }

    const long nsteps =
        static_cast<long>(std::ceil(T / options.dt - 1e-12));
    for (long step = 1; step <= nsteps; ++step) {
        double amax = 0.0;
        strang_step_inplace(st.field.values, st.field.grid, params, options.dt,
                            options, &amax);
        st.step_count = step;
        st.time = options.dt * static_cast<double>(step);
        if (amax > options.overflow_limit || !std::isfinite(amax)) {
            result.reason = HaltReason::Overflow;
            return result;
        }
        if (step % options.sample_every == 0 || step == nsteps) {
            if (on_sample && !on_sample(st)) {
                result.reason = HaltReason::BlowupDetected;
                return result;
            }
        }
    }
    result.reason = HaltReason::Completed;
    return result;
}

} // namespace fnls
