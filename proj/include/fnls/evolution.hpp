#pragma once

#include <functional>

#include "fnls/field.hpp"
#include "fnls/params.hpp"

namespace fnls {

struct EvolutionState {
    double time = 0.0;
    Field field;
    long step_count = 0;
    double dt = 0.0;
};

enum class HaltReason { Completed, BlowupDetected, Overflow };

const char* to_string(HaltReason r);

struct EvolveOptions {
    double dt = 1e-3;
    long sample_every = 10;
    bool sponge = false;
    double sponge_sigma0 = 10.0;
    bool dealias = false;
    double overflow_limit = 1e100;
};

/// exp(-i tau (-Delta)^s) f; exactly mass-preserving, tau of either sign.
Field linear_half_step(const Field& f, double tau, const PhysParams& params);

/// Pointwise phase rotation exp(i tau |f|^(p-1)) f; modulus-preserving.
Field nonlinear_step(const Field& f, double tau, const PhysParams& params);

/// One Strang step: half-linear, full-nonlinear, half-linear, then the
/// optional sponge mask.  dt may be negative (time reversal); throws on
/// dt == 0 and on overflow past options.overflow_limit.
EvolutionState strang_step(const EvolutionState& state,
                           const PhysParams& params,
                           const EvolveOptions& options);

/// Called on the initial state and then every sample_every steps (and on
/// the final step).  Return false to halt the run as BlowupDetected.
using SampleCallback = std::function<bool(const EvolutionState&)>;

struct EvolveResult {
    EvolutionState state;
    HaltReason reason = HaltReason::Completed;
    bool sponge_active = false;
};

/// Steps u0 until t >= T or a callback/overflow halt.  The step loop and
/// strang_step share one in-place kernel, so trajectories agree bit for
/// bit with repeated strang_step calls.
EvolveResult evolve(const Field& u0, const PhysParams& params, double T,
                    const EvolveOptions& options,
                    const SampleCallback& on_sample = {});

/// Shared kernel of strang_step/evolve; exposed for reversal tests.
/// `half_multiplier` etc. are cached internally per (grid, params, options).
void strang_step_inplace(std::vector<Complex>& u, const GridPtr& grid,
                         const PhysParams& params, double dt,
                         const EvolveOptions& options, double* max_abs_out);

} // namespace fnls
