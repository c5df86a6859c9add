#pragma once

#include "fnls/field.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/params.hpp"

namespace fnls {

/// Closed-form initial-condition family.
///
/// gaussian:              u0(x) = A exp(-|x|^2 / w^2) exp(i b |x|^2)
/// ground_state_multiple: u0 = c Q  (needs a solved ground state)
struct InitialData {
    enum class Family { Gaussian, GroundStateMultiple };
    Family family = Family::Gaussian;
    double amplitude = 1.0; // A
    double width = 1.0;     // w
    double chirp = 0.0;     // b
    double multiple = 1.0;  // c
};

/// The symmetry u -> lambda^(2s/(p-1)) u(lambda x) applied to the
/// descriptor: (A, w, b) -> (lambda^(2s/(p-1)) A, w/lambda, lambda^2 b).
/// Rejects lambda <= 0.  Both L^{p_c} and Hdot^{s_c} norms of the sampled
/// data are invariant.  For the ground-state family the multiple is
/// unchanged (the rescaled profile is no longer grid-aligned; its
/// invariant products are unchanged anyway, which is what the classifier
/// consumes).
InitialData scaling_map(const InitialData& data, double lambda,
                        const PhysParams& params);

/// Samples the descriptor on a grid.  Radial by construction; the radial
/// consistency check (1e-12 relative) runs on construction and throws on
/// violation.  `ground` may be null for the gaussian family.
Field sample_initial_data(const InitialData& data, const GridPtr& grid,
                          const GroundState* ground = nullptr);

} // namespace fnls
