#pragma once

#include "fnls/params.hpp"

namespace fnls {

/// A theta-level admissible Strichartz pair: q, r >= 2 with the gap
/// condition 2s/q + N/r = N/2 - theta and the radial range condition.
struct AdmissiblePair {
    double q;
    double r;
    double level; // theta
};

/// Checks both the gap condition (to 1e-9) and the range condition.
/// q may be +infinity; it is handled through the 1/q = 0 convention.
bool is_admissible(double q, double r, double theta, const PhysParams& params);

/// The diagonal pair q_c = r_c = (p-1)(N+2s)/(2s) at level s_c.
AdmissiblePair diagonal_pair(const PhysParams& params);

} // namespace fnls
