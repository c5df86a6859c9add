#include "fnls/admissible.hpp"

#include <cmath>

namespace fnls {

bool is_admissible(double q, double r, double theta,
                   const PhysParams& params) {
    if (!(q > 0.0) || !(r > 0.0)) return false;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double inv_r = std::isinf(r) ? 0.0 : 1.0 / r;
    if (!(q >= 2.0 && r >= 2.0)) return false;

    const double n = params.dim;
    const double gap = 2.0 * params.s * inv_q + n * inv_r;
    if (std::abs(gap - (0.5 * n - theta)) > 1e-9) return false;

    const double q_split = (4.0 * n + 2.0) / (2.0 * n - 1.0);
    const double range_rhs = 0.5 * (2.0 * n - 1.0) * (0.5 - inv_r);
    const double tol = 1e-12;
    if (q >= q_split - tol)
        return inv_q <= range_rhs + tol;
    return inv_q < range_rhs - tol;
}

AdmissiblePair diagonal_pair(const PhysParams& params) {
    const double qc =
        (params.p - 1.0) * (params.dim + 2.0 * params.s) / (2.0 * params.s);
    return {qc, qc, params.s_critical()};
}

} // namespace fnls
