#pragma once

#include <string>

#include "fnls/field.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/params.hpp"

namespace fnls {

/// M[f] = ||f||_2^2.
double mass(const Field& f);
/// E[f] = 1/2 ||f||_{Hdot^s}^2 - 1/(p+1) ||f||_{p+1}^{p+1}.
double energy(const Field& f, const PhysParams& params);

struct InvariantProducts {
    double product_energy;  // M[f]^((s-s_c)/s_c) E[f]
    double product_kinetic; // M[f]^((s-s_c)/s_c) ||f||_{Hdot^s}^2
};

/// Requires s_c > 0; throws std::invalid_argument
/// ("L2-critical or subcritical: products undefined") otherwise.
InvariantProducts invariant_products(const Field& f, const PhysParams& params);

struct Thresholds {
    double energy;  // T_E = M[Q]^((s-s_c)/s_c) E[Q]
    double kinetic; // T_K = M[Q]^((s-s_c)/s_c) ||Q||_{Hdot^s}^2
};

/// Thresholds from the computed Q, cross-validated against the closed
/// forms (the energy one against the derived product identity; the
/// kinetic one to 1e-3, else throws CertificationFailed
/// ("inconsistent ground state")).
Thresholds thresholds(const GroundState& ground, const PhysParams& params);

enum class Verdict { ScatterPredicted, BlowupPredicted, Boundary, Undetermined };

const char* to_string(Verdict v);

struct ThresholdReport {
    double product_energy;
    double product_kinetic;
    double threshold_energy;
    double threshold_kinetic;
    struct {
        bool radial_data;
        bool s_in_range; // s >= N/(2N-1)
        bool dim_ok;     // N >= 2
        bool window;     // supercritical window
    } hypothesis_flags;
    Verdict verdict;
    std::string note;

    bool all_hypotheses() const {
        return hypothesis_flags.radial_data && hypothesis_flags.s_in_range &&
               hypothesis_flags.dim_ok && hypothesis_flags.window;
    }
};

/// Sharp-threshold classifier.  Scattering needs all hypothesis flags and
/// both products strictly below threshold; the complementary blowup
/// condition (P_E below, P_K above) is reported regardless of the
/// radial / s-range flags.  Comparisons within 1e-6 relative are Boundary.
ThresholdReport classify(const Field& f, const PhysParams& params,
                         const GroundState& ground);

ThresholdReport classify_products(const InvariantProducts& prod, bool radial,
                                  const PhysParams& params,
                                  const GroundState& ground);

/// The invariant-set function f(y) = y^2/2 - C_GN/(p+1) y^(N(p-1)/(2s)),
/// with C_GN in the closed form determined by the computed Q (this makes
/// y1 its stationary point exactly).
double invariant_set_f(double y, const PhysParams& params,
                       const GroundState& ground);
double invariant_set_f_derivative(double y, const PhysParams& params,
                                  const GroundState& ground);

struct StationaryPoints {
    double y0;     // local minimum, = 0
    double y1;     // local maximum, ||Q||_2^((s-s_c)/s_c) ||D^s Q||_2
    double f_max;  // f(y1)
};
StationaryPoints invariant_set_stationary_points(const PhysParams& params,
                                                 const GroundState& ground);

struct CoercivityGap {
    double gap;         // ||D^s f||_2^2 - N(p-1)/(2s(p+1)) ||f||_{p+1}^{p+1}
    double ratio_y;     // scale-invariant ratio against Q
    double lower_bound; // G(y) ||D^s f||_2^2 / y^2, G(y) = y^2 - y^(N(p-1)/2s)
    bool inside_invariant_set;
};

/// Coercive quantity of the gradient/potential balance; the lower bound
/// is reported through G and the ratio y.  Fields outside the invariant
/// set (P_K >= T_K) are flagged, not rejected.
CoercivityGap coercivity_gap(const Field& f, const PhysParams& params,
                             const GroundState& ground);

} // namespace fnls
