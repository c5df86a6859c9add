#pragma once

#include <optional>
#include <vector>

#include "fnls/criteria.hpp"
#include "fnls/evolution.hpp"
#include "fnls/field.hpp"
#include "fnls/ground_state.hpp"
#include "fnls/params.hpp"
#include "fnls/quadrature.hpp"

namespace fnls {

struct DetectorFlags {
    bool consistent_with_scattering = false;
    bool blowup_indicated = false;
    bool undetermined = true;
    bool tail_exceeded = false; // outer third of k-space holds > 10% H^s energy
    bool sponge_active = false;
    bool overflow = false;
};

/// Per-time-sample monitored quantities.  virial_rate_fd is a centered
/// difference filled retroactively (NaN on the first/last sample);
/// virial_rate_id is NaN on samples where the rate identity is skipped.
struct DiagnosticsRecord {
    double time;
    double mass;
    double energy;
    double hs_seminorm_sq;
    double lp1_norm; // ||u||_{p+1}^{p+1}
    double virial;
    double virial_rate_fd;
    double virial_rate_id;
    double strichartz_accum;
    double coercivity_gap;
    DetectorFlags flags;
};

struct VirialConfig {
    double radius;             // R; phi_R(x) = R^2 phi(x/R)
    QuadratureRule m_rule;     // nodes/weights for int_0^inf m^s (.) dm
};

VirialConfig make_virial_config(double radius, std::size_t m_nodes, double s,
                                MRuleKind kind = MRuleKind::RationalJacobi);

/// u_m = c_s F^{-1}[u_hat / (|k|^2 + m)], c_s = sqrt(sin(pi s)/pi).
/// Rejects m <= 0.
Field resolvent_field(const Field& f, double m, const PhysParams& params);

struct ResolventIdentity {
    double lhs;    // int m^s int |grad u_m|^2 dx dm by m-quadrature
    double rhs;    // s ||(-Delta)^{s/2} u||_2^2
    double relerr; // 0 when both vanish
};

ResolventIdentity resolvent_identity_check(const Field& f,
                                           const PhysParams& params,
                                           const QuadratureRule& m_rule);

/// J_R = 2 Im int conj(u) grad(phi_R) . grad(u) dx (spectral gradient).
double localized_virial(const Field& f, const VirialConfig& config);

struct VirialRate {
    double identity;       // the full rate identity, by m-quadrature
    double main_term;      // 8 s ||D^s u||_2^2 - 4N(p-1)/(p+1) ||u||_{p+1}^{p+1}
    double main_term_quad; // same, kinetic part by the m-quadrature
    // exact correction integrals (main_term_quad - sum == identity):
    double corr_hessian;    // Hessian deficit on |x| > R
    double corr_biharmonic; // int m^s int bilap(phi_R) |u_m|^2 (annulus)
    double corr_potential;  // 2(p-1)/(p+1) int (lap phi(x/R) - 2N) |u|^{p+1}
    double lower_bound;     // main_term - corrections
};

VirialRate virial_rate(const Field& f, const PhysParams& params,
                       const VirialConfig& config);

/// One trapezoid-free accumulation step of the diagonal Strichartz norm:
/// (prev^{q_c} + dt ||f||_{r_c}^{q_c})^{1/q_c}; non-decreasing.
double strichartz_accumulate(double prev, const Field& f, double dt,
                             const PhysParams& params);

/// Fraction of the H^s energy (1 + |k|^{2s}) |u_hat|^2 carried by modes
/// with max_d |k_d| >= (2/3) k_Nyquist.
double hs_tail_fraction(const Field& f, const PhysParams& params);

/// Outcome detector over a sampled history.  Needs >= 10 samples to leave
/// "undetermined".  Thresholds (50% decay, 1e-3 trailing increment, 25x
/// growth, 10% tail) are the documented defaults.
DetectorFlags detect_outcome(const std::vector<DiagnosticsRecord>& history,
                             const PhysParams& params,
                             const GroundState& ground);

struct ConservationDrift {
    double mass_drift;   // max relative deviation from the initial value
    double energy_drift;
    bool sponge_active;  // when set, mass loss is reported, not drift
    double mass_loss;    // (M(0) - min M)/M(0), sponge runs
};

ConservationDrift conservation_drift(
    const std::vector<DiagnosticsRecord>& history, bool sponge_active = false);

/// Streams an evolution into DiagnosticsRecords: per-sample norms, virial,
/// rate identity (every rate_every-th sample; 0 disables), Strichartz
/// accumulator, detector flags.  Halts the run on the 25x-growth or
/// overflow branches of the detector (the tail flag is recorded but does
/// not halt, so the growth observation survives to the log).
class DiagnosticsCollector {
public:
    DiagnosticsCollector(PhysParams params, const GroundState* ground,
                         VirialConfig virial, long rate_every = 1,
                         bool sponge_active = false);

    /// SampleCallback-compatible; returns false to request a halt.
    bool sample(const EvolutionState& state);

    void mark_overflow();
    const std::vector<DiagnosticsRecord>& history() const { return history_; }
    std::vector<DiagnosticsRecord>& history() { return history_; }
    const DetectorFlags& flags() const { return flags_; }

private:
    PhysParams params_;
    const GroundState* ground_;
    VirialConfig virial_;
    long rate_every_;
    bool sponge_active_;
    double threshold_kinetic_ = 0.0;
    long samples_seen_ = 0;
    std::vector<DiagnosticsRecord> history_;
    DetectorFlags flags_;
};

} // namespace fnls
