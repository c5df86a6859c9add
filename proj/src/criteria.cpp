#include "fnls/criteria.hpp"

#include <cmath>

#include "fnls/spectral.hpp"

namespace fnls {

double mass(const Field& f) {
    const double n2 = norm_l2(f);
    return n2 * n2;
}

double energy(const Field& f, const PhysParams& params) {
    const double hs = seminorm_hs(f, params.s);
    const double pot = norm_lp(f, params.p + 1.0);
    return 0.5 * hs * hs - std::pow(pot, params.p + 1.0) / (params.p + 1.0);
}

InvariantProducts invariant_products(const Field& f, const PhysParams& params) {
    const double mexp = params.mass_exponent(); // throws when s_c <= 0
    const double m = mass(f);
    const double hs = seminorm_hs(f, params.s);
    const double factor = m > 0.0 ? std::pow(m, mexp) : 0.0;
    const double pot = std::pow(norm_lp(f, params.p + 1.0), params.p + 1.0);
    return {factor * (0.5 * hs * hs - pot / (params.p + 1.0)),
            factor * hs * hs};
}

Thresholds thresholds(const GroundState& ground, const PhysParams& params) {
    const double mexp = params.mass_exponent();
    const double factor = std::pow(ground.mass, mexp);
    Thresholds t{factor * ground.energy, factor * ground.kinetic};

    // closed-form cross-checks (Lemma-type product identities)
    const double n = params.dim, s = params.s, p = params.p;
    const double denom = 4.0 * s - (n - 2.0 * s) * (p - 1.0);
    const double q2ssc = std::pow(ground.mass, s / params.s_critical());
    const double tk_closed = n * (p - 1.0) / denom * q2ssc;
    if (std::abs(tk_closed / t.kinetic - 1.0) > 1e-3)
        throw CertificationFailed("inconsistent ground state");
    return t;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::ScatterPredicted: return "ScatterPredicted";
        case Verdict::BlowupPredicted: return "BlowupPredicted";
        case Verdict::Boundary: return "Boundary";
        default: return "Undetermined";
    }
}

ThresholdReport classify_products(const InvariantProducts& prod, bool radial,
                                  const PhysParams& params,
                                  const GroundState& ground) {
    const Thresholds thr = thresholds(ground, params);
    ThresholdReport rep;
    rep.product_energy = prod.product_energy;
    rep.product_kinetic = prod.product_kinetic;
    rep.threshold_energy = thr.energy;
    rep.threshold_kinetic = thr.kinetic;
    rep.hypothesis_flags = {radial, params.s_in_radial_range(),
                            params.dim >= 2, params.in_supercritical_window()};

    const double band = 1e-6;
    const auto near = [band](double a, double b) {
        return std::abs(a - b) <= band * std::max(std::abs(a), std::abs(b));
    };
    if (near(rep.product_energy, rep.threshold_energy) ||
        near(rep.product_kinetic, rep.threshold_kinetic)) {
        rep.verdict = Verdict::Boundary;
        return rep;
    }
    const bool e_below = rep.product_energy < rep.threshold_energy;
    const bool k_below = rep.product_kinetic < rep.threshold_kinetic;
    if (e_below && k_below) {
        if (rep.all_hypotheses()) {
            rep.verdict = Verdict::ScatterPredicted;
        } else {
            rep.verdict = Verdict::Undetermined;
            rep.note = "outside theorem hypotheses";
        }
    } else if (e_below && !k_below) {
        rep.verdict = Verdict::BlowupPredicted;
        if (!rep.hypothesis_flags.window) {
            rep.verdict = Verdict::Undetermined;
            rep.note = "outside supercritical window";
        }
    } else {
        rep.verdict = Verdict::Undetermined;
        rep.note = "energy product above threshold";
    }
    return rep;
}

ThresholdReport classify(const Field& f, const PhysParams& params,
                         const GroundState& ground) {
    const bool radial = lattice_symmetry_asymmetry(f) <= 1e-12;
    return classify_products(invariant_products(f, params), radial, params,
                             ground);
}

double invariant_set_f(double y, const PhysParams& params,
                       const GroundState& ground) {
    const double cgn = gn_constant_closed_form(ground, params);
    return 0.5 * y * y -
           cgn / (params.p + 1.0) * std::pow(y, params.p_critical());
}

double invariant_set_f_derivative(double y, const PhysParams& params,
                                  const GroundState& ground) {
    const double cgn = gn_constant_closed_form(ground, params);
    const double pc = params.p_critical();
    return y - cgn * pc / (params.p + 1.0) * std::pow(y, pc - 1.0);
}

StationaryPoints invariant_set_stationary_points(const PhysParams& params,
                                                 const GroundState& ground) {
    const double mexp = params.mass_exponent();
    const double y1 =
        std::pow(ground.mass, 0.5 * mexp) * std::sqrt(ground.kinetic);
    return {0.0, y1, invariant_set_f(y1, params, ground)};
}

CoercivityGap coercivity_gap(const Field& f, const PhysParams& params,
                             const GroundState& ground) {
    const double n = params.dim, s = params.s, p = params.p;
    const double hs2 = std::pow(seminorm_hs(f, s), 2);
    const double pot = std::pow(norm_lp(f, p + 1.0), p + 1.0);

    CoercivityGap out;
    out.gap = hs2 - n * (p - 1.0) / (2.0 * s * (p + 1.0)) * pot;

    const double mexp = params.mass_exponent();
    const double m = mass(f);
    const double y1 =
        std::pow(ground.mass, 0.5 * mexp) * std::sqrt(ground.kinetic);
    const double y =
        m > 0.0 ? std::pow(m, 0.5 * mexp) * std::sqrt(hs2) / y1 : 0.0;
    out.ratio_y = y;
    if (y > 0.0) {
        const double g = y * y - std::pow(y, params.p_critical());
        out.lower_bound = g * hs2 / (y * y);
    } else {
        out.lower_bound = 0.0;
    }
    out.inside_invariant_set = (y < 1.0);
    return out;
}

} // namespace fnls
