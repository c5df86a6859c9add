#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fnls/diagnostics.hpp"
#include "fnls/spectral.hpp"
#include "fnls/virial_cutoff.hpp"
#include "helpers.hpp"

using namespace fnls;
using namespace fnls::testing;

namespace {

const PhysParams kParams{2, 0.75, 3.0};

Field chirped_gaussian(const GridPtr& grid, double amplitude, double width,
                       double chirp, const double* kvec = nullptr) {
    Field f(grid);
    std::size_t idx[3];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid->unflatten(i, idx);
        double r2 = 0.0, kx = 0.0;
        for (int d = 0; d < grid->dim(); ++d) {
            const double x = grid->coord(idx[d]);
            r2 += x * x;
            if (kvec) kx += kvec[d] * x;
        }
        f.values[i] = amplitude * std::exp(-r2 / (width * width)) *
                      std::polar(1.0, chirp * r2 + kx);
    }
    return f;
}

} // namespace

TEST_CASE("cutoff profile invariants") {
    // phi'' <= 2 everywhere, C^1 matching at both bridge ends, phi' -> 0
    double max_pp = -1e300;
    for (int i = 0; i <= 20000; ++i) {
        const double r = 3.0 * i / 20000.0;
        max_pp = std::max(max_pp, cutoff::d2phi(r));
        CHECK(cutoff::d2phi(r) <= 2.0 + 1e-14);
        CHECK(cutoff::dphi_over_r(std::max(r, 1e-9)) <= 2.0 + 1e-14);
    }
    CHECK(max_pp == doctest::Approx(2.0));
    CHECK(cutoff::dphi(2.0) == 0.0);
    CHECK(cutoff::d2phi(2.0) == 0.0);
    CHECK(cutoff::d3phi(2.0 - 1e-12) == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(cutoff::dphi(1.0) == 2.0);
    CHECK(cutoff::d2phi(1.0) == 2.0);
    // interior Laplacians
    CHECK(cutoff::lap_phi(0.0, 2) == 4.0);
    CHECK(cutoff::lap_phi(0.5, 3) == 6.0);
    CHECK(cutoff::bilap_phi(0.5, 2) == 0.0);
    CHECK(cutoff::bilap_phi(2.5, 2) == 0.0);
}

TEST_CASE("resolvent field on a single mode") {
    auto g = make_grid(2, 64, 10.0);
    const int mode[3] = {3, 61, 0};
    Field f = plane_wave(g, mode);
    const double k2 = plane_wave_k2(g, mode);
    const double m = 1.7;
    Field um = resolvent_field(f, m, kParams);
    const double cs = std::sqrt(std::sin(M_PI * kParams.s) / M_PI);
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(
            worst, std::abs(um.values[i] - cs / (k2 + m) * f.values[i]));
    CHECK(worst < 1e-12);

    CHECK_THROWS_AS(resolvent_field(f, 0.0, kParams), std::invalid_argument);
    CHECK_THROWS_AS(resolvent_field(f, -2.0, kParams), std::invalid_argument);

    // m -> infinity: ||u_m||_2 * m -> c_s ||f||_2
    const double big = 1e6;
    Field ub = resolvent_field(f, big, kParams);
    CHECK(norm_l2(ub) * big ==
          doctest::Approx(cs * norm_l2(f)).epsilon(1e-2));
}

TEST_CASE("m-quadrature reproduces the single-mode closed form") {
    // int_0^inf m^s a/(a+m)^2 dm = a^s pi s / sin(pi s)
    const double s = 0.75, a = 1.7;
    const double exact = std::pow(a, s) * M_PI * s / std::sin(M_PI * s);

    const QuadratureRule gj = resolvent_m_rule(200, s);
    double acc = 0.0;
    for (std::size_t i = 0; i < gj.nodes.size(); ++i)
        acc += gj.weights[i] * a / std::pow(a + gj.nodes[i], 2);
    CHECK(std::abs(acc / exact - 1.0) < 1e-12);

    // the tan^2 substitution keeps an endpoint singularity for s > 1/2 and
    // is retained only as a documented reference rule
    const QuadratureRule tl = resolvent_m_rule(200, s, MRuleKind::TanLegendre);
    double acc2 = 0.0;
    for (std::size_t i = 0; i < tl.nodes.size(); ++i)
        acc2 += tl.weights[i] * a / std::pow(a + tl.nodes[i], 2);
    CHECK(std::abs(acc2 / exact - 1.0) > 1e-4);
    CHECK(std::abs(acc2 / exact - 1.0) < 1e-2);
}

TEST_CASE("resolvent identity") {
    auto g = make_grid(2, 64, 10.0);
    const QuadratureRule rule = resolvent_m_rule(200, kParams.s);

    SUBCASE("single mode") {
        const int mode[3] = {4, 2, 0};
        Field f = plane_wave(g, mode);
        const ResolventIdentity r = resolvent_identity_check(f, kParams, rule);
        CHECK(r.relerr < 1e-6);
    }

    SUBCASE("gaussian, s = 0.5, N = 1, 200 nodes") {
        const PhysParams p1{1, 0.5, 4.0};
        auto g1 = make_grid(1, 512, 16.0);
        Field f = gaussian_field(g1, 1.0, 1.0);
        const QuadratureRule rule1 = resolvent_m_rule(200, p1.s);
        const ResolventIdentity r = resolvent_identity_check(f, p1, rule1);
        CHECK(r.relerr < 1e-3);
    }

    SUBCASE("zero field") {
        Field f(g);
        const ResolventIdentity r = resolvent_identity_check(f, kParams, rule);
        CHECK(r.lhs == 0.0);
        CHECK(r.rhs == 0.0);
        CHECK(r.relerr == 0.0);
    }
}

TEST_CASE("localized virial") {
    auto g = make_grid(2, 128, 12.0);
    const VirialConfig config = make_virial_config(4.0, 64, kParams.s);

    SUBCASE("real fields give zero") {
        Field f = gaussian_field(g, 1.3, 1.5);
        const double j = localized_virial(f, config);
        CHECK(std::abs(j) < 1e-12 * std::pow(norm_l2(f), 2));
    }

    SUBCASE("global phase invariance") {
        Field f = chirped_gaussian(g, 1.0, 1.5, 0.2);
        const double j0 = localized_virial(f, config);
        Field rot = f;
        for (auto& z : rot.values) z *= std::polar(1.0, 1.234);
        CHECK(localized_virial(rot, config) ==
              doctest::Approx(j0).epsilon(1e-12));
    }

    SUBCASE("matches the defining integral with analytic gradients") {
        // u = g(r) e^{i k.x} e^{i b r^2}, interior-supported: the oracle
        // evaluates 2 Im conj(u) grad(phi_R).grad(u) pointwise from the
        // closed-form gradient and sums with the rectangle rule.
        const double kvec[2] = {g->wavenumbers()[2], g->wavenumbers()[3]};
        for (double b : {0.0, 0.35}) {
            Field u = chirped_gaussian(g, 1.0, 1.2, b, kvec);
            const double spectral = localized_virial(u, config);

            KahanSum oracle;
            std::size_t idx[3];
            const double w2 = 1.2 * 1.2;
            for (std::size_t i = 0; i < u.size(); ++i) {
                g->unflatten(i, idx);
                const double x[2] = {g->coord(idx[0]), g->coord(idx[1])};
                const double r = std::hypot(x[0], x[1]);
                const double pr = config.radius * cutoff::dphi(r / config.radius);
                // Im(conj(u) du_d) = |u|^2 (k_d + 2 b x_d)
                const double a2 = std::norm(u.values[i]);
                double radial_im = 0.0;
                if (r > 0.0)
                    radial_im = a2 * ((kvec[0] + 2.0 * b * x[0]) * x[0] / r +
                                      (kvec[1] + 2.0 * b * x[1]) * x[1] / r);
                oracle.add(pr * radial_im);
                (void)w2;
            }
            const double reference =
                2.0 * g->cell_volume() * oracle.value();
            CAPTURE(b);
            if (b == 0.0) {
                // first-moment form: vanishes for a centered radial envelope
                CHECK(std::abs(reference) < 1e-10);
                CHECK(std::abs(spectral) < 1e-8);
            } else {
                CHECK(std::abs(spectral - reference) <
                      1e-8 * std::abs(reference));
            }
        }
    }
}

TEST_CASE("virial rate identity") {
    auto g = make_grid(2, 128, 12.0);

    SUBCASE("zero field") {
        Field f(g);
        const VirialConfig config = make_virial_config(4.0, 32, kParams.s);
        const VirialRate r = virial_rate(f, kParams, config);
        CHECK(r.identity == 0.0);
        CHECK(r.main_term == 0.0);
        CHECK(r.lower_bound == 0.0);
    }

    SUBCASE("exact decomposition into correction integrals") {
        Field f = chirped_gaussian(g, 1.0, 1.5, 0.3);
        const VirialConfig config = make_virial_config(4.0, 64, kParams.s);
        const VirialRate r = virial_rate(f, kParams, config);
        const double recon = r.main_term_quad - r.corr_hessian -
                             r.corr_biharmonic - r.corr_potential;
        CHECK(std::abs(recon - r.identity) < 1e-10 * std::abs(r.identity));
        // the quadrature route agrees with the closed-form kinetic term
        CHECK(std::abs(r.main_term_quad - r.main_term) <
              1e-6 * std::abs(r.main_term));
        // hessian deficit is nonnegative by the phi'' <= 2 construction
        CHECK(r.corr_hessian >= 0.0);
    }

    SUBCASE("corrections shrink as R doubles (interior-supported data)") {
        Field f = chirped_gaussian(g, 1.0, 1.0, 0.3);
        const VirialConfig c1 = make_virial_config(3.0, 64, kParams.s);
        const VirialConfig c2 = make_virial_config(6.0, 64, kParams.s);
        const VirialRate r1 = virial_rate(f, kParams, c1);
        const VirialRate r2 = virial_rate(f, kParams, c2);
        const double d1 = std::abs(r1.identity - r1.main_term);
        const double d2 = std::abs(r2.identity - r2.main_term);
        CHECK(d2 < 0.5 * d1);
        CHECK(std::abs(r2.identity - r2.main_term) <
              0.05 * std::abs(r2.main_term));
    }

    SUBCASE("matches centered differences along a trajectory") {
        Field u = chirped_gaussian(g, 0.9, 1.5, 0.1);
        const VirialConfig config = make_virial_config(4.0, 64, kParams.s);
        EvolveOptions opt;
        opt.dt = 1e-3;

        std::vector<double> js;
        std::vector<Field> fields;
        EvolutionState st{0.0, u, 0, opt.dt};
        for (int n = 0; n <= 40; ++n) {
            if (n % 10 == 0) {
                js.push_back(localized_virial(st.field, config));
                fields.push_back(st.field);
            }
            st = strang_step(st, kParams, opt);
        }
        const double fd = (js[2] - js[0]) / (2.0 * 10.0 * opt.dt);
        const double id = virial_rate(fields[1], kParams, config).identity;
        CHECK(std::abs(fd - id) < 1e-2 * std::abs(id));
    }
}

TEST_CASE("strichartz accumulation") {
    auto g = make_grid(2, 32, 5.0);
    Field zero(g);
    CHECK(strichartz_accumulate(0.0, zero, 0.1, kParams) == 0.0);

    // constant-in-time profile: accum(T) = T^{1/q_c} ||f||_{r_c}
    Field f = gaussian_field(g, 1.2, 1.0);
    const double qc = (kParams.p - 1.0) * (kParams.dim + 2.0 * kParams.s) /
                      (2.0 * kParams.s);
    const double nrc = norm_lp(f, qc);
    double acc = 0.0;
    const double dt = 0.05;
    for (int i = 0; i < 20; ++i) {
        const double prev = acc;
        acc = strichartz_accumulate(acc, f, dt, kParams);
        CHECK(acc >= prev);
    }
    CHECK(acc == doctest::Approx(std::pow(1.0, 1.0 / qc) * nrc).epsilon(1e-12));

    CHECK_THROWS_AS(strichartz_accumulate(-1.0, f, 0.1, kParams),
                    std::invalid_argument);
}

TEST_CASE("spectral tail fraction") {
    auto g = make_grid(2, 64, 10.0);
    CHECK(hs_tail_fraction(gaussian_field(g, 1.0, 2.0), kParams) < 1e-10);
    const int mode[3] = {30, 31, 0}; // near Nyquist
    CHECK(hs_tail_fraction(plane_wave(g, mode), kParams) ==
          doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("outcome detector on synthetic histories") {
    GroundState gs{};
    gs.mass = 1.0;
    gs.kinetic = 1.0; // T_K = 1 under the default exponent

    SUBCASE("too few samples stay undetermined") {
        std::vector<DiagnosticsRecord> h(5);
        const DetectorFlags f = detect_outcome(h, kParams, gs);
        CHECK(f.undetermined);
        CHECK_FALSE(f.consistent_with_scattering);
        CHECK_FALSE(f.blowup_indicated);
    }

    SUBCASE("all-zero history is undetermined") {
        std::vector<DiagnosticsRecord> h(12);
        for (std::size_t i = 0; i < h.size(); ++i) h[i].time = 0.1 * i;
        const DetectorFlags f = detect_outcome(h, kParams, gs);
        CHECK(f.undetermined);
    }

    SUBCASE("dispersive signature reads consistent-with-scattering") {
        std::vector<DiagnosticsRecord> h(20);
        for (std::size_t i = 0; i < h.size(); ++i) {
            auto& r = h[i];
            r.time = i;
            r.mass = 0.5;
            r.hs_seminorm_sq = 0.2 / (1.0 + i);
            r.lp1_norm = 1.0 / (1.0 + i); // decays past 50%
            r.strichartz_accum = 1.0 - std::exp(-1.0 * i);
        }
        const DetectorFlags f = detect_outcome(h, kParams, gs);
        CHECK(f.consistent_with_scattering);
        CHECK_FALSE(f.blowup_indicated);
        CHECK_FALSE(f.undetermined);
    }

    SUBCASE("25x seminorm growth reads blowup") {
        std::vector<DiagnosticsRecord> h(15);
        for (std::size_t i = 0; i < h.size(); ++i) {
            auto& r = h[i];
            r.time = 0.01 * i;
            r.mass = 0.5;
            r.hs_seminorm_sq = 0.1 * std::exp(0.3 * i);
            r.lp1_norm = r.hs_seminorm_sq;
            r.strichartz_accum = 0.01 * i;
        }
        h.back().hs_seminorm_sq = 30.0 * h.front().hs_seminorm_sq;
        const DetectorFlags f = detect_outcome(h, kParams, gs);
        CHECK(f.blowup_indicated);
        CHECK_FALSE(f.consistent_with_scattering);
    }

    SUBCASE("tail flag alone reads blowup (resolution-limited)") {
        std::vector<DiagnosticsRecord> h(12);
        for (std::size_t i = 0; i < h.size(); ++i) {
            h[i].time = 0.01 * i;
            h[i].mass = 0.5;
            h[i].hs_seminorm_sq = 0.1;
            h[i].lp1_norm = 0.1;
        }
        h[8].flags.tail_exceeded = true;
        const DetectorFlags f = detect_outcome(h, kParams, gs);
        CHECK(f.blowup_indicated);
        CHECK(f.tail_exceeded);
    }
}

TEST_CASE("conservation drift") {
    std::vector<DiagnosticsRecord> h(2);
    h[0].mass = 2.0;
    h[0].energy = 0.3;
    h[1] = h[0];
    h[1].time = 1.0;
    const ConservationDrift d = conservation_drift(h);
    CHECK(d.mass_drift == 0.0);
    CHECK(d.energy_drift == 0.0);

    std::vector<DiagnosticsRecord> one(1);
    CHECK_THROWS_AS(conservation_drift(one), std::invalid_argument);

    // sponge: decreasing mass reported as loss, not drift
    std::vector<DiagnosticsRecord> hs(4);
    for (int i = 0; i < 4; ++i) {
        hs[i].time = i;
        hs[i].mass = 2.0 - 0.2 * i;
        hs[i].energy = 0.3;
    }
    const ConservationDrift ds = conservation_drift(hs, true);
    CHECK(ds.sponge_active);
    CHECK(ds.mass_loss == doctest::Approx(0.3));
}

TEST_CASE("records are invariant under a global phase") {
    auto g = make_grid(2, 64, 10.0);
    const VirialConfig config = make_virial_config(10.0 / 3.0, 32, kParams.s);
    Field u = chirped_gaussian(g, 0.8, 1.3, 0.25);
    Field v = u;
    for (auto& z : v.values) z *= std::polar(1.0, 0.987);

    DiagnosticsCollector ca(kParams, nullptr, config, 1);
    DiagnosticsCollector cb(kParams, nullptr, config, 1);
    EvolutionState sa{0.0, u, 0, 1e-3}, sb{0.0, v, 0, 1e-3};
    ca.sample(sa);
    cb.sample(sb);
    const DiagnosticsRecord& ra = ca.history()[0];
    const DiagnosticsRecord& rb = cb.history()[0];
    CHECK(ra.mass == doctest::Approx(rb.mass).epsilon(1e-13));
    CHECK(ra.energy == doctest::Approx(rb.energy).epsilon(1e-13));
    CHECK(ra.hs_seminorm_sq ==
          doctest::Approx(rb.hs_seminorm_sq).epsilon(1e-13));
    CHECK(ra.lp1_norm == doctest::Approx(rb.lp1_norm).epsilon(1e-13));
    CHECK(ra.virial == doctest::Approx(rb.virial).epsilon(1e-12));
    CHECK(ra.virial_rate_id ==
          doctest::Approx(rb.virial_rate_id).epsilon(1e-12));
    CHECK(ra.coercivity_gap ==
          doctest::Approx(rb.coercivity_gap).epsilon(1e-13));
}

TEST_CASE("collector fills centered differences retroactively") {
    auto g = make_grid(2, 64, 10.0);
    const VirialConfig config = make_virial_config(10.0 / 3.0, 32, kParams.s);
    DiagnosticsCollector col(kParams, nullptr, config, 0);

    Field u = chirped_gaussian(g, 0.6, 1.3, 0.2);
    EvolveOptions opt;
    opt.dt = 1e-3;
    opt.sample_every = 10;
    evolve(u, kParams, 0.05, opt,
           [&](const EvolutionState& st) { return col.sample(st); });

    const auto& h = col.history();
    REQUIRE(h.size() >= 4);
    CHECK(std::isnan(h.front().virial_rate_fd));
    CHECK(std::isnan(h.back().virial_rate_fd));
    for (std::size_t i = 1; i + 1 < h.size(); ++i) {
        CHECK_FALSE(std::isnan(h[i].virial_rate_fd));
        const double fd =
            (h[i + 1].virial - h[i - 1].virial) / (h[i + 1].time - h[i - 1].time);
        CHECK(h[i].virial_rate_fd == doctest::Approx(fd).epsilon(1e-14));
    }
    // rate identity disabled (rate_every = 0)
    for (const auto& r : h) CHECK(std::isnan(r.virial_rate_id));
}
