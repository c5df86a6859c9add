#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fnls/admissible.hpp"
#include "fnls/initial_data.hpp"
#include "fnls/params.hpp"
#include "fnls/spectral.hpp"
#include "helpers.hpp"

using namespace fnls;
using namespace fnls::testing;

TEST_CASE("critical exponents") {
    const auto [sc1, pc1] = critical_exponents({2, 0.75, 3.0});
    CHECK(sc1 == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(pc1 == doctest::Approx(8.0 / 3.0).epsilon(1e-15));

    const auto [sc2, pc2] = critical_exponents({3, 0.8, 3.0});
    CHECK(sc2 == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(pc2 == doctest::Approx(3.75).epsilon(1e-14));

    PhysParams pm{2, 0.75, 0.0};
    pm.p = pm.mass_critical_power();
    CHECK(pm.s_critical() == 0.0); // exact for dyadic s
}

TEST_CASE("supercritical window flag") {
    CHECK(PhysParams{2, 0.75, 3.0}.in_supercritical_window());
    CHECK_FALSE(PhysParams{2, 0.75, 2.0}.in_supercritical_window());
    CHECK_FALSE(PhysParams{2, 0.75, 7.1}.in_supercritical_window()); // above 7
    CHECK(PhysParams{2, 0.75, 3.0}.s_in_radial_range()); // 0.75 >= 2/3
    CHECK_FALSE(PhysParams{2, 0.65, 3.0}.s_in_radial_range());
    CHECK_THROWS_AS((PhysParams{2, 0.75, 2.0}.mass_exponent()),
                    std::invalid_argument);
    CHECK_THROWS_AS((PhysParams{2, 1.2, 3.0}.validate()),
                    std::invalid_argument);
}

TEST_CASE("scaling map on descriptors") {
    const PhysParams params{2, 0.75, 3.0};
    InitialData d;
    d.amplitude = 1.3;
    d.width = 2.0;
    d.chirp = 0.05;

    const InitialData same = scaling_map(d, 1.0, params);
    CHECK(same.amplitude == d.amplitude);
    CHECK(same.width == d.width);
    CHECK(same.chirp == d.chirp);

    const InitialData two = scaling_map(d, 2.0, params);
    CHECK(two.width == doctest::Approx(1.0));
    CHECK(two.amplitude ==
          doctest::Approx(1.3 * std::pow(2.0, 2.0 * 0.75 / 2.0)));
    CHECK(two.chirp == doctest::Approx(0.2));

    CHECK_THROWS_AS(scaling_map(d, 0.0, params), std::invalid_argument);
    CHECK_THROWS_AS(scaling_map(d, -1.0, params), std::invalid_argument);
}

TEST_CASE("scale invariance of the critical norms") {
    const PhysParams params{2, 0.75, 3.0};
    const double pc = params.p_critical();
    const double sc = params.s_critical();

    InitialData d;
    d.amplitude = 1.0;
    d.width = 2.0;

    auto g = make_grid(2, 256, 20.0);
    const Field u = sample_initial_data(d, g);
    const Field ul = sample_initial_data(scaling_map(d, 2.0, params), g);

    const double lpc_a = norm_lp(u, pc), lpc_b = norm_lp(ul, pc);
    CHECK(std::abs(lpc_a - lpc_b) / lpc_a < 1e-6);

    // the |k|^{2 s_c} multiplier has a cusp at k = 0, so the discrete
    // Hdot^{s_c} seminorm is only O((pi/L)^{N + 2 s_c}) accurate
    const double hsc_a = seminorm_hs(u, sc), hsc_b = seminorm_hs(ul, sc);
    CHECK(std::abs(hsc_a - hsc_b) / hsc_a < 1e-2);
}

TEST_CASE("diagonal pair is admissible at the defaults") {
    const PhysParams params{2, 0.75, 3.0};
    const AdmissiblePair d = diagonal_pair(params);
    CHECK(d.q == doctest::Approx(14.0 / 3.0).epsilon(1e-15));
    CHECK(d.level == doctest::Approx(0.25));
    CHECK(is_admissible(d.q, d.r, d.level, params));
    // gap arithmetic: (2s + N)/q_c = 2s/(p-1)
    CHECK((2.0 * params.s + params.dim) / d.q ==
          doctest::Approx(2.0 * params.s / (params.p - 1.0)).epsilon(1e-15));
}

TEST_CASE("gap violation rejects") {
    const PhysParams params{2, 0.75, 3.0};
    CHECK_FALSE(is_admissible(2.0, 2.0, 0.0, params)); // 0.75 + 1 != 1
}

TEST_CASE("q = infinity endpoint") {
    const PhysParams params{2, 0.75, 3.0};
    const double theta = params.s_critical();
    const double r = 2.0 * params.dim / (params.dim - 2.0 * theta);
    const double inf = std::numeric_limits<double>::infinity();
    // brute-force both conditions as the oracle
    const double gap = params.dim / r; // 2s/q = 0
    CHECK(std::abs(gap - (0.5 * params.dim - theta)) < 1e-12);
    const double range_rhs = 0.5 * (2.0 * params.dim - 1.0) * (0.5 - 1.0 / r);
    CHECK(0.0 <= range_rhs);
    CHECK(is_admissible(inf, r, theta, params));
}

TEST_CASE("q, r below 2 reject") {
    const PhysParams params{2, 0.75, 3.0};
    CHECK_FALSE(is_admissible(1.5, 10.0, 0.0, params));
}

TEST_CASE("diagonal pair admissible across the sampled window") {
    for (int dim = 2; dim <= 3; ++dim) {
        const double s_lo = static_cast<double>(dim) / (2.0 * dim - 1.0);
        for (int i = 0; i <= 6; ++i) {
            const double s = s_lo + (0.995 - s_lo) * i / 6.0;
            PhysParams pp{dim, s, 3.0};
            const double plo = pp.mass_critical_power();
            const double phi = pp.energy_critical_power();
            for (int j = 1; j <= 6; ++j) {
                pp.p = plo + (phi - plo) * j / 7.0;
                const AdmissiblePair d = diagonal_pair(pp);
                CAPTURE(dim);
                CAPTURE(s);
                CAPTURE(pp.p);
                CHECK(is_admissible(d.q, d.r, d.level, pp));
            }
        }
    }
}

TEST_CASE("gaussian sampling is radial and rejects asymmetry") {
    auto g = make_grid(2, 64, 10.0);
    InitialData d;
    d.amplitude = 2.0;
    d.width = 1.5;
    d.chirp = 0.3;
    const Field f = sample_initial_data(d, g);
    CHECK(radial_asymmetry(f) < 1e-14);
    // chirp leaves |u| radial: max |u| at the center
    CHECK(std::abs(f.values[g->size() / 2 + g->points_per_dim() / 2]) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK_THROWS_AS(
        sample_initial_data(InitialData{InitialData::Family::GroundStateMultiple,
                                        1.0, 1.0, 0.0, 0.5},
                            g, nullptr),
        std::invalid_argument);
}
