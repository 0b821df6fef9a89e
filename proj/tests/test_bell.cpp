#include <catch2/catch_amalgamated.hpp>

#include "qcorr/bell.hpp"
#include "qcorr/entanglement.hpp"
#include "test_support.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;

namespace {

const double kRoot2 = std::sqrt(2.0);

ChshSettings textbook_settings() {
    ChshSettings st;
    st.alice = {Vec3{1, 0, 0}, Vec3{0, 0, 1}};
    const double r = 1.0 / kRoot2;
    st.bob = {Vec3{r, 0, r}, Vec3{r, 0, -r}};
    return st;
}

}  // namespace

TEST_CASE("Horodecki S") {
    REQUIRE_THAT(horodecki_S(pure_state(kPi / 4)), WithinAbs(2.0 * kRoot2, 1e-12));
    REQUIRE_THAT(horodecki_S(family_state(StatePoint(kPi / 4, 0.2))), WithinAbs(2.262741699797, 1e-10));
    REQUIRE_THAT(horodecki_S(family_state(StatePoint(kPi / 4, 1.0))), WithinAbs(2.0, 1e-12));
}

TEST_CASE("closed-form Bell parameter") {
    SECTION("Bell state attains the Tsirelson bound") {
        REQUIRE_THAT(bell_S_closed(StatePoint(kPi / 4, 0.0)).value, WithinAbs(2.0 * kRoot2, 1e-12));
    }

    SECTION("S = 2 exactly at D = 1 - 1/sqrt(2), on the xy branch") {
        const BellClosed b = bell_S_closed(StatePoint(kPi / 4, 1.0 - 1.0 / kRoot2));
        REQUIRE_THAT(b.value, WithinAbs(2.0, 1e-12));
        REQUIRE(b.branch == BellBranch::xy);
    }

    SECTION("deep damping lands on the xz branch") {
        const BellClosed b = bell_S_closed(StatePoint(kPi / 4, 0.8));
        REQUIRE_THAT(b.value, WithinAbs(1.417603611804, 1e-9));
        REQUIRE(b.branch == BellBranch::xz);
    }

    SECTION("matches horodecki_S on a grid") {
        for (int it = 1; it < 30; ++it)
            for (int id = 0; id < 30; ++id) {
                const StatePoint p((kPi / 2) * it / 30.0, id / 29.0);
                REQUIRE_THAT(bell_S_closed(p).value, WithinAbs(horodecki_S(family_state(p)), 1e-9));
            }
    }

    SECTION("never exceeds the Tsirelson bound") {
        std::mt19937_64 rng(83);
        for (int trial = 0; trial < 50; ++trial)
            REQUIRE(horodecki_S(testsup::random_density_matrix(rng)) <= 2.0 * kRoot2 + 1e-9);
    }
}

TEST_CASE("chsh_value") {
    SECTION("textbook settings on the Bell state") {
        REQUIRE_THAT(chsh_value(pure_state(kPi / 4), textbook_settings()),
                     WithinAbs(2.0 * kRoot2, 1e-12));
    }

    SECTION("degenerate settings reduce to twice one correlator") {
        std::mt19937_64 rng(89);
        for (int trial = 0; trial < 10; ++trial) {
            const auto rho = testsup::random_density_matrix(rng);
            ChshSettings st;
            st.alice = {testsup::random_unit_vec3(rng), testsup::random_unit_vec3(rng)};
            const Vec3 b = testsup::random_unit_vec3(rng);
            st.bob = {b, b};
            const double expected =
                2.0 * dot(st.alice[0], correlation_data(rho).T.apply(b));
            REQUIRE_THAT(chsh_value(rho, st), WithinAbs(expected, 1e-12));
            REQUIRE(std::abs(chsh_value(rho, st)) <= 2.0 + 1e-9);
        }
    }

    SECTION("T-matrix route equals the joint-probability route") {
        std::mt19937_64 rng(97);
        for (int trial = 0; trial < 15; ++trial) {
            const auto rho = testsup::random_density_matrix(rng);
            ChshSettings st;
            st.alice = {testsup::random_unit_vec3(rng), testsup::random_unit_vec3(rng)};
            st.bob = {testsup::random_unit_vec3(rng), testsup::random_unit_vec3(rng)};
            const double via_probs =
                testsup::correlator_from_probabilities(rho, st.alice[0], st.bob[0]) +
                testsup::correlator_from_probabilities(rho, st.alice[0], st.bob[1]) +
                testsup::correlator_from_probabilities(rho, st.alice[1], st.bob[0]) -
                testsup::correlator_from_probabilities(rho, st.alice[1], st.bob[1]);
            REQUIRE_THAT(chsh_value(rho, st), WithinAbs(via_probs, 1e-10));
        }
    }

    SECTION("rejects non-unit settings") {
        ChshSettings st = textbook_settings();
        st.bob[0] = Vec3{0, 0, 2};
        REQUIRE_THROWS_AS(chsh_value(pure_state(0.3), st), NotUnitVector);
    }
}

TEST_CASE("fixed settings for theta = pi/4") {
    SECTION("scenario 1 directions") {
        const ChshSettings st = appendix_c_settings(0.2);
        REQUIRE_THAT(st.bob[0].x, WithinAbs(kRoot2 / 2, 1e-12));
        REQUIRE_THAT(st.bob[0].y, WithinAbs(-kRoot2 / 2, 1e-12));
        REQUIRE_THAT(st.bob[0].z, WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(st.alice[1].y, WithinAbs(1.0, 1e-12));  // scenario 1 uses {x, y}
    }

    SECTION("scenario 2 angle") {
        const ChshSettings st = appendix_c_settings(0.8);
        const double chi1 = std::atan2(st.bob[0].x, st.bob[0].z);
        REQUIRE_THAT(chi1, WithinAbs(0.286060081485, 1e-9));
        REQUIRE_THAT(st.alice[1].z, WithinAbs(1.0, 1e-12));  // scenario 2 uses {x, z}
    }

    SECTION("the D = 0.5 tie goes to scenario 1") {
        REQUIRE_THAT(appendix_c_settings(0.5).alice[1].y, WithinAbs(1.0, 1e-12));
    }

    SECTION("reproduces horodecki_S across the damping range") {
        for (int k = 1; k <= 9; ++k) {
            const double d = k / 10.0;
            const auto rho = family_state(StatePoint(kPi / 4, d));
            REQUIRE_THAT(chsh_value(rho, appendix_c_settings(d)), WithinAbs(horodecki_S(rho), 1e-9));
        }
    }

    SECTION("domain validation") {
        REQUIRE_THROWS_AS(appendix_c_settings(-0.01), DomainError);
        REQUIRE_THROWS_AS(appendix_c_settings(1.01), DomainError);
    }
}

TEST_CASE("optimal settings construction") {
    SECTION("recovers the maximal violation for the Bell state") {
        const auto rho = pure_state(kPi / 4);
        REQUIRE_THAT(chsh_value(rho, optimal_chsh_settings(rho)), WithinAbs(2.0 * kRoot2, 1e-9));
    }

    SECTION("matches horodecki_S at (pi/4, 0.8)") {
        const auto rho = family_state(StatePoint(kPi / 4, 0.8));
        REQUIRE_THAT(chsh_value(rho, optimal_chsh_settings(rho)), WithinAbs(1.417603611804, 1e-9));
    }

    SECTION("shallow damping puts the settings in the xy plane") {
        const auto st = optimal_chsh_settings(family_state(StatePoint(kPi / 4, 0.2)));
        for (const Vec3& v : st.bob) REQUIRE(std::abs(v.z) < 1e-9);
        for (const Vec3& v : st.alice) REQUIRE(std::abs(v.z) < 1e-9);
    }

    SECTION("equals horodecki_S on random states") {
        std::mt19937_64 rng(101);
        for (int trial = 0; trial < 100; ++trial) {
            const auto rho = testsup::random_density_matrix(rng);
            REQUIRE_THAT(chsh_value(rho, optimal_chsh_settings(rho)),
                         WithinAbs(horodecki_S(rho), 1e-9));
        }
    }

    SECTION("degenerate correlation falls back to canonical xz settings") {
        // The maximally mixed state has T = 0.
        const auto mixed = DensityMatrix::from_matrix(Mat4::diagonal({0.25, 0.25, 0.25, 0.25}));
        const ChshSettings st = optimal_chsh_settings(mixed);
        REQUIRE_THAT(st.alice[0].x, WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(st.alice[1].z, WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(chsh_value(mixed, st), WithinAbs(0.0, 1e-12));
    }
}

TEST_CASE("Bell parameter is non-monotonic along theta = pi/4") {
    const auto S = [](double d) { return bell_S_closed(StatePoint(kPi / 4, d)).value; };

    SECTION("decreasing on [0.3, 0.65], increasing on [0.67, 1.0]") {
        for (int k = 0; k < 35; ++k) {
            const double d = 0.3 + k * 0.01;
            REQUIRE(S(d + 0.01) <= S(d) + 1e-12);
        }
        for (int k = 0; k < 33; ++k) {
            const double d = 0.67 + k * 0.01;
            REQUIRE(S(d + 0.01) >= S(d) - 1e-12);
        }
    }

    SECTION("interior minimum near D = 0.656") {
        double lo = 0.5, hi = 0.9;
        for (int iter = 0; iter < 80; ++iter) {
            const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
            (S(m1) < S(m2) ? hi : lo) = (S(m1) < S(m2) ? m2 : m1);
        }
        REQUIRE_THAT(0.5 * (lo + hi), WithinAbs(0.656, 0.01));
    }
}

TEST_CASE("Bell nonlocality implies entanglement on the family") {
    for (int it = 1; it < 40; ++it)
        for (int id = 0; id < 40; ++id) {
            const StatePoint p((kPi / 2) * it / 40.0, id / 39.0);
            if (bell_S_closed(p).value > 2.0) REQUIRE(concurrence_closed(p) > 0.0);
        }
}
