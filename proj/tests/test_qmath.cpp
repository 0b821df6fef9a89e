#include <catch2/catch_amalgamated.hpp>

#include "qcorr/qmath.hpp"
#include "test_support.hpp"

using namespace qcorr;
using Catch::Matchers::WithinAbs;

namespace {

double max_diff(const Mat4& a, const Mat4& b) { return (a - b).max_abs(); }
double max_diff2(const Mat2& a, const Mat2& b) { return (a - b).max_abs(); }

}  // namespace

TEST_CASE("tensor basics") {
    const Mat2& id = pauli::identity();
    REQUIRE(max_diff(tensor(id, id), Mat4::identity()) < 1e-15);

    const Mat4 zz = tensor(pauli::sigma_z(), pauli::sigma_z());
    const Mat4 expected = Mat4::diagonal({1.0, -1.0, -1.0, 1.0});
    REQUIRE(max_diff(zz, expected) < 1e-15);

    // (sigma_x x I)|00> = |10>: column 0 of the matrix picks out row 2.
    const Mat4 xi = tensor(pauli::sigma_x(), id);
    REQUIRE(std::abs(xi(2, 0) - cxd(1.0, 0.0)) < 1e-15);
    REQUIRE(std::abs(xi(0, 0)) < 1e-15);
    REQUIRE(std::abs(xi(1, 0)) < 1e-15);
    REQUIRE(std::abs(xi(3, 0)) < 1e-15);
}

TEST_CASE("tensor is bilinear and multiplicative") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        Mat2 a, b, c, d;
        for (std::size_t r = 0; r < 2; ++r)
            for (std::size_t col = 0; col < 2; ++col) {
                a(r, col) = testsup::gaussian(rng);
                b(r, col) = testsup::gaussian(rng);
                c(r, col) = testsup::gaussian(rng);
                d(r, col) = testsup::gaussian(rng);
            }
        // (A x B)(C x D) = AC x BD
        REQUIRE(max_diff(tensor(a, b) * tensor(c, d), tensor(a * c, b * d)) < 1e-12);
        // bilinearity in the first slot
        REQUIRE(max_diff(tensor(a + c, b), tensor(a, b) + tensor(c, b)) < 1e-12);
    }
}

TEST_CASE("partial trace") {
    SECTION("Bell state marginals are maximally mixed") {
        const auto rho = pure_state(kPi / 4);
        const Mat2 mb = partial_trace(rho.matrix(), Keep::B);
        Mat2 half;
        half(0, 0) = 0.5;
        half(1, 1) = 0.5;
        REQUIRE(max_diff2(mb, half) < 1e-12);
        REQUIRE(max_diff2(partial_trace(rho.matrix(), Keep::A), half) < 1e-12);
    }

    SECTION("family marginal equals diag(gamma, 1 - gamma), gamma = (1+D)/2 at theta = pi/4") {
        const auto rho = family_state(StatePoint(kPi / 4, 0.5));
        const Mat2 mb = partial_trace(rho.matrix(), Keep::B);
        REQUIRE_THAT(mb(0, 0).real(), WithinAbs(0.75, 1e-12));
        REQUIRE_THAT(mb(1, 1).real(), WithinAbs(0.25, 1e-12));
        REQUIRE(std::abs(mb(0, 1)) < 1e-12);
    }

    SECTION("product states reduce to their factors") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 20; ++trial) {
            Mat2 p, q;
            for (std::size_t r = 0; r < 2; ++r)
                for (std::size_t c = 0; c < 2; ++c) {
                    p(r, c) = testsup::gaussian(rng);
                    q(r, c) = testsup::gaussian(rng);
                }
            const Mat2 lhs = partial_trace(tensor(p, q), Keep::A);
            const Mat2 expected = q.trace() * p;
            REQUIRE(max_diff2(lhs, expected) < 1e-12);
        }
    }
}

TEST_CASE("hermitian eigenvalues") {
    SECTION("pauli z") {
        const auto v = eigvals_hermitian(pauli::sigma_z());
        REQUIRE_THAT(v[0], WithinAbs(1.0, 1e-14));
        REQUIRE_THAT(v[1], WithinAbs(-1.0, 1e-14));
    }

    SECTION("diagonal 4x4") {
        const auto v = eigvals_hermitian(Mat4::diagonal({0.625, 0.125, 0.125, 0.125}));
        REQUIRE_THAT(v[0], WithinAbs(0.625, 1e-14));
        REQUIRE_THAT(v[1], WithinAbs(0.125, 1e-14));
        REQUIRE_THAT(v[3], WithinAbs(0.125, 1e-14));
    }

    SECTION("pure state spectrum is {1, 0, 0, 0}") {
        const auto v = eigvals_hermitian(pure_state(kPi / 4).matrix());
        REQUIRE_THAT(v[0], WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(v[1], WithinAbs(0.0, 1e-12));
        REQUIRE_THAT(v[3], WithinAbs(0.0, 1e-12));
    }

    SECTION("rejects non-Hermitian input") {
        Mat4 m;
        m(0, 1) = 1.0;  // no conjugate partner
        REQUIRE_THROWS_AS(eigvals_hermitian(m), NotHermitian);
    }

    SECTION("sum equals trace; spectrum invariant under conjugation") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 20; ++trial) {
            const Mat4 h = testsup::random_hermitian(rng);
            const auto v = eigvals_hermitian(h);
            REQUIRE_THAT(v[0] + v[1] + v[2] + v[3], WithinAbs(h.trace().real(), 1e-9));

            const Mat4 u = testsup::random_unitary_4x4(rng);
            const auto w = eigvals_hermitian(u.adjoint() * h * u, 1e-8);
            for (int k = 0; k < 4; ++k) REQUIRE_THAT(w[k], WithinAbs(v[k], 1e-9));
        }
    }

    SECTION("eigensystem reconstructs the matrix") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 10; ++trial) {
            const Mat4 h = testsup::random_hermitian(rng);
            const auto sys = hermitian_eigensystem(h);
            Mat4 rebuilt;
            for (int k = 0; k < 4; ++k)
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c)
                        rebuilt(r, c) += sys.values[k] * sys.vectors(r, k) * std::conj(sys.vectors(c, k));
            REQUIRE(max_diff(rebuilt, h) < 1e-12);
        }
    }
}

TEST_CASE("psd inverse square root 2x2") {
    REQUIRE(max_diff2(psd_inv_sqrt_2x2(Mat2::identity()), Mat2::identity()) < 1e-14);

    const Mat2 d41 = Mat2::diagonal({4.0, 1.0});
    const Mat2 r = psd_inv_sqrt_2x2(d41);
    REQUIRE_THAT(r(0, 0).real(), WithinAbs(0.5, 1e-14));
    REQUIRE_THAT(r(1, 1).real(), WithinAbs(1.0, 1e-14));

    const Mat2 d82 = Mat2::diagonal({0.8, 0.2});
    const Mat2 r2 = psd_inv_sqrt_2x2(d82);
    REQUIRE_THAT(r2(0, 0).real(), WithinAbs(1.118033988750, 1e-10));
    REQUIRE_THAT(r2(1, 1).real(), WithinAbs(2.236067977500, 1e-10));

    SECTION("result squared times input is the identity") {
        std::mt19937_64 rng(41);
        for (int trial = 0; trial < 25; ++trial) {
            Mat2 g;
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) g(i, j) = testsup::gaussian(rng);
            Mat2 p = g * g.adjoint();
            p(0, 0) += 0.05;  // keep well away from singular
            p(1, 1) += 0.05;
            const Mat2 inv_sqrt = psd_inv_sqrt_2x2(p);
            REQUIRE(max_diff2(inv_sqrt * inv_sqrt * p, Mat2::identity()) < 1e-9);
        }
    }

    SECTION("singular input is rejected") {
        REQUIRE_THROWS_AS(psd_inv_sqrt_2x2(Mat2::diagonal({1.0, 1e-15})), SingularMarginal);
    }
}

TEST_CASE("eigenvalues of PSD products") {
    SECTION("identity quarters") {
        const Mat4 q = Mat4::diagonal({0.25, 0.25, 0.25, 0.25});
        const auto v = eigvals_psd_product(q, q);
        for (double x : v) REQUIRE_THAT(x, WithinAbs(1.0 / 16.0, 1e-12));
    }

    SECTION("Bell state against its spin flip") {
        const auto rho = pure_state(kPi / 4);
        const Mat4 yy = tensor(pauli::sigma_y(), pauli::sigma_y());
        const Mat4 flipped = yy * rho.matrix().conjugate() * yy;
        const auto v = eigvals_psd_product(rho.matrix(), flipped);
        REQUIRE_THAT(v[0], WithinAbs(1.0, 1e-10));
        REQUIRE_THAT(v[1], WithinAbs(0.0, 1e-10));
        REQUIRE_THAT(v[3], WithinAbs(0.0, 1e-10));
    }

    SECTION("identity factor returns the sorted diagonal") {
        const auto v = eigvals_psd_product(Mat4::diagonal({0.1, 0.4, 0.2, 0.3}), Mat4::identity());
        REQUIRE_THAT(v[0], WithinAbs(0.4, 1e-12));
        REQUIRE_THAT(v[1], WithinAbs(0.3, 1e-12));
        REQUIRE_THAT(v[2], WithinAbs(0.2, 1e-12));
        REQUIRE_THAT(v[3], WithinAbs(0.1, 1e-12));
    }

    SECTION("rejects indefinite factors") {
        REQUIRE_THROWS_AS(eigvals_psd_product(Mat4::diagonal({1.0, -0.1, 0.05, 0.05}), Mat4::identity()),
                          NotPSD);
    }

    SECTION("matches the characteristic-polynomial oracle on random PSD pairs") {
        std::mt19937_64 rng(53);
        for (int trial = 0; trial < 30; ++trial) {
            const Mat4 p = testsup::random_density_matrix(rng).matrix();
            const Mat4 q = testsup::random_density_matrix(rng).matrix();
            const auto fast = eigvals_psd_product(p, q);
            const auto oracle = testsup::charpoly_eigenvalues_4x4(p * q);
            for (int k = 0; k < 4; ++k) REQUIRE_THAT(fast[k], WithinAbs(oracle[k], 1e-8));
        }
    }
}

TEST_CASE("symmetric 3x3 eigensystem") {
    std::mt19937_64 rng(61);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 20; ++trial) {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = r; c < 3; ++c) m(r, c) = m(c, r) = g(rng);
        const auto sys = sym3_eigensystem(m);
        REQUIRE(sys.values[0] >= sys.values[1]);
        REQUIRE(sys.values[1] >= sys.values[2]);
        // orthonormal vectors reconstructing m
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const double expected = a == b ? 1.0 : 0.0;
                REQUIRE_THAT(dot(sys.vectors[a], sys.vectors[b]), WithinAbs(expected, 1e-12));
            }
        Mat3 rebuilt;
        for (int k = 0; k < 3; ++k)
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    rebuilt(r, c) += sys.values[k] * sys.vectors[k][r] * sys.vectors[k][c];
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) REQUIRE_THAT(rebuilt(r, c), WithinAbs(m(r, c), 1e-11));
    }
}
