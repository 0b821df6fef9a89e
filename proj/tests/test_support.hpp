#pragma once

// Shared test-only machinery: seeded random states and unitaries, and
// independent oracles (characteristic-polynomial eigenvalues, trace distance,
// probability-route correlators) kept apart from the implementation paths
// they check.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

namespace testsup {

using qcorr::cxd;
using qcorr::Mat2;
using qcorr::Mat4;
using qcorr::Vec3;

inline cxd gaussian(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    return {g(rng), g(rng)};
}

// Ginibre construction: G G† / tr, full rank almost surely.
inline qcorr::DensityMatrix random_density_matrix(std::mt19937_64& rng) {
    Mat4 g;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) g(r, c) = gaussian(rng);
    Mat4 p = g * g.adjoint();
    const double tr = p.trace().real();
    p = cxd(1.0 / tr, 0.0) * p;
    // Symmetrize away round-off.
    p = cxd(0.5, 0.0) * (p + p.adjoint());
    return qcorr::DensityMatrix::from_matrix(p);
}

inline qcorr::DensityMatrix random_pure_state(std::mt19937_64& rng) {
    std::array<cxd, 4> v;
    double n2 = 0.0;
    for (cxd& a : v) {
        a = gaussian(rng);
        n2 += std::norm(a);
    }
    Mat4 m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = v[r] * std::conj(v[c]) / n2;
    return qcorr::DensityMatrix::from_matrix(m);
}

// Generic single-qubit unitary from three Euler angles and a phase.
inline Mat2 random_unitary_2x2(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * qcorr::kPi);
    const double a = u(rng), b = u(rng), c = u(rng);
    const cxd ea = std::polar(1.0, a), ec = std::polar(1.0, c);
    const double cb = std::cos(b / 2), sb = std::sin(b / 2);
    Mat2 m;
    m(0, 0) = ea * cb;
    m(0, 1) = ec * sb;
    m(1, 0) = -std::conj(ec) * sb;
    m(1, 1) = std::conj(ea) * cb;
    return m;
}

// Random 4x4 unitary composed from Givens rotations with random phases.
inline Mat4 random_unitary_4x4(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * qcorr::kPi);
    Mat4 m = Mat4::identity();
    for (std::size_t p = 0; p < 4; ++p)
        for (std::size_t q = p + 1; q < 4; ++q) {
            Mat4 j = Mat4::identity();
            const double th = u(rng);
            const cxd ph = std::polar(1.0, u(rng));
            j(p, p) = std::cos(th);
            j(p, q) = std::sin(th) * ph;
            j(q, p) = -std::sin(th) * std::conj(ph);
            j(q, q) = std::cos(th);
            m = m * j;
        }
    return m;
}

inline Vec3 random_unit_vec3(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Vec3 v{g(rng), g(rng), g(rng)};
    return qcorr::normalized(v);
}

inline Mat4 random_hermitian(std::mt19937_64& rng) {
    Mat4 m;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) m(r, c) = gaussian(rng);
    return cxd(0.5, 0.0) * (m + m.adjoint());
}

// ---------------------------------------------------------------------------
// Characteristic-polynomial eigenvalue oracle for 4x4 products: coefficients
// by the Faddeev-LeVerrier recurrence, roots by Durand-Kerner iteration.
// Independent of the Jacobi path it cross-checks.
// ---------------------------------------------------------------------------

inline std::array<double, 4> charpoly_eigenvalues_4x4(const Mat4& m) {
    // det(lambda I - M) = l^4 + c3 l^3 + c2 l^2 + c1 l + c0
    const Mat4 id = Mat4::identity();
    const Mat4 m1 = m;
    const cxd c3 = -m1.trace();
    const Mat4 m2 = m * (m1 + c3 * id);
    const cxd c2 = cxd(-0.5, 0.0) * m2.trace();
    const Mat4 m3 = m * (m2 + c2 * id);
    const cxd c1 = cxd(-1.0 / 3.0, 0.0) * m3.trace();
    const Mat4 m4 = m * (m3 + c1 * id);
    const cxd c0 = cxd(-0.25, 0.0) * m4.trace();

    const auto poly = [&](cxd x) { return (((x + c3) * x + c2) * x + c1) * x + c0; };
    std::array<cxd, 4> roots;
    const cxd w(0.4, 0.9);
    roots[0] = w;
    for (int k = 1; k < 4; ++k) roots[k] = roots[k - 1] * w;
    for (int iter = 0; iter < 500; ++iter) {
        double shift = 0.0;
        for (int k = 0; k < 4; ++k) {
            cxd denom = 1.0;
            for (int j = 0; j < 4; ++j)
                if (j != k) denom *= roots[k] - roots[j];
            const cxd delta = poly(roots[k]) / denom;
            roots[k] -= delta;
            shift = std::max(shift, std::abs(delta));
        }
        if (shift < 1e-15) break;
    }
    std::array<double, 4> out;
    for (int k = 0; k < 4; ++k) out[k] = roots[k].real();
    std::sort(out.begin(), out.end(), std::greater<double>());
    return out;
}

inline double trace_distance(const qcorr::DensityMatrix& a, const qcorr::DensityMatrix& b) {
    const auto vals = qcorr::eigvals_hermitian(a.matrix() - b.matrix(), 1e-8);
    double sum = 0.0;
    for (double v : vals) sum += std::abs(v);
    return 0.5 * sum;
}

// Correlator <(a.s) x (b.s)> assembled from the four joint probabilities.
inline double correlator_from_probabilities(const qcorr::DensityMatrix& rho, Vec3 a_dir, Vec3 b_dir) {
    double e = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
            const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
            e += sign * qcorr::joint_probability(rho, a_dir, b_dir, a, b);
        }
    return e;
}

}  // namespace testsup
