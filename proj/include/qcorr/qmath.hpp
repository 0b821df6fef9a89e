#pragma once

// Exact small-matrix complex linear algebra for two-qubit work: tensor
// products, partial traces, Hermitian eigen-solves and PSD matrix functions.
// Everything is fixed-size and allocation-free; no external solver is used.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <algorithm>

#include "qcorr/errors.hpp"

namespace qcorr {

using cxd = std::complex<double>;

// ---------------------------------------------------------------------------
// Fixed-size complex square matrix, row-major.
// ---------------------------------------------------------------------------

template <std::size_t N>
class SquareMatrix {
  public:
    constexpr SquareMatrix() = default;

    static constexpr std::size_t size = N;

    constexpr cxd& operator()(std::size_t r, std::size_t c) { return e_[r * N + c]; }
    constexpr const cxd& operator()(std::size_t r, std::size_t c) const { return e_[r * N + c]; }

    static constexpr SquareMatrix identity() {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static constexpr SquareMatrix diagonal(const std::array<double, N>& d) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    constexpr SquareMatrix adjoint() const {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(c, r));
        return m;
    }

    constexpr SquareMatrix conjugate() const {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c) m(r, c) = std::conj((*this)(r, c));
        return m;
    }

    constexpr cxd trace() const {
        cxd t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cxd& v : e_) m = std::max(m, std::abs(v));
        return m;
    }

    // max |A - A†| over all entries; 0 for exactly Hermitian input.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c)
                m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return m;
    }

    friend SquareMatrix operator+(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = a.e_[i] + b.e_[i];
        return m;
    }

    friend SquareMatrix operator-(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = a.e_[i] - b.e_[i];
        return m;
    }

    friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
        SquareMatrix m;
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t k = 0; k < N; ++k) {
                const cxd ark = a(r, k);
                if (ark == cxd{}) continue;
                for (std::size_t c = 0; c < N; ++c) m(r, c) += ark * b(k, c);
            }
        return m;
    }

    friend SquareMatrix operator*(cxd s, const SquareMatrix& a) {
        SquareMatrix m;
        for (std::size_t i = 0; i < N * N; ++i) m.e_[i] = s * a.e_[i];
        return m;
    }

  private:
    std::array<cxd, N * N> e_{};
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;

// ---------------------------------------------------------------------------
// Pauli basis.
// ---------------------------------------------------------------------------

namespace pauli {

inline const Mat2& identity() {
    static const Mat2 m = Mat2::identity();
    return m;
}

inline const Mat2& sigma_x() {
    static const Mat2 m = [] {
        Mat2 s;
        s(0, 1) = 1.0;
        s(1, 0) = 1.0;
        return s;
    }();
    return m;
}

inline const Mat2& sigma_y() {
    static const Mat2 m = [] {
        Mat2 s;
        s(0, 1) = cxd(0.0, -1.0);
        s(1, 0) = cxd(0.0, 1.0);
        return s;
    }();
    return m;
}

inline const Mat2& sigma_z() {
    static const Mat2 m = [] {
        Mat2 s;
        s(0, 0) = 1.0;
        s(1, 1) = -1.0;
        return s;
    }();
    return m;
}

// sigma(0) = sigma_x, sigma(1) = sigma_y, sigma(2) = sigma_z.
inline const Mat2& sigma(int i) {
    switch (i) {
        case 0: return sigma_x();
        case 1: return sigma_y();
        default: return sigma_z();
    }
}

}  // namespace pauli

// ---------------------------------------------------------------------------
// Real 3-vectors and 3x3 matrices (correlation-matrix work lives here).
// ---------------------------------------------------------------------------

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

    friend constexpr Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }
};

inline constexpr double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec3 v) { return std::sqrt(dot(v, v)); }

inline Vec3 normalized(Vec3 v) {
    const double n = norm(v);
    if (n <= 0.0) throw DomainError("cannot normalize zero vector");
    return (1.0 / n) * v;
}

inline void require_unit(Vec3 v, double tol = 1e-9) {
    if (std::abs(norm(v) - 1.0) > tol) throw NotUnitVector("direction is not unit-norm");
}

// Some unit vector orthogonal to a unit v (deterministic choice).
inline Vec3 any_orthogonal(Vec3 v) {
    const Vec3 seed = std::abs(v.x) <= std::abs(v.z) && std::abs(v.x) <= std::abs(v.y)
                          ? Vec3{1, 0, 0}
                          : (std::abs(v.y) <= std::abs(v.z) ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    const Vec3 w = seed - dot(seed, v) * v;
    return normalized(w);
}

struct Mat3 {
    // Row-major.
    std::array<double, 9> e{};

    double& operator()(int r, int c) { return e[static_cast<std::size_t>(r) * 3 + c]; }
    double operator()(int r, int c) const { return e[static_cast<std::size_t>(r) * 3 + c]; }

    static Mat3 diagonal(double a, double b, double c) {
        Mat3 m;
        m(0, 0) = a;
        m(1, 1) = b;
        m(2, 2) = c;
        return m;
    }

    Mat3 transposed() const {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = (*this)(c, r);
        return m;
    }

    Vec3 apply(Vec3 v) const {
        return {(*this)(0, 0) * v.x + (*this)(0, 1) * v.y + (*this)(0, 2) * v.z,
                (*this)(1, 0) * v.x + (*this)(1, 1) * v.y + (*this)(1, 2) * v.z,
                (*this)(2, 0) * v.x + (*this)(2, 1) * v.y + (*this)(2, 2) * v.z};
    }

    friend Mat3 operator*(const Mat3& a, const Mat3& b) {
        Mat3 m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) {
                double s = 0.0;
                for (int k = 0; k < 3; ++k) s += a(r, k) * b(k, c);
                m(r, c) = s;
            }
        return m;
    }
};

// ---------------------------------------------------------------------------
// Tensor product and partial trace. Index convention: |ab> has row index
// 2a + b, i.e. qubit A is the high bit.
// ---------------------------------------------------------------------------

inline Mat4 tensor(const Mat2& a, const Mat2& b) {
    Mat4 m;
    for (std::size_t ra = 0; ra < 2; ++ra)
        for (std::size_t ca = 0; ca < 2; ++ca)
            for (std::size_t rb = 0; rb < 2; ++rb)
                for (std::size_t cb = 0; cb < 2; ++cb)
                    m(2 * ra + rb, 2 * ca + cb) = a(ra, ca) * b(rb, cb);
    return m;
}

enum class Keep { A, B };

// Reduced 2x2 matrix of the kept qubit (trace over the other one).
inline Mat2 partial_trace(const Mat4& m, Keep keep) {
    Mat2 r;
    if (keep == Keep::A) {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(2 * i + 0, 2 * j + 0) + m(2 * i + 1, 2 * j + 1);
    } else {
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) r(i, j) = m(0 + i, 0 + j) + m(2 + i, 2 + j);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Hermitian eigen-solves. 2x2 uses closed-form roots; larger sizes use a
// cyclic Jacobi iteration driven to machine precision (deterministic and
// dependency-free). Eigenvalues are reported in descending order.
// ---------------------------------------------------------------------------

template <std::size_t N>
struct EigenSystem {
    std::array<double, N> values{};       // descending
    SquareMatrix<N> vectors;              // columns are the matching eigenvectors
};

inline std::array<double, 2> eigvals_hermitian_2x2(const Mat2& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const double h = 0.5 * (a + d);
    const double r = std::hypot(0.5 * (a - d), std::abs(m(0, 1)));
    return {h + r, h - r};
}

namespace detail {

// One full cyclic-Jacobi diagonalization of a Hermitian matrix. The rotation
// for the (p,q) pair first strips the phase of A(p,q), then applies the real
// symmetric Jacobi rotation; the composite unitary is accumulated in V.
template <std::size_t N>
EigenSystem<N> jacobi_hermitian(SquareMatrix<N> a) {
    SquareMatrix<N> v = SquareMatrix<N>::identity();
    const double scale = 1.0 + a.max_abs();

    for (int sweep = 0; sweep < 60; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off <= 1e-15 * scale) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const cxd apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag <= 1e-18 * scale) continue;

                const cxd phase = apq / mag;  // so that conj(phase)*apq is real positive
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // Column update: [col_p, col_q] <- [col_p, col_q] * J with
                // J = [[c, s], [-conj(phase) s, conj(phase) c]].
                for (std::size_t r = 0; r < N; ++r) {
                    const cxd arp = a(r, p), arq = a(r, q);
                    a(r, p) = c * arp - std::conj(phase) * s * arq;
                    a(r, q) = s * arp + std::conj(phase) * c * arq;
                    const cxd vrp = v(r, p), vrq = v(r, q);
                    v(r, p) = c * vrp - std::conj(phase) * s * vrq;
                    v(r, q) = s * vrp + std::conj(phase) * c * vrq;
                }
                // Row update with J†.
                for (std::size_t col = 0; col < N; ++col) {
                    const cxd apc = a(p, col), aqc = a(q, col);
                    a(p, col) = c * apc - phase * s * aqc;
                    a(q, col) = s * apc + phase * c * aqc;
                }
            }
        }
    }

    EigenSystem<N> sys;
    std::array<std::size_t, N> order{};
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    for (std::size_t i = 0; i < N; ++i) {
        sys.values[i] = a(order[i], order[i]).real();
        for (std::size_t r = 0; r < N; ++r) sys.vectors(r, i) = v(r, order[i]);
    }
    return sys;
}

}  // namespace detail

template <std::size_t N>
EigenSystem<N> hermitian_eigensystem(const SquareMatrix<N>& m, double tolerance = 1e-10) {
    if (m.hermiticity_defect() > tolerance) throw NotHermitian("matrix is not Hermitian within tolerance");
    return detail::jacobi_hermitian(m);
}

template <std::size_t N>
std::array<double, N> eigvals_hermitian(const SquareMatrix<N>& m, double tolerance = 1e-10) {
    if (m.hermiticity_defect() > tolerance) throw NotHermitian("matrix is not Hermitian within tolerance");
    if constexpr (N == 2) {
        return eigvals_hermitian_2x2(m);
    } else {
        return detail::jacobi_hermitian(m).values;
    }
}

// M^{-1/2} of a Hermitian PSD 2x2 matrix, closed form. Throws SingularMarginal
// when an eigenvalue drops below epsilon (a degenerate edge of the family,
// e.g. theta = pi/2 with D = 1).
inline Mat2 psd_inv_sqrt_2x2(const Mat2& m, double epsilon = 1e-12) {
    if (m.hermiticity_defect() > 1e-10) throw NotHermitian("matrix is not Hermitian within tolerance");
    const auto [lo_hi, lo_lo] = eigvals_hermitian_2x2(m);
    if (lo_lo < epsilon) throw SingularMarginal("marginal eigenvalue below epsilon");

    const cxd b = m(0, 1);
    const double a = m(0, 0).real();
    Mat2 out;
    if (std::abs(b) <= 1e-15 * (1.0 + m.max_abs())) {
        const double d = m(1, 1).real();
        out(0, 0) = 1.0 / std::sqrt(a);
        out(1, 1) = 1.0 / std::sqrt(d);
        return out;
    }
    // Eigenvector for eigenvalue l is (b, l - a), normalized.
    const std::array<double, 2> ls{lo_hi, lo_lo};
    for (double l : ls) {
        const cxd v0 = b;
        const cxd v1 = l - a;
        const double n2 = std::norm(v0) + std::norm(v1);
        const double w = 1.0 / (std::sqrt(l) * n2);
        out(0, 0) += w * v0 * std::conj(v0);
        out(0, 1) += w * v0 * std::conj(v1);
        out(1, 0) += w * v1 * std::conj(v0);
        out(1, 1) += w * v1 * std::conj(v1);
    }
    return out;
}

namespace detail {

// sqrt of a Hermitian PSD matrix via its eigensystem; negative round-off
// eigenvalues are clamped to zero.
template <std::size_t N>
SquareMatrix<N> psd_sqrt(const SquareMatrix<N>& m, double clamp_tol) {
    auto sys = detail::jacobi_hermitian(m);
    for (double v : sys.values)
        if (v < -clamp_tol) throw NotPSD("matrix has a negative eigenvalue");
    SquareMatrix<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        const double s = std::sqrt(std::max(0.0, sys.values[k]));
        for (std::size_t r = 0; r < N; ++r)
            for (std::size_t c = 0; c < N; ++c)
                out(r, c) += s * sys.vectors(r, k) * std::conj(sys.vectors(c, k));
    }
    return out;
}

}  // namespace detail

// Eigenvalues of the (non-Hermitian) product P*Q of two PSD matrices, which
// are real and non-negative. Computed through the Hermitian similarity
// sqrt(P)*Q*sqrt(P); negatives within clamp_tol of zero are clamped.
inline std::array<double, 4> eigvals_psd_product(const Mat4& p, const Mat4& q, double clamp_tol = 1e-9) {
    for (const Mat4* m : {&p, &q}) {
        const auto vals = eigvals_hermitian(*m, 1e-8);
        if (vals[3] < -clamp_tol) throw NotPSD("factor has a negative eigenvalue");
    }
    const Mat4 sp = detail::psd_sqrt(p, clamp_tol);
    const Mat4 h = sp * q * sp;
    auto vals = detail::jacobi_hermitian(h).values;
    for (double& v : vals) v = std::max(0.0, v);
    return vals;  // descending
}

// Eigen-system of a real symmetric 3x3 matrix (used on T^T T). Promoted to
// the complex Jacobi path; rotations stay real for real input.
struct Sym3Eigen {
    std::array<double, 3> values{};  // descending
    std::array<Vec3, 3> vectors{};
};

inline Sym3Eigen sym3_eigensystem(const Mat3& m) {
    SquareMatrix<3> c;
    for (int r = 0; r < 3; ++r)
        for (int col = 0; col < 3; ++col) c(r, col) = 0.5 * (m(r, col) + m(col, r));
    const auto sys = detail::jacobi_hermitian(c);
    Sym3Eigen out;
    out.values = sys.values;
    for (int k = 0; k < 3; ++k)
        out.vectors[k] = Vec3{sys.vectors(0, k).real(), sys.vectors(1, k).real(), sys.vectors(2, k).real()};
    return out;
}

}  // namespace qcorr
