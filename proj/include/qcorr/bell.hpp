#pragma once

// CHSH machinery: the Horodecki criterion S = 2 sqrt(t1 + t2), evaluation of
// explicit measurement settings, and synthesis of maximizing settings (both
// the generic construction and the two fixed scenarios used at theta = pi/4).

#include <cmath>

#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct ChshSettings {
    std::array<Vec3, 2> alice;
    std::array<Vec3, 2> bob;

    void validate() const {
        for (const Vec3& v : alice) require_unit(v);
        for (const Vec3& v : bob) require_unit(v);
    }
};

enum class BellBranch { xy, xz };

struct BellClosed {
    double value = 0.0;
    BellBranch branch = BellBranch::xy;
};

// Maximal CHSH value over all settings: 2 sqrt(t1 + t2) with t1 >= t2 the two
// largest eigenvalues of T^T T.
inline double horodecki_S(const DensityMatrix& rho) {
    const Mat3 t = correlation_data(rho).T;
    const auto eig = sym3_eigensystem(t.transposed() * t);
    return 2.0 * std::sqrt(eig.values[0] + eig.values[1]);
}

// Closed form on the family. With l2 = (1-D)^2 sin^2 2t (doubly degenerate,
// the xy plane) and l1 = (cos^2 t + (1-2D)^2 sin^2 t)^2 (the z direction),
// S = max[2 sqrt(2 l2), 2 sqrt(l1 + l2)]. Ties report the xy branch.
inline BellClosed bell_S_closed(const StatePoint& p) {
    const double s2 = std::sin(2.0 * p.theta);
    const double c = std::cos(p.theta), s = std::sin(p.theta), d = p.damping;
    const double l2 = (1.0 - d) * (1.0 - d) * s2 * s2;
    const double lz = c * c + (1.0 - 2.0 * d) * (1.0 - 2.0 * d) * s * s;
    const double l1 = lz * lz;
    BellClosed out;
    if (l2 >= l1) {
        out.value = 2.0 * std::sqrt(2.0 * l2);
        out.branch = BellBranch::xy;
    } else {
        out.value = 2.0 * std::sqrt(l1 + l2);
        out.branch = BellBranch::xz;
    }
    return out;
}

// S = <a1 b1> + <a1 b2> + <a2 b1> - <a2 b2>, correlators taken from T.
inline double chsh_value(const DensityMatrix& rho, const ChshSettings& st) {
    st.validate();
    const Mat3 t = correlation_data(rho).T;
    const auto corr = [&](const Vec3& a, const Vec3& b) { return dot(a, t.apply(b)); };
    return corr(st.alice[0], st.bob[0]) + corr(st.alice[0], st.bob[1]) +
           corr(st.alice[1], st.bob[0]) - corr(st.alice[1], st.bob[1]);
}

// Fixed maximizing settings for the theta = pi/4 family. Scenario 1 (xy
// plane) attains S for D <= 0.5, scenario 2 (xz plane) for D >= 0.5; the tie
// at D = 0.5 is broken toward scenario 1.
inline ChshSettings appendix_c_settings(double damping) {
    if (!(damping >= 0.0 && damping <= 1.0)) throw DomainError("damping outside [0, 1]");
    ChshSettings st;
    if (damping <= 0.5) {
        const double p1 = 7.0 * kPi / 4.0, p2 = kPi / 4.0;
        st.alice = {Vec3{1, 0, 0}, Vec3{0, 1, 0}};
        st.bob = {Vec3{std::cos(p1), std::sin(p1), 0}, Vec3{std::cos(p2), std::sin(p2), 0}};
    } else {
        const double lx = 1.0 - damping;
        const double lz = 1.0 - 2.0 * damping * (1.0 - damping);
        const double chi1 = std::atan2(lx, lz);
        const double chi2 = kPi - chi1;
        st.alice = {Vec3{1, 0, 0}, Vec3{0, 0, 1}};
        st.bob = {Vec3{std::sin(chi1), 0, std::cos(chi1)}, Vec3{std::sin(chi2), 0, std::cos(chi2)}};
    }
    return st;
}

// Generic Horodecki construction: Bob measures along c1 cos(mu) +- c2 sin(mu)
// for the top-two eigenvectors of T^T T with tan(mu) = sqrt(t2/t1); Alice
// follows the images T b / |T b|. Degenerate T (t1 < 1e-12) falls back to the
// canonical xz settings.
inline ChshSettings optimal_chsh_settings(const DensityMatrix& rho) {
    const Mat3 t = correlation_data(rho).T;
    const auto eig = sym3_eigensystem(t.transposed() * t);
    const double t1 = std::max(0.0, eig.values[0]);
    const double t2 = std::max(0.0, eig.values[1]);

    ChshSettings st;
    if (t1 < 1e-12) {
        const double r = 1.0 / std::sqrt(2.0);
        st.alice = {Vec3{1, 0, 0}, Vec3{0, 0, 1}};
        st.bob = {Vec3{r, 0, r}, Vec3{r, 0, -r}};
        return st;
    }

    const double mu = std::atan(std::sqrt(t2 / t1));
    const Vec3 c1 = eig.vectors[0], c2 = eig.vectors[1];
    const Vec3 b1 = normalized(std::cos(mu) * c1 + std::sin(mu) * c2);
    const Vec3 b2 = normalized(std::cos(mu) * c1 - std::sin(mu) * c2);
    st.bob = {b1, b2};

    const Vec3 u = t.apply(b1 + b2);
    st.alice[0] = normalized(u);
    const Vec3 v = t.apply(b1 - b2);
    st.alice[1] = norm(v) > 1e-15 ? normalized(v) : any_orthogonal(st.alice[0]);
    return st;
}

}  // namespace qcorr
