#pragma once

// Platonic-solid measurement designs, the deterministic LHS bound C_m, the
// steering parameter T_m with per-axis optimal Alice settings, and a
// diagnostic evaluation of the printed 16-entry measurement-settings table.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorr/errors.hpp"
#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

// LHS bound of the combined 16-axis design, as used for the steerable flag.
inline constexpr double kSteeringBound16 = 0.503;

struct AxisSet {
    std::vector<Vec3> axes;
    std::string label;
};

struct SteeringAssessment {
    double t_m = 0.0;
    double c_m = 0.0;
    bool steerable = false;  // t_m > c_m
};

enum class PlatonicSolid { octahedron, cube, icosahedron, dodecahedron };

namespace detail {

inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

inline std::vector<Vec3> cube_diagonals() {
    const double r = 1.0 / std::sqrt(3.0);
    return {{r, r, r}, {-r, r, r}, {r, -r, r}, {r, r, -r}};
}

}  // namespace detail

// Vertex-to-vertex measurement axes of the Platonic solids with 6, 8, 12 and
// 20 vertices (3, 4, 6 and 10 settings). Canonical coordinates:
//   octahedron    x, y, z
//   cube          (+-1, +-1, 1)/sqrt(3)
//   icosahedron   cyclic (0, +-1, phi)/sqrt(1 + phi^2)
//   dodecahedron  cube diagonals plus cyclic (0, +-1/phi, phi)/sqrt(3)
inline AxisSet platonic_axes(PlatonicSolid solid) {
    const double phi = detail::kGolden;
    AxisSet set;
    switch (solid) {
        case PlatonicSolid::octahedron:
            set.label = "octahedron";
            set.axes = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
            break;
        case PlatonicSolid::cube:
            set.label = "cube";
            set.axes = detail::cube_diagonals();
            break;
        case PlatonicSolid::icosahedron: {
            set.label = "icosahedron";
            const double d = std::sqrt(1.0 + phi * phi);
            const double u = 1.0 / d, v = phi / d;
            set.axes = {{0, u, v}, {0, -u, v}, {u, v, 0}, {-u, v, 0}, {v, 0, u}, {v, 0, -u}};
            break;
        }
        case PlatonicSolid::dodecahedron: {
            set.label = "dodecahedron";
            set.axes = detail::cube_diagonals();
            const double r = 1.0 / std::sqrt(3.0);
            const double u = r / phi, v = r * phi;
            const Vec3 extra[] = {{0, u, v}, {0, -u, v}, {u, v, 0}, {-u, v, 0}, {v, 0, u}, {v, 0, -u}};
            set.axes.insert(set.axes.end(), std::begin(extra), std::end(extra));
            break;
        }
    }
    return set;
}

// Dodecahedron axes joined with those of its dual icosahedron (10 + 6). The
// dual's vertices sit over the dodecahedron's face centers, i.e. along the
// cyclic (0, phi, +-1) family rather than the standalone canonical
// (0, +-1, phi) orientation; the two differ by a rotation that leaves every
// single-solid quantity unchanged but fixes the relative placement here.
inline AxisSet combined_axes_16() {
    AxisSet set = platonic_axes(PlatonicSolid::dodecahedron);
    const double phi = detail::kGolden;
    const double d = std::sqrt(1.0 + phi * phi);
    const double u = 1.0 / d, v = phi / d;
    const Vec3 dual[] = {{0, v, u}, {0, v, -u}, {v, u, 0}, {v, -u, 0}, {u, 0, v}, {-u, 0, v}};
    set.axes.insert(set.axes.end(), std::begin(dual), std::end(dual));
    set.label = "combined16";
    return set;
}

// Exact LHS bound over deterministic strategies:
//   C_m = (1/m) max over sign patterns s of |sum_k s_k n_k|.
// The first sign is fixed by the global-sign symmetry, leaving 2^(m-1) cases.
inline double lhs_bound(const AxisSet& axes) {
    const std::size_t m = axes.axes.size();
    if (m == 0) throw DomainError("empty axis set");
    if (m > 20) throw TooManyAxes("LHS enumeration supports at most 20 axes");
    const std::uint32_t patterns = 1u << (m - 1);
    double best = 0.0;
    for (std::uint32_t bits = 0; bits < patterns; ++bits) {
        Vec3 sum = axes.axes[0];
        for (std::size_t k = 1; k < m; ++k) {
            const double s = (bits >> (k - 1)) & 1u ? -1.0 : 1.0;
            sum = sum + s * axes.axes[k];
        }
        best = std::max(best, dot(sum, sum));
    }
    return std::sqrt(best) / static_cast<double>(m);
}

// Alice direction maximizing <(a.s) x (n.s)>: the normalized image T n.
inline Vec3 alice_optimal_direction(const Mat3& t, Vec3 bob_dir) {
    require_unit(bob_dir);
    const Vec3 image = t.apply(bob_dir);
    if (norm(image) <= 1e-12) throw ZeroCorrelation("T n is zero; Alice direction undefined");
    return normalized(image);
}

// T_m = (1/m) sum_k |T n_k|; each term is the correlator for Bob's axis n_k
// with Alice measuring along her optimal direction. Axes with |T n| = 0
// contribute nothing.
inline double steering_parameter(const Mat3& t, const AxisSet& axes) {
    if (axes.axes.empty()) throw DomainError("empty axis set");
    double sum = 0.0;
    for (const Vec3& n : axes.axes) {
        require_unit(n);
        sum += norm(t.apply(n));
    }
    return sum / static_cast<double>(axes.axes.size());
}

inline double steering_parameter(const DensityMatrix& rho, const AxisSet& axes) {
    return steering_parameter(correlation_data(rho).T, axes);
}

inline SteeringAssessment assess_steering(const DensityMatrix& rho, const AxisSet& axes) {
    SteeringAssessment a;
    a.t_m = steering_parameter(rho, axes);
    a.c_m = lhs_bound(axes);
    a.steerable = a.t_m > a.c_m;
    return a;
}

// T_16 on the family via the closed-form correlation matrix.
inline double steering_t16_closed(const StatePoint& p) {
    static const AxisSet axes = combined_axes_16();
    return steering_parameter(family_correlation_matrix(p), axes);
}

// ---------------------------------------------------------------------------
// The printed 16-entry settings table. Canonical axes stay authoritative for
// every computation; this evaluates the table as printed and reports how far
// each entry falls from (nearest canonical axis, optimal Alice direction).
// ---------------------------------------------------------------------------

struct AppendixDEntry {
    int index = 0;          // 1-based, matching the printed table
    Vec3 bob_raw;           // components as printed (not necessarily unit)
    Vec3 bob_unit;          // normalized bob_raw
    Vec3 alice;             // from the printed (alpha_i, beta_i)
};

struct AppendixDComparison {
    int index = 0;
    double bob_norm = 0.0;            // |bob_raw|
    double bob_axis_deviation = 0.0;  // angle to nearest canonical axis (up to sign), rad
    double alice_deviation = 0.0;     // angle to alice_optimal_direction(T, bob_unit), rad
    bool alice_defined = true;        // false when |T bob_unit| = 0
    bool mismatch = false;
};

struct AppendixDReport {
    std::vector<AppendixDEntry> entries;
    std::vector<AppendixDComparison> comparisons;
};

inline AppendixDReport appendix_d_settings(const StatePoint& p) {
    const double sqrt5 = std::sqrt(5.0);
    const double a = (1.0 + sqrt5) / 2.0;  // = c = phi
    const double b = 1.0 / std::sqrt(3.0);
    const double d = std::sqrt(0.5 * (5.0 + sqrt5));
    const double ab = a * b, a_over_b = a / b;
    const double c_over_d = a / d, inv_d = 1.0 / d;

    const double th = p.theta, dd = p.damping;
    const double s2t = std::sin(2.0 * th), c2t = std::cos(2.0 * th);
    const double st = std::sin(th), ct = std::cos(th);

    const double g1 = std::sqrt(2.0) * (1.0 - dd) * s2t;
    const double d1 = 4.0 * dd * (1.0 - dd) * st * st - 1.0;
    const double d4 = ct * ct + (1.0 - 2.0 * dd) * (1.0 - 2.0 * dd) * st * st;
    const double g5 = 2.0 * (1.0 - dd) * s2t;
    const double d5 = (3.0 + sqrt5) * (2.0 * dd - 1.0 - 2.0 * dd * dd - 2.0 * dd * (1.0 - dd) * c2t);
    const double g9 = -(3.0 + sqrt5) * (1.0 - dd) * st * ct;
    const double g11 = -(1.0 + sqrt5) * (1.0 - dd) * st * ct;
    const double d15 = (1.0 + sqrt5) * (2.0 * dd - 1.0 - 2.0 * dd * dd - 2.0 * dd * (1.0 - dd) * c2t);

    const double alpha1 = std::atan(-g1 / d1);
    const double alpha4 = kPi + std::atan(-g1 / d4);
    const double alpha5 = std::atan(-g5 / d5);
    const double alpha9 = std::atan(-g9 / d4);
    const double alpha10 = kPi + std::atan(g9 / d4);
    const double alpha11 = kPi + std::atan(g11 / d4);
    const double alpha12 = std::atan(g11 / d4);
    const double alpha15 = std::atan(-g5 / d15);
    const double half = kPi / 2.0;

    const double r = 1.0 / std::sqrt(3.0);
    struct Row {
        Vec3 bob;
        double alpha, beta;
    };
    const Row rows[16] = {
        {{r, r, r}, alpha1, std::atan(-1.0)},
        {{-r, r, r}, alpha1, 5.0 * kPi / 4.0},
        {{r, -r, r}, alpha1, kPi / 4.0},
        {{r, r, -r}, alpha4, -kPi / 4.0},
        {{0, a_over_b, ab}, alpha5, half},
        {{0, -a_over_b, ab}, alpha5, 3.0 * kPi / 2.0},
        {{a_over_b, ab, 0}, half, std::atan(-(3.0 + sqrt5) / 2.0)},
        {{-a_over_b, ab, 0}, half, kPi + std::atan((3.0 + sqrt5) / 2.0)},
        {{ab, 0, a_over_b}, alpha9, 0.0},
        {{ab, 0, -a_over_b}, alpha10, 0.0},
        {{0, c_over_d, -inv_d}, alpha11, 3.0 * kPi / 2.0},
        {{0, c_over_d, inv_d}, alpha12, 3.0 * kPi / 2.0},
        {{c_over_d, inv_d, 0}, half, std::atan(-2.0 / (1.0 + sqrt5))},
        {{-c_over_d, inv_d, 0}, half, kPi + std::atan(2.0 / (1.0 + sqrt5))},
        {{inv_d, 0, c_over_d}, alpha15, 0.0},
        {{-inv_d, 0, c_over_d}, alpha15, kPi},
    };

    const Mat3 t = family_correlation_matrix(p);
    const AxisSet canonical = combined_axes_16();

    AppendixDReport report;
    for (int i = 0; i < 16; ++i) {
        const Row& row = rows[i];
        AppendixDEntry e;
        e.index = i + 1;
        e.bob_raw = row.bob;
        e.bob_unit = normalized(row.bob);
        const double sa = std::sin(row.alpha), ca = std::cos(row.alpha);
        e.alice = {sa * std::cos(row.beta), sa * std::sin(row.beta), ca};

        AppendixDComparison cmp;
        cmp.index = e.index;
        cmp.bob_norm = norm(row.bob);
        double best = 0.0;
        for (const Vec3& axis : canonical.axes) best = std::max(best, std::abs(dot(e.bob_unit, axis)));
        cmp.bob_axis_deviation = std::acos(std::min(1.0, best));
        const Vec3 image = t.apply(e.bob_unit);
        if (norm(image) <= 1e-12) {
            cmp.alice_defined = false;
        } else {
            cmp.alice_deviation = std::acos(std::clamp(dot(e.alice, normalized(image)), -1.0, 1.0));
        }
        cmp.mismatch = std::abs(cmp.bob_norm - 1.0) > 1e-9 || cmp.bob_axis_deviation > 1e-6 ||
                       (cmp.alice_defined && cmp.alice_deviation > 1e-6);

        report.entries.push_back(e);
        report.comparisons.push_back(cmp);
    }
    return report;
}

}  // namespace qcorr
