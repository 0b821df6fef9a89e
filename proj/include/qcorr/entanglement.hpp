#pragma once

// Wootters concurrence (generic and closed-form on the damped family) and the
// entanglement sudden-death line D = cot(theta).

#include <cmath>
#include <optional>

#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"

namespace qcorr {

struct ConcurrenceBreakdown {
    std::array<double, 4> lambdas{};  // eigenvalues of rho * rho~, descending
    double value = 0.0;
};

// Spin-flipped state (s_y x s_y) rho* (s_y x s_y).
inline Mat4 spin_flip(const DensityMatrix& rho) {
    const Mat4 yy = tensor(pauli::sigma_y(), pauli::sigma_y());
    return yy * rho.matrix().conjugate() * yy;
}

inline ConcurrenceBreakdown concurrence(const DensityMatrix& rho) {
    ConcurrenceBreakdown out;
    out.lambdas = eigvals_psd_product(rho.matrix(), spin_flip(rho));
    const auto& l = out.lambdas;
    out.value = std::max(0.0, std::sqrt(l[0]) - std::sqrt(l[1]) - std::sqrt(l[2]) - std::sqrt(l[3]));
    return out;
}

// C(theta, D) = max[0, 2 (1-D) sin(theta) (cos(theta) - D sin(theta))].
inline double concurrence_closed(const StatePoint& p) {
    const double s = std::sin(p.theta), c = std::cos(p.theta);
    return std::max(0.0, 2.0 * (1.0 - p.damping) * s * (c - p.damping * s));
}

// Damping value where entanglement dies, if death happens at D < 1. States
// with theta < pi/4 lose entanglement only asymptotically at D = 1.
inline std::optional<double> esd_boundary(double theta) {
    if (!(theta > 0.0 && theta < kPi / 2)) throw DomainError("theta outside (0, pi/2)");
    if (theta < kPi / 4) return std::nullopt;
    return 1.0 / std::tan(theta);
}

}  // namespace qcorr
