#pragma once

// Canonical-form local filter and the sufficient unsteerability certificate
// t_U = max[a_z^2 + 2|T_z|, 2|T_x|] <= 1. Certified states admit an explicit
// LHS model; the criterion says nothing when t_U > 1.

#include <cmath>

#include "qcorr/errors.hpp"
#include "qcorr/qmath.hpp"
#include "qcorr/states.hpp"
#include "qcorr/steering.hpp"

namespace qcorr {

// Alice vector and diagonal correlations of the filtered state
// (I x (rho^B)^(-1/2)) rho (I x (rho^B)^(-1/2)) / 2. The filter fixes Bob's
// marginal to I/2; the raw filtered trace is 2, hence the renormalization.
struct CanonicalForm {
    Vec3 a;
    Vec3 t_diag;
};

struct CanonicalOptions {
    double marginal_epsilon = 1e-12;  // Bob-marginal eigenvalue floor
    double off_diag_tol = 1e-9;       // scope guard: |T_ij| (i != j) of the filtered state
    double tx_ty_tol = 1e-9;          // scope guard: ||T_x| - |T_y|| for the certificate
};

inline CanonicalForm canonical_form(const DensityMatrix& rho, const CanonicalOptions& opt = {}) {
    const Mat2 marginal = partial_trace(rho.matrix(), Keep::B);
    const Mat2 filt = psd_inv_sqrt_2x2(marginal, opt.marginal_epsilon);
    const Mat4 f = tensor(pauli::identity(), filt);
    const Mat4 raw = f * rho.matrix() * f;
    const double tr = raw.trace().real();
    const DensityMatrix canonical = DensityMatrix::from_matrix(cxd(1.0 / tr, 0.0) * raw);

    const CorrelationData cd = correlation_data(canonical);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j && std::abs(cd.T(i, j)) >= opt.off_diag_tol)
                throw NonDiagonalCorrelation("filtered correlation matrix is not diagonal");

    return CanonicalForm{cd.a, Vec3{cd.T(0, 0), cd.T(1, 1), cd.T(2, 2)}};
}

inline double unsteering_t(const DensityMatrix& rho, const CanonicalOptions& opt = {}) {
    const CanonicalForm cf = canonical_form(rho, opt);
    if (std::abs(std::abs(cf.t_diag.x) - std::abs(cf.t_diag.y)) > opt.tx_ty_tol)
        throw NonDiagonalCorrelation("|T_x| != |T_y|: state outside the supported family");
    const double planar = std::max(std::abs(cf.t_diag.x), std::abs(cf.t_diag.y));
    return std::max(cf.a.z * cf.a.z + 2.0 * std::abs(cf.t_diag.z), 2.0 * planar);
}

enum class UnsteeringVariant {
    as_printed,  // literal published expression (alpha's second numerator term 2(1-D)g)
    derived      // canonical-form evaluation: second term 2(1-D)cos^2(theta) g
};

// Closed form on the family. gamma = cos^2 t + D sin^2 t is Bob's larger
// marginal eigenvalue. The derived variant equals unsteering_t(family_state)
// and reproduces the D = 0.6 boundary at theta = pi/4; the literal printed
// alpha places that boundary near 0.734 instead and is kept for reference.
inline double unsteering_closed(const StatePoint& p, UnsteeringVariant variant = UnsteeringVariant::derived) {
    const double c = std::cos(p.theta), s = std::sin(p.theta), d = p.damping;
    const double gamma = c * c + d * s * s;
    if (gamma <= 1e-12) throw DomainError("gamma too small (degenerate Bob marginal)");

    const double az_num = d * (gamma - (1.0 - d) * s * s);
    double alpha;
    if (variant == UnsteeringVariant::as_printed) {
        alpha = (az_num * az_num + 2.0 * (1.0 - d) * gamma) / (gamma * gamma);
    } else {
        alpha = (az_num * az_num + 2.0 * (1.0 - d) * c * c * gamma) / (gamma * gamma);
    }
    const double planar = 2.0 * c * std::sqrt(1.0 - d) / std::sqrt(gamma);
    return std::max(alpha, planar);
}

// T_U = 0.503 t_U, the certificate rescaled onto the steering plot's axis.
inline double unsteering_T(double t_u) {
    if (t_u < 0.0) throw DomainError("t_U must be non-negative");
    return kSteeringBound16 * t_u;
}

}  // namespace qcorr
