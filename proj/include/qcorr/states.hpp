#pragma once

// The initial pure-state family |psi_theta> = cos(theta)|00> + sin(theta)|11>,
// the amplitude damping channel, and measurement statistics on the result.

#include <cmath>

#include "qcorr/errors.hpp"
#include "qcorr/qmath.hpp"

namespace qcorr {

inline constexpr double kPi = 3.14159265358979323846;

// Family coordinates: biasing angle theta in [0, pi/2], damping D in [0, 1].
struct StatePoint {
    double theta;
    double damping;

    StatePoint(double theta_, double damping_) : theta(theta_), damping(damping_) {
        if (!(theta >= 0.0 && theta <= kPi / 2)) throw DomainError("theta outside [0, pi/2]");
        if (!(damping >= 0.0 && damping <= 1.0)) throw DomainError("damping outside [0, 1]");
    }
};

// A validated two-qubit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
  public:
    static DensityMatrix from_matrix(const Mat4& m) {
        if (m.hermiticity_defect() > 1e-10) throw NotHermitian("density matrix is not Hermitian");
        if (std::abs(m.trace().real() - 1.0) > 1e-9 || std::abs(m.trace().imag()) > 1e-9)
            throw DomainError("density matrix trace is not 1");
        const auto vals = eigvals_hermitian(m);
        if (vals[3] < -1e-9) throw NotPSD("density matrix has a negative eigenvalue");
        return DensityMatrix(m);
    }

    const Mat4& matrix() const { return m_; }

  private:
    explicit DensityMatrix(const Mat4& m) : m_(m) {}
    Mat4 m_;
};

// Local Bloch vectors and the 3x3 correlation matrix T_ij = Tr[(s_i x s_j) rho].
struct CorrelationData {
    Vec3 a;  // Alice
    Vec3 b;  // Bob
    Mat3 T;
};

inline DensityMatrix pure_state(double theta) {
    if (!(theta >= 0.0 && theta <= kPi / 2)) throw DomainError("theta outside [0, pi/2]");
    const double c = std::cos(theta), s = std::sin(theta);
    Mat4 m;
    m(0, 0) = c * c;
    m(0, 3) = c * s;
    m(3, 0) = c * s;
    m(3, 3) = s * s;
    return DensityMatrix::from_matrix(m);
}

namespace detail {

inline std::array<Mat2, 2> adc_kraus(double d) {
    Mat2 k0, k1;
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - d);
    k1(0, 1) = std::sqrt(d);
    return {k0, k1};
}

}  // namespace detail

// Amplitude damping applied independently to both qubits; the paper's channel
// uses equal strengths but unequal ones cost nothing to support.
inline DensityMatrix apply_adc(const DensityMatrix& rho, double d_a, double d_b) {
    if (!(d_a >= 0.0 && d_a <= 1.0) || !(d_b >= 0.0 && d_b <= 1.0))
        throw DomainError("damping strength outside [0, 1]");
    const auto ka = detail::adc_kraus(d_a);
    const auto kb = detail::adc_kraus(d_b);
    Mat4 out;
    for (const Mat2& a : ka)
        for (const Mat2& b : kb) {
            const Mat4 k = tensor(a, b);
            out = out + k * rho.matrix() * k.adjoint();
        }
    return DensityMatrix::from_matrix(out);
}

// Closed form of the damped family state (equal strengths).
inline DensityMatrix family_state(const StatePoint& p) {
    const double c = std::cos(p.theta), s = std::sin(p.theta), d = p.damping;
    const double a11 = c * c + d * d * s * s;
    const double a14 = (1.0 - d) * c * s;
    const double a21 = (1.0 - d) * d * s * s;
    const double a44 = (1.0 - d) * (1.0 - d) * s * s;
    Mat4 m;
    m(0, 0) = a11;
    m(1, 1) = a21;
    m(2, 2) = a21;
    m(3, 3) = a44;
    m(0, 3) = a14;
    m(3, 0) = a14;
    return DensityMatrix::from_matrix(m);
}

inline Mat2 projector(Vec3 dir, int outcome) {
    const double sign = outcome == 0 ? 1.0 : -1.0;
    Mat2 m;
    m(0, 0) = 0.5 * (1.0 + sign * dir.z);
    m(1, 1) = 0.5 * (1.0 - sign * dir.z);
    m(0, 1) = 0.5 * sign * cxd(dir.x, -dir.y);
    m(1, 0) = 0.5 * sign * cxd(dir.x, dir.y);
    return m;
}

// P(a, b) = Tr[(Pi_a x Pi_b) rho] for spin measurements along unit directions.
inline double joint_probability(const DensityMatrix& rho, Vec3 alice_dir, Vec3 bob_dir, int a, int b) {
    require_unit(alice_dir);
    require_unit(bob_dir);
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) throw DomainError("outcomes must be 0 or 1");
    const Mat4 op = tensor(projector(alice_dir, a), projector(bob_dir, b));
    return (op * rho.matrix()).trace().real();
}

inline CorrelationData correlation_data(const DensityMatrix& rho) {
    CorrelationData cd;
    const Mat2& id = pauli::identity();
    double av[3], bv[3];
    for (int i = 0; i < 3; ++i) {
        av[i] = (tensor(pauli::sigma(i), id) * rho.matrix()).trace().real();
        bv[i] = (tensor(id, pauli::sigma(i)) * rho.matrix()).trace().real();
        for (int j = 0; j < 3; ++j)
            cd.T(i, j) = (tensor(pauli::sigma(i), pauli::sigma(j)) * rho.matrix()).trace().real();
    }
    cd.a = {av[0], av[1], av[2]};
    cd.b = {bv[0], bv[1], bv[2]};
    return cd;
}

// Correlation matrix of the family state without building the state:
// T = diag((1-D) sin 2t, -(1-D) sin 2t, cos^2 t + (1-2D)^2 sin^2 t).
inline Mat3 family_correlation_matrix(const StatePoint& p) {
    const double s2 = std::sin(2.0 * p.theta);
    const double c = std::cos(p.theta), s = std::sin(p.theta), d = p.damping;
    const double tx = (1.0 - d) * s2;
    const double tz = c * c + (1.0 - 2.0 * d) * (1.0 - 2.0 * d) * s * s;
    return Mat3::diagonal(tx, -tx, tz);
}

}  // namespace qcorr
