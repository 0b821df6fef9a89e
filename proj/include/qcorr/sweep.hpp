#pragma once

// Point evaluation of all quantifiers, grid sweeps, and sudden-death boundary
// tracing with detection of the branch switches that kink the Bell curve.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "qcorr/bell.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/states.hpp"
#include "qcorr/steering.hpp"
#include "qcorr/unsteering.hpp"

namespace qcorr {

enum class Measure { entanglement, bell, steering, unsteering };

struct Flags {
    bool entangled = false;      // concurrence > 0
    bool bell_nonlocal = false;  // S > 2
    bool steerable = false;      // T16 > 0.503
    bool unsteerable = false;    // t_U <= 1
    bool undetermined = false;   // neither steerable nor certified unsteerable
};

struct CorrelationReport {
    StatePoint point;
    double concurrence = 0.0;
    double bell_s = 0.0;
    BellBranch bell_branch = BellBranch::xy;
    double t16 = 0.0;
    double t_u = 0.0;
    double T_u = 0.0;
    Flags flags;
};

namespace detail {

// t_U along the closed-form path. gamma vanishes only at (pi/2, 0), where the
// filter is undefined; there the theta = pi/2 column formula t_U = (2D-1)^2
// (a_z = 2D-1, T_z = T_x = 0) extends the certificate by continuity in D.
inline double t_u_closed(const StatePoint& p, UnsteeringVariant variant) {
    const double c = std::cos(p.theta), s = std::sin(p.theta);
    const double gamma = c * c + p.damping * s * s;
    if (gamma <= 1e-12) {
        const double az = 2.0 * p.damping - 1.0;
        return az * az;
    }
    return unsteering_closed(p, variant);
}

}  // namespace detail

inline CorrelationReport evaluate_point(const StatePoint& p,
                                        UnsteeringVariant variant = UnsteeringVariant::derived) {
    CorrelationReport r{p};
    r.concurrence = concurrence_closed(p);
    const BellClosed bell = bell_S_closed(p);
    r.bell_s = bell.value;
    r.bell_branch = bell.branch;
    r.t16 = steering_t16_closed(p);
    r.t_u = detail::t_u_closed(p, variant);
    r.T_u = unsteering_T(r.t_u);
    r.flags.entangled = r.concurrence > 0.0;
    r.flags.bell_nonlocal = r.bell_s > 2.0;
    r.flags.steerable = r.t16 > kSteeringBound16;
    r.flags.unsteerable = r.t_u <= 1.0;
    r.flags.undetermined = !r.flags.steerable && !r.flags.unsteerable;
    return r;
}

// Row-major grid (theta outer, D inner); deterministic ordering regardless of
// the worker count.
inline std::vector<CorrelationReport> sweep_grid(double theta_min, double theta_max, int theta_steps,
                                                 double d_min, double d_max, int d_steps) {
    if (theta_steps < 2 || d_steps < 2) throw DomainError("steps must be >= 2 per axis");
    StatePoint(theta_min, d_min);  // validate corners
    StatePoint(theta_max, d_max);

    const auto lerp = [](double lo, double hi, int i, int n) {
        const double t = static_cast<double>(i) / (n - 1);
        return lo * (1.0 - t) + hi * t;
    };

    const std::size_t total = static_cast<std::size_t>(theta_steps) * d_steps;
    std::vector<CorrelationReport> out(total, CorrelationReport{StatePoint(0.0, 0.0)});
    parallel_for_index(total, [&](std::size_t idx) {
        const int it = static_cast<int>(idx) / d_steps;
        const int id = static_cast<int>(idx) % d_steps;
        out[idx] = evaluate_point(StatePoint(lerp(theta_min, theta_max, it, theta_steps),
                                             lerp(d_min, d_max, id, d_steps)));
    });
    return out;
}

// Transversal crossings (sign changes, bisected to tol) plus tangential
// touches (|g| below 1e-9 with no sign change, e.g. S -> 2 exactly at D = 1).
struct BoundaryScan {
    std::vector<double> crossings;
    std::vector<double> tangencies;
};

namespace detail {

inline std::function<double(double)> boundary_margin(Measure measure, double theta,
                                                     UnsteeringVariant variant) {
    switch (measure) {
        case Measure::entanglement:
            // Signed concurrence precursor; the max(0, .) clamp never changes sign.
            return [theta](double d) {
                return 2.0 * (1.0 - d) * std::sin(theta) * (std::cos(theta) - d * std::sin(theta));
            };
        case Measure::bell:
            return [theta](double d) { return bell_S_closed(StatePoint(theta, d)).value - 2.0; };
        case Measure::steering:
            return [theta](double d) { return steering_t16_closed(StatePoint(theta, d)) - kSteeringBound16; };
        case Measure::unsteering:
        default:
            return [theta, variant](double d) { return t_u_closed(StatePoint(theta, d), variant) - 1.0; };
    }
}

inline double bisect(const std::function<double(double)>& g, double lo, double hi, double glo, double tol) {
    for (int iter = 0; iter < 200 && hi - lo > tol; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if ((glo < 0.0) == (gm < 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace detail

inline BoundaryScan find_boundary(Measure measure, double theta, double scan_step = 1e-3,
                                  double tol = 1e-9,
                                  UnsteeringVariant variant = UnsteeringVariant::derived) {
    if (!(theta > 0.0 && theta < kPi / 2)) throw DomainError("theta outside (0, pi/2)");
    if (!(scan_step > 0.0 && scan_step < 1.0)) throw DomainError("scan_step outside (0, 1)");
    const auto g = detail::boundary_margin(measure, theta, variant);

    const int n = static_cast<int>(std::ceil(1.0 / scan_step));
    std::vector<double> ds(n + 1), gs(n + 1);
    for (int i = 0; i <= n; ++i) {
        ds[i] = std::min(1.0, i * scan_step);
        gs[i] = g(ds[i]);
    }

    // A scan sample with |g| < 1e-9 is only a tangency when the nearest
    // clear-signed samples on both sides agree in sign (or one side is the
    // domain edge); a sign flip across such a run is still a crossing.
    BoundaryScan scan;
    const auto clear = [&](int i) { return std::abs(gs[i]) >= 1e-9; };
    int i = 0;
    while (i <= n) {
        if (clear(i)) {
            if (i > 0 && clear(i - 1) && (gs[i - 1] < 0.0) != (gs[i] < 0.0))
                scan.crossings.push_back(detail::bisect(g, ds[i - 1], ds[i], gs[i - 1], tol));
            ++i;
            continue;
        }
        const int run_begin = i;
        while (i <= n && !clear(i)) ++i;
        const int before = run_begin - 1;  // clear by construction when >= 0
        const int after = i <= n ? i : -1;
        if (before >= 0 && after >= 0 && (gs[before] < 0.0) != (gs[after] < 0.0)) {
            scan.crossings.push_back(detail::bisect(g, ds[before], ds[after], gs[before], tol));
        } else {
            int rep = run_begin;
            for (int k = run_begin; k < (after >= 0 ? after : n + 1); ++k)
                if (std::abs(gs[k]) < std::abs(gs[rep])) rep = k;
            scan.tangencies.push_back(ds[rep]);
        }
    }
    return scan;
}

struct BoundarySample {
    double theta = 0.0;
    double d_star = 0.0;
    BellBranch branch = BellBranch::xy;
    bool has_branch = false;
};

struct SwitchPoint {
    double theta = 0.0;
    double damping = 0.0;
};

struct BoundaryCurve {
    Measure measure = Measure::entanglement;
    std::vector<BoundarySample> samples;
    std::vector<SwitchPoint> switch_points;
};

namespace detail {

inline std::optional<BoundarySample> boundary_sample(Measure measure, double theta,
                                                     UnsteeringVariant variant) {
    const BoundaryScan scan = find_boundary(measure, theta, 1e-3, 1e-9, variant);
    if (scan.crossings.empty()) return std::nullopt;
    BoundarySample s;
    s.theta = theta;
    s.d_star = scan.crossings.front();
    if (measure == Measure::bell) {
        s.branch = bell_S_closed(StatePoint(theta, s.d_star)).branch;
        s.has_branch = true;
    }
    return s;
}

}  // namespace detail

// First transversal crossing per theta sample plus, for the Bell measure, the
// branch attaining the maximum there. Adjacent samples whose branch differs
// are refined by bisection in theta to 1e-4 and reported as switch points.
inline BoundaryCurve trace_boundary_curve(Measure measure, double theta_min, double theta_max,
                                          int theta_steps,
                                          UnsteeringVariant variant = UnsteeringVariant::derived) {
    if (!(theta_min > 0.0 && theta_max < kPi / 2 && theta_min < theta_max))
        throw DomainError("theta range outside (0, pi/2)");
    if (theta_steps < 2) throw DomainError("theta_steps must be >= 2");

    BoundaryCurve curve;
    curve.measure = measure;
    std::vector<std::optional<BoundarySample>> samples(theta_steps);
    parallel_for_index(static_cast<std::size_t>(theta_steps), [&](std::size_t i) {
        const double t = static_cast<double>(i) / (theta_steps - 1);
        const double theta = theta_min * (1.0 - t) + theta_max * t;
        samples[i] = detail::boundary_sample(measure, theta, variant);
    });

    for (const auto& s : samples)
        if (s) curve.samples.push_back(*s);
    if (curve.samples.empty()) throw NoBoundary("measure never crosses its threshold on this range");

    for (std::size_t i = 1; i < curve.samples.size(); ++i) {
        const BoundarySample& a = curve.samples[i - 1];
        const BoundarySample& b = curve.samples[i];
        if (!a.has_branch || !b.has_branch || a.branch == b.branch) continue;
        double lo = a.theta, hi = b.theta;
        BellBranch lo_branch = a.branch;
        while (hi - lo > 1e-4) {
            const double mid = 0.5 * (lo + hi);
            const auto ms = detail::boundary_sample(measure, mid, variant);
            if (!ms) break;
            if (ms->branch == lo_branch)
                lo = mid;
            else
                hi = mid;
        }
        const double theta_sw = 0.5 * (lo + hi);
        const auto at_switch = detail::boundary_sample(measure, theta_sw, variant);
        if (at_switch) curve.switch_points.push_back({theta_sw, at_switch->d_star});
    }
    return curve;
}

}  // namespace qcorr
