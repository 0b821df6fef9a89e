#pragma once

// Finite-statistics emulation of the photon-counting experiment: Poisson
// coincidence counts for inequality tests, Pauli-pair tomography with PSD
// projection, and parametric-bootstrap error bars.

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/bell.hpp"
#include "qcorr/entanglement.hpp"
#include "qcorr/errors.hpp"
#include "qcorr/parallel.hpp"
#include "qcorr/random.hpp"
#include "qcorr/states.hpp"
#include "qcorr/steering.hpp"
#include "qcorr/unsteering.hpp"

namespace qcorr {

struct CountRecord {
    int setting_id = 0;
    Vec3 alice_dir;
    Vec3 bob_dir;
    std::array<std::uint64_t, 4> counts{};  // outcomes (0,0), (0,1), (1,0), (1,1)
};

// Counts for one Pauli-pair tomography setting; real-valued so exact expected
// values can be inverted without rounding.
struct PauliSettingCounts {
    int alice_axis = 0;  // 0 = x, 1 = y, 2 = z
    int bob_axis = 0;
    std::array<double, 4> counts{};
};

struct EstimateWithError {
    double value = 0.0;
    double std_error = 0.0;
    int replicas = 0;
};

// Independent Poisson draw per (setting, outcome) with mean
// mean_counts * P(a, b); the substream for (k, o) depends only on (seed, k, o)
// so evaluation order and threading never matter.
inline std::vector<CountRecord> simulate_counts(const DensityMatrix& rho,
                                                const std::vector<std::pair<Vec3, Vec3>>& settings,
                                                double mean_counts, std::uint64_t seed) {
    if (!(mean_counts > 0.0)) throw DomainError("mean_counts must be positive");
    std::vector<CountRecord> records(settings.size());
    for (std::size_t k = 0; k < settings.size(); ++k) {
        CountRecord& rec = records[k];
        rec.setting_id = static_cast<int>(k);
        rec.alice_dir = settings[k].first;
        rec.bob_dir = settings[k].second;
        for (int o = 0; o < 4; ++o) {
            const double p = std::max(0.0, joint_probability(rho, rec.alice_dir, rec.bob_dir, o >> 1, o & 1));
            SplitMix64 rng(substream_seed(seed, {k, static_cast<std::uint64_t>(o)}));
            rec.counts[o] = poisson_sample(mean_counts * p, rng);
        }
    }
    return records;
}

namespace detail {

// Correlator (n00 - n01 - n10 + n11) / total; zero-total settings contribute 0.
template <typename Counts>
double correlator(const Counts& n) {
    const double total = static_cast<double>(n[0]) + n[1] + n[2] + n[3];
    if (total <= 0.0) return 0.0;
    return (static_cast<double>(n[0]) - n[1] - n[2] + n[3]) / total;
}

template <typename Counts>
double marginal_a(const Counts& n) {  // numerator of <A x I>
    return static_cast<double>(n[0]) + n[1] - n[2] - n[3];
}

template <typename Counts>
double marginal_b(const Counts& n) {
    return static_cast<double>(n[0]) - n[1] + n[2] - n[3];
}

}  // namespace detail

// Linear inversion over the 9 Pauli-pair settings followed by PSD projection:
// negative eigenvalues are clipped to zero with the deficit spread uniformly
// over the remaining positive ones, iterating, then the trace is renormalized.
inline DensityMatrix tomography(const std::vector<PauliSettingCounts>& settings) {
    double counts[3][3][4] = {};
    bool present[3][3] = {};
    for (const PauliSettingCounts& s : settings) {
        if (s.alice_axis < 0 || s.alice_axis > 2 || s.bob_axis < 0 || s.bob_axis > 2)
            throw InsufficientData("Pauli axis index outside {0, 1, 2}");
        for (double c : s.counts)
            if (!(c >= 0.0)) throw InsufficientData("negative count");
        present[s.alice_axis][s.bob_axis] = true;
        for (int o = 0; o < 4; ++o) counts[s.alice_axis][s.bob_axis][o] += s.counts[o];
    }
    double total[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            if (!present[i][j]) throw InsufficientData("missing Pauli pair setting");
            total[i][j] = counts[i][j][0] + counts[i][j][1] + counts[i][j][2] + counts[i][j][3];
            if (total[i][j] <= 0.0) throw InsufficientData("setting has zero total counts");
        }

    // Correlators S_ij; single-qubit terms pool the three settings that share
    // the relevant local axis.
    double s[4][4] = {};
    s[0][0] = 1.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) s[i + 1][j + 1] = detail::correlator(counts[i][j]);
        double num = 0.0, den = 0.0;
        for (int j = 0; j < 3; ++j) {
            num += detail::marginal_a(counts[i][j]);
            den += total[i][j];
        }
        s[i + 1][0] = num / den;
    }
    for (int j = 0; j < 3; ++j) {
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += detail::marginal_b(counts[i][j]);
            den += total[i][j];
        }
        s[0][j + 1] = num / den;
    }

    const Mat2& id = pauli::identity();
    const auto op = [&](int i) -> const Mat2& { return i == 0 ? id : pauli::sigma(i - 1); };
    Mat4 lin;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) lin = lin + cxd(0.25 * s[i][j], 0.0) * tensor(op(i), op(j));

    auto sys = hermitian_eigensystem(lin, 1e-8);
    auto& vals = sys.values;
    for (int pass = 0; pass < 8; ++pass) {
        double deficit = 0.0;
        int positives = 0;
        for (double v : vals) {
            if (v < 0.0)
                deficit += v;
            else if (v > 0.0)
                ++positives;
        }
        if (deficit == 0.0) break;
        if (positives == 0) throw InsufficientData("PSD projection exhausted all eigenvalues");
        const double share = deficit / positives;
        for (double& v : vals) v = v < 0.0 ? 0.0 : (v > 0.0 ? v + share : v);
    }
    double trace = 0.0;
    for (double& v : vals) {
        v = std::max(0.0, v);
        trace += v;
    }
    Mat4 out;
    for (int k = 0; k < 4; ++k) {
        const double w = vals[k] / trace;
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) out(r, c) += w * sys.vectors(r, k) * std::conj(sys.vectors(c, k));
    }
    return DensityMatrix::from_matrix(out);
}

namespace detail {

inline const Vec3 kAxis[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};

// Stage tags for substream derivation.
inline constexpr std::uint64_t kStageBell = 0, kStageSteering = 1, kStageTomography = 2,
                               kStageBootstrap = 3;

struct ExperimentLayout {
    std::vector<std::pair<Vec3, Vec3>> bell;      // a1b1, a1b2, a2b1, a2b2
    std::vector<std::pair<Vec3, Vec3>> steering;  // one per axis; absent Alice handled below
    std::vector<bool> steering_defined;
    std::vector<std::pair<Vec3, Vec3>> tomo;  // 9 Pauli pairs, row-major (i, j)
};

inline ExperimentLayout experiment_layout(const DensityMatrix& rho_true) {
    ExperimentLayout lay;
    const ChshSettings chsh = optimal_chsh_settings(rho_true);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) lay.bell.emplace_back(chsh.alice[i], chsh.bob[j]);

    const Mat3 t = correlation_data(rho_true).T;
    static const AxisSet axes16 = combined_axes_16();
    for (const Vec3& n : axes16.axes) {
        const Vec3 image = t.apply(n);
        const bool defined = norm(image) > 1e-12;
        lay.steering_defined.push_back(defined);
        lay.steering.emplace_back(defined ? normalized(image) : Vec3{0, 0, 1}, n);
    }

    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) lay.tomo.emplace_back(kAxis[i], kAxis[j]);
    return lay;
}

struct ExperimentCounts {
    std::vector<std::array<double, 4>> bell, steering, tomo;
};

inline double bell_estimate(const ExperimentCounts& c) {
    return correlator(c.bell[0]) + correlator(c.bell[1]) + correlator(c.bell[2]) - correlator(c.bell[3]);
}

inline double steering_estimate(const ExperimentCounts& c, const ExperimentLayout& lay) {
    double sum = 0.0;
    for (std::size_t k = 0; k < c.steering.size(); ++k)
        if (lay.steering_defined[k]) sum += correlator(c.steering[k]);
    return sum / static_cast<double>(c.steering.size());
}

struct TomoEstimates {
    double concurrence = 0.0;
    double t_u = 0.0;
};

inline TomoEstimates tomo_estimates(const ExperimentCounts& c) {
    std::vector<PauliSettingCounts> settings(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            PauliSettingCounts& s = settings[i * 3 + j];
            s.alice_axis = i;
            s.bob_axis = j;
            s.counts = c.tomo[i * 3 + j];
        }
    const DensityMatrix rho_hat = tomography(settings);
    TomoEstimates est;
    est.concurrence = concurrence(rho_hat).value;
    // Estimation path: the family scope guards are statistical noise here, so
    // they are disabled; the certificate uses the measured diagonal components.
    CanonicalOptions loose;
    loose.off_diag_tol = std::numeric_limits<double>::infinity();
    loose.tx_ty_tol = std::numeric_limits<double>::infinity();
    est.t_u = unsteering_t(rho_hat, loose);
    return est;
}

inline std::array<double, 4> to_doubles(const std::array<std::uint64_t, 4>& n) {
    return {static_cast<double>(n[0]), static_cast<double>(n[1]), static_cast<double>(n[2]),
            static_cast<double>(n[3])};
}

}  // namespace detail

// Simulates the full experiment at one state: S and T16 directly from
// inequality-test counts, C and t_U from tomography, each with a parametric
// bootstrap standard error (counts resampled Poisson around observed values).
inline std::map<std::string, EstimateWithError> estimate_measures(const DensityMatrix& rho_true,
                                                                  double mean_counts,
                                                                  std::uint64_t seed,
                                                                  int replicas = 100) {
    if (replicas < 2) throw DomainError("replicas must be >= 2");
    const detail::ExperimentLayout lay = detail::experiment_layout(rho_true);

    detail::ExperimentCounts observed;
    const auto collect = [&](const std::vector<std::pair<Vec3, Vec3>>& settings, std::uint64_t stage) {
        std::vector<std::array<double, 4>> out;
        for (const CountRecord& rec :
             simulate_counts(rho_true, settings, mean_counts, substream_seed(seed, {stage})))
            out.push_back(detail::to_doubles(rec.counts));
        return out;
    };
    observed.bell = collect(lay.bell, detail::kStageBell);
    observed.steering = collect(lay.steering, detail::kStageSteering);
    observed.tomo = collect(lay.tomo, detail::kStageTomography);

    const double s_hat = detail::bell_estimate(observed);
    const double t16_hat = detail::steering_estimate(observed, lay);
    const detail::TomoEstimates tomo_hat = detail::tomo_estimates(observed);

    // Parametric bootstrap; every replica draws from substreams indexed by
    // (replica, stage, setting, outcome), so the replica loop can be
    // partitioned arbitrarily.
    struct Replica {
        double s, t16, c, t_u;
    };
    std::vector<Replica> reps(replicas);
    parallel_for_index(static_cast<std::size_t>(replicas), [&](std::size_t r) {
        detail::ExperimentCounts resampled;
        const auto resample = [&](const std::vector<std::array<double, 4>>& obs, std::uint64_t stage) {
            std::vector<std::array<double, 4>> out(obs.size());
            for (std::size_t k = 0; k < obs.size(); ++k)
                for (int o = 0; o < 4; ++o) {
                    SplitMix64 rng(substream_seed(
                        seed, {detail::kStageBootstrap, r, stage, k, static_cast<std::uint64_t>(o)}));
                    out[k][o] = static_cast<double>(poisson_sample(obs[k][o], rng));
                }
            return out;
        };
        resampled.bell = resample(observed.bell, detail::kStageBell);
        resampled.steering = resample(observed.steering, detail::kStageSteering);
        resampled.tomo = resample(observed.tomo, detail::kStageTomography);
        const detail::TomoEstimates tomo = detail::tomo_estimates(resampled);
        reps[r] = {detail::bell_estimate(resampled), detail::steering_estimate(resampled, lay),
                   tomo.concurrence, tomo.t_u};
    });

    const auto stddev = [&](auto proj) {
        double mean = 0.0;
        for (const Replica& r : reps) mean += proj(r);
        mean /= replicas;
        double ss = 0.0;
        for (const Replica& r : reps) {
            const double d = proj(r) - mean;
            ss += d * d;
        }
        return std::sqrt(ss / (replicas - 1));
    };

    std::map<std::string, EstimateWithError> out;
    out["bell_S"] = {s_hat, stddev([](const Replica& r) { return r.s; }), replicas};
    out["steering_T16"] = {t16_hat, stddev([](const Replica& r) { return r.t16; }), replicas};
    out["concurrence"] = {tomo_hat.concurrence, stddev([](const Replica& r) { return r.c; }), replicas};
    out["unsteering_tU"] = {tomo_hat.t_u, stddev([](const Replica& r) { return r.t_u; }), replicas};
    return out;
}

}  // namespace qcorr
