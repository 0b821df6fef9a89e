#pragma once

// Counter-derived random substreams and exact Poisson sampling. Every draw
// site derives its own generator from (seed, path indices), so results are
// identical no matter how work is ordered or partitioned across threads.

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace qcorr {

class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1); never returns 0 or 1.
    double next_double() {
        const std::uint64_t bits = next() >> 11;  // 53 bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

// Mixes a seed with a path of indices into an independent substream seed.
inline std::uint64_t substream_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    SplitMix64 mix(seed);
    std::uint64_t h = mix.next();
    for (std::uint64_t p : path) {
        SplitMix64 step(h ^ (p + 0x9e3779b97f4a7c15ULL));
        h = step.next();
    }
    return h;
}

namespace detail {

// Inversion by sequential search; exact for small means.
inline std::uint64_t poisson_small(double mean, SplitMix64& rng) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double prod = rng.next_double();
    while (prod > limit) {
        ++k;
        prod *= rng.next_double();
    }
    return k;
}

// Hormann's PTRS transformed-rejection sampler; exact for mean >= 10.
inline std::uint64_t poisson_ptrs(double mean, SplitMix64& rng) {
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);

    while (true) {
        const double u = rng.next_double() - 0.5;
        const double v = rng.next_double();
        const double us = 0.5 - std::abs(u);
        const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
        if (kf < 0.0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = kf * loglam - mean - std::lgamma(kf + 1.0);
        if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
}

}  // namespace detail

// Exact-distribution Poisson draw (no normal approximation at any mean).
inline std::uint64_t poisson_sample(double mean, SplitMix64& rng) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) return detail::poisson_small(mean, rng);
    return detail::poisson_ptrs(mean, rng);
}

}  // namespace qcorr
