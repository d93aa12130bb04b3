#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mrdcs {

// Seeded random source with explicit transforms on top of mt19937_64.
// The standard distribution objects are implementation-defined, so every
// variate here is derived from raw engine draws to keep streams
// reproducible for a given seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0,1) with 53-bit resolution.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on (0,1); rejects the (rare) exact zero.
    double uniform_pos() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via the Marsaglia polar method.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

    double chi_squared(unsigned df) {
        double s = 0.0;
        for (unsigned i = 0; i < df; ++i) {
            const double z = normal();
            s += z * z;
        }
        return s;
    }

    double student_t(unsigned df) {
        return normal() / std::sqrt(chi_squared(df) / static_cast<double>(df));
    }

    // Pareto(shape a, scale m) by inverse transform: m * U^(-1/a).
    double pareto(double shape, double scale) {
        return scale * std::pow(uniform_pos(), -1.0 / shape);
    }

    unsigned binomial(unsigned trials, double prob) {
        unsigned c = 0;
        for (unsigned i = 0; i < trials; ++i)
            if (uniform() < prob) ++c;
        return c;
    }

    // Uniform integer in [0, bound) by rejection; unbiased.
    std::uint64_t uniform_int(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t r;
        do {
            r = engine_();
        } while (r >= limit);
        return r % bound;
    }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// SplitMix64 finalizer; spreads structured seed inputs over the full
// 64-bit space.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Independent sub-stream seed for (base, stream); used to give each
// generator inside one replicate its own decorrelated source.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    return mix_seed(base + 0x9E3779B97F4A7C15ULL * (stream + 1));
}

}  // namespace mrdcs
