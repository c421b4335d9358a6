#ifndef RECLAB_RNG_HPP
#define RECLAB_RNG_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

namespace reclab {

namespace detail {

inline std::uint64_t splitmix64_finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

} // namespace detail

/// Counter-based seed derivation: mix64(seed, index) is the splitmix64
/// finalizer applied to seed + GOLDEN * (index + 1), GOLDEN = 0x9E3779B97F4A7C15.
/// Per-draw streams derived this way make parallel and sequential Monte Carlo
/// produce identical results.
inline std::uint64_t mix64(std::uint64_t seed, std::uint64_t index) {
    return detail::splitmix64_finalize(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

/// splitmix64 generator (Vigna). Satisfies UniformRandomBitGenerator.
class SplitMix64 {
public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return detail::splitmix64_finalize(state_);
    }

private:
    std::uint64_t state_;
};

/// Uniform draw in [0, 1) with 53 random bits.
inline double uniform01(SplitMix64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

/// Unit exponential by inversion.
inline double draw_exponential(SplitMix64& rng) {
    return -std::log1p(-uniform01(rng));
}

/// Standard normal via Box-Muller (two uniforms per draw, no cached state).
inline double draw_normal(SplitMix64& rng) {
    const double u1 = 1.0 - uniform01(rng); // (0, 1]
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

/// Gamma(shape, 1) for shape >= 1 via Marsaglia-Tsang squeeze rejection.
inline double draw_gamma(SplitMix64& rng, double shape) {
    if (!(shape >= 1.0)) throw std::invalid_argument("draw_gamma: shape must be >= 1");
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        const double x = draw_normal(rng);
        const double t = 1.0 + c * x;
        if (t <= 0.0) continue;
        const double v = t * t * t;
        const double u = uniform01(rng);
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
}

/// Beta(a, b) as the two-Gamma ratio G_a / (G_a + G_b).
inline double draw_beta(SplitMix64& rng, int a, int b) {
    if (a < 1 || b < 1) throw std::invalid_argument("draw_beta: shapes must be >= 1");
    const double ga = draw_gamma(rng, double(a));
    const double gb = draw_gamma(rng, double(b));
    return ga / (ga + gb);
}

} // namespace reclab

#endif // RECLAB_RNG_HPP
