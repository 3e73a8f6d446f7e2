#pragma once

#include <cstdint>

namespace gkt {

// Counter-based deterministic random numbers. Every value is a pure function
// of (seed, counters), so draws are reproducible across platforms, runs and
// thread schedules. The mixer is the splitmix64 finalizer applied to the
// golden-ratio-weighted combination of the counters.

namespace rng {

constexpr uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

inline uint64_t mix64(uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

/// 64 uniform bits for the counter tuple (a, b, c, d) under `seed`.
inline uint64_t hash(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0, uint64_t d = 0) {
    uint64_t h = seed + kGamma;
    h = mix64(h ^ mix64(a + kGamma));
    h = mix64(h ^ mix64(b + 2 * kGamma));
    h = mix64(h ^ mix64(c + 3 * kGamma));
    h = mix64(h ^ mix64(d + 4 * kGamma));
    return h;
}

/// Uniform double in the open interval (0, 1); never returns 0 or 1.
inline double uniform_open(uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_range(uint64_t bits, double lo, double hi) {
    double u = static_cast<double>(bits >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
}

/// Inverse of the standard normal CDF, evaluated at u in (0, 1).
/// Acklam's rational approximation refined with one Halley step; the result
/// is accurate to full double precision, and one uniform maps to exactly one
/// normal draw (no rejection), which keeps the counter accounting trivial.
double normal_quantile(double u);

/// N(0, sigma^2) draw for the given counter tuple.
inline double normal(uint64_t seed, double sigma, uint64_t a, uint64_t b = 0, uint64_t c = 0,
                     uint64_t d = 0) {
    if (sigma == 0.0) return 0.0;
    return sigma * normal_quantile(uniform_open(hash(seed, a, b, c, d)));
}

} // namespace rng
} // namespace gkt
