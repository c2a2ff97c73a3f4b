#pragma once

// Deterministic random and low-discrepancy streams.
//
// Every stream is keyed by (seed, stream id) through splitmix64, so a chunk of
// samples can be regenerated independently of any other chunk.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include <boost/math/distributions/normal.hpp>

namespace octo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t id) : eng_(splitmix64(seed ^ splitmix64(id + 0x5851f42d4c957f2dULL))) {}

    /// Uniform in [0, 1).
    double uniform() { return unif_(eng_); }

    /// Uniform in (0, 1].
    double uniform_open0() { return 1.0 - uniform(); }

    double normal() { return gauss_(eng_); }

private:
    std::mt19937_64 eng_;
    std::uniform_real_distribution<double> unif_{0.0, 1.0};
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

inline constexpr std::array<int, 20> kPrimes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};

inline double radical_inverse(std::uint64_t n, int base) {
    double inv = 1.0 / base, f = inv, r = 0.0;
    while (n > 0) {
        r += f * static_cast<double>(n % static_cast<std::uint64_t>(base));
        n /= static_cast<std::uint64_t>(base);
        f *= inv;
    }
    return r;
}

/// Halton point n (n >= 1 recommended) in [0,1)^dim, optionally shifted
/// modulo 1 (Cranley-Patterson rotation).
template <int Dim>
std::array<double, Dim> halton(std::uint64_t n, const std::array<double, Dim>* shift = nullptr) {
    static_assert(Dim <= static_cast<int>(kPrimes.size()));
    std::array<double, Dim> u{};
    for (int d = 0; d < Dim; ++d) {
        double v = radical_inverse(n, kPrimes[d]);
        if (shift) {
            v += (*shift)[d];
            v -= std::floor(v);
        }
        u[d] = v;
    }
    return u;
}

/// Standard normal quantile, used to push quasi-random points to Gaussians.
inline double normal_quantile(double p) {
    static const boost::math::normal_distribution<double> n01;
    p = std::clamp(p, 1e-300, 1.0 - 1e-16);
    return boost::math::quantile(n01, p);
}

} // namespace octo
