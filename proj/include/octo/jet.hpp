#pragma once

// Forward-mode second- and third-order jets in the 16 real coordinates of O^2.
//
// A Jet<R, 2> carries value, gradient and the packed upper triangle of the
// Hessian; Jet<R, 3> additionally carries the packed third-derivative tensor.
// Arithmetic propagates all orders exactly (Leibniz / Faa di Bruno), so a
// closed-form field evaluated on seeded coordinate jets yields its exact
// derivatives up to rounding.

#include <array>
#include <cstddef>
#include <type_traits>

#include "octo/real.hpp"

namespace octo {

inline constexpr int kVars = 16;
inline constexpr int kHessSize = kVars * (kVars + 1) / 2;                  // 136
inline constexpr int kThirdSize = kVars * (kVars + 1) * (kVars + 2) / 6;  // 816

namespace detail {

struct JetTables {
    std::array<std::array<int, kVars>, kVars> h{};  // (i,j) -> packed
    std::array<std::array<int, 2>, kHessSize> hpair{};
    std::array<std::array<int, 3>, kThirdSize> ttriple{};
    // For each packed (i<=j<=k): packed indices of (ij),(ik),(jk).
    std::array<std::array<int, 3>, kThirdSize> tpairs{};

    constexpr JetTables() {
        int n = 0;
        for (int i = 0; i < kVars; ++i)
            for (int j = i; j < kVars; ++j) {
                h[i][j] = h[j][i] = n;
                hpair[n] = {i, j};
                ++n;
            }
        n = 0;
        for (int i = 0; i < kVars; ++i)
            for (int j = i; j < kVars; ++j)
                for (int k = j; k < kVars; ++k) {
                    ttriple[n] = {i, j, k};
                    tpairs[n] = {h[i][j], h[i][k], h[j][k]};
                    ++n;
                }
    }
};

inline constexpr JetTables kTables{};

inline int third_index(int i, int j, int k) {
    // sort three indices
    if (i > j) std::swap(i, j);
    if (j > k) std::swap(j, k);
    if (i > j) std::swap(i, j);
    // offset of block i, then of (j,k) inside it
    int idx = 0;
    for (int a = 0; a < i; ++a) {
        const int m = kVars - a;
        idx += m * (m + 1) / 2;
    }
    for (int b = i; b < j; ++b) idx += kVars - b;
    return idx + (k - j);
}

struct Empty {};

} // namespace detail

template <class R, int Order>
struct Jet {
    static_assert(Order == 2 || Order == 3, "jets are second or third order");
    using real_type = R;
    static constexpr int order = Order;

    R v{};
    std::array<R, kVars> g{};
    std::array<R, kHessSize> h{};
    [[no_unique_address]] std::conditional_t<(Order >= 3), std::array<R, kThirdSize>, detail::Empty> t{};

    Jet() = default;
    Jet(R value) : v(value) {}  // NOLINT: constants promote implicitly

    static Jet variable(R value, int index) {
        Jet j(value);
        j.g[index] = R(1);
        return j;
    }

    [[nodiscard]] R hess(int i, int j) const { return h[detail::kTables.h[i][j]]; }
    [[nodiscard]] R third(int i, int j, int k) const
        requires(Order >= 3)
    {
        return t[detail::third_index(i, j, k)];
    }

    Jet& operator+=(const Jet& o) {
        v += o.v;
        for (int i = 0; i < kVars; ++i) g[i] += o.g[i];
        for (int i = 0; i < kHessSize; ++i) h[i] += o.h[i];
        if constexpr (Order >= 3)
            for (int i = 0; i < kThirdSize; ++i) t[i] += o.t[i];
        return *this;
    }
    Jet& operator-=(const Jet& o) {
        v -= o.v;
        for (int i = 0; i < kVars; ++i) g[i] -= o.g[i];
        for (int i = 0; i < kHessSize; ++i) h[i] -= o.h[i];
        if constexpr (Order >= 3)
            for (int i = 0; i < kThirdSize; ++i) t[i] -= o.t[i];
        return *this;
    }
    Jet& operator*=(std::type_identity_t<R> s) {
        v *= s;
        for (auto& x : g) x *= s;
        for (auto& x : h) x *= s;
        if constexpr (Order >= 3)
            for (auto& x : t) x *= s;
        return *this;
    }
    Jet& operator+=(std::type_identity_t<R> s) {
        v += s;
        return *this;
    }
};

template <class R>
using Jet2 = Jet<R, 2>;
template <class R>
using Jet3 = Jet<R, 3>;

template <class T>
struct is_jet : std::false_type {};
template <class R, int O>
struct is_jet<Jet<R, O>> : std::true_type {};
template <class T>
inline constexpr bool is_jet_v = is_jet<T>::value;

// Real type underlying a scalar (double, quad, or a jet over either).
template <class T>
struct real_of {
    using type = T;
};
template <class R, int O>
struct real_of<Jet<R, O>> {
    using type = R;
};
template <class T>
using real_of_t = typename real_of<T>::type;

inline double value(double x) { return x; }
inline quad value(quad x) { return x; }
template <class R, int O>
R value(const Jet<R, O>& j) {
    return j.v;
}

template <class R, int O>
Jet<R, O> operator+(Jet<R, O> a, const Jet<R, O>& b) {
    return a += b;
}
template <class R, int O>
Jet<R, O> operator-(Jet<R, O> a, const Jet<R, O>& b) {
    return a -= b;
}
template <class R, int O>
Jet<R, O> operator-(Jet<R, O> a) {
    a *= R(-1);
    return a;
}
template <class R, int O>
Jet<R, O> operator+(Jet<R, O> a, std::type_identity_t<R> s) {
    return a += s;
}
template <class R, int O>
Jet<R, O> operator+(std::type_identity_t<R> s, Jet<R, O> a) {
    return a += s;
}
template <class R, int O>
Jet<R, O> operator-(Jet<R, O> a, std::type_identity_t<R> s) {
    return a += -s;
}
template <class R, int O>
Jet<R, O> operator-(std::type_identity_t<R> s, Jet<R, O> a) {
    a *= R(-1);
    return a += s;
}
template <class R, int O>
Jet<R, O> operator*(Jet<R, O> a, std::type_identity_t<R> s) {
    return a *= s;
}
template <class R, int O>
Jet<R, O> operator*(std::type_identity_t<R> s, Jet<R, O> a) {
    return a *= s;
}
template <class R, int O>
Jet<R, O> operator/(Jet<R, O> a, std::type_identity_t<R> s) {
    return a *= (R(1) / s);
}

template <class R, int O>
Jet<R, O> operator*(const Jet<R, O>& a, const Jet<R, O>& b) {
    Jet<R, O> r;
    r.v = a.v * b.v;
    for (int i = 0; i < kVars; ++i) r.g[i] = a.v * b.g[i] + b.v * a.g[i];
    const auto& hp = detail::kTables.hpair;
    for (int n = 0; n < kHessSize; ++n) {
        const int i = hp[n][0], j = hp[n][1];
        r.h[n] = a.v * b.h[n] + b.v * a.h[n] + a.g[i] * b.g[j] + a.g[j] * b.g[i];
    }
    if constexpr (O >= 3) {
        const auto& tt = detail::kTables.ttriple;
        const auto& tp = detail::kTables.tpairs;
        for (int n = 0; n < kThirdSize; ++n) {
            const int i = tt[n][0], j = tt[n][1], k = tt[n][2];
            const int ij = tp[n][0], ik = tp[n][1], jk = tp[n][2];
            r.t[n] = a.v * b.t[n] + b.v * a.t[n] + a.h[ij] * b.g[k] + a.h[ik] * b.g[j] + a.h[jk] * b.g[i] +
                     b.h[ij] * a.g[k] + b.h[ik] * a.g[j] + b.h[jk] * a.g[i];
        }
    }
    return r;
}

/// Composition phi(a) given phi and its first three derivatives at a.v.
template <class R, int O>
Jet<R, O> chain(const Jet<R, O>& a, R f0, R f1, R f2, R f3) {
    Jet<R, O> r;
    r.v = f0;
    for (int i = 0; i < kVars; ++i) r.g[i] = f1 * a.g[i];
    const auto& hp = detail::kTables.hpair;
    for (int n = 0; n < kHessSize; ++n) {
        const int i = hp[n][0], j = hp[n][1];
        r.h[n] = f2 * a.g[i] * a.g[j] + f1 * a.h[n];
    }
    if constexpr (O >= 3) {
        const auto& tt = detail::kTables.ttriple;
        const auto& tp = detail::kTables.tpairs;
        for (int n = 0; n < kThirdSize; ++n) {
            const int i = tt[n][0], j = tt[n][1], k = tt[n][2];
            r.t[n] = f3 * a.g[i] * a.g[j] * a.g[k] +
                     f2 * (a.h[tp[n][0]] * a.g[k] + a.h[tp[n][1]] * a.g[j] + a.h[tp[n][2]] * a.g[i]) + f1 * a.t[n];
        }
    } else {
        (void)f3;
    }
    return r;
}

// ---- elementary functions, overloaded for plain reals and jets ------------

inline double recip(double x) { return 1.0 / x; }
inline quad recip(quad x) { return quad(1) / x; }
template <class R, int O>
Jet<R, O> recip(const Jet<R, O>& a) {
    const R i1 = R(1) / a.v, i2 = i1 * i1;
    return chain(a, i1, -i2, R(2) * i2 * i1, R(-6) * i2 * i2);
}

template <class R, int O>
Jet<R, O> operator/(const Jet<R, O>& a, const Jet<R, O>& b) {
    return a * recip(b);
}

inline double sqrt_(double x) { return std::sqrt(x); }
inline quad sqrt_(quad x) { return sqrtq(x); }
template <class R, int O>
Jet<R, O> sqrt_(const Jet<R, O>& a) {
    const R s = rmath::sqrt(a.v);
    const R d1 = R(0.5) / s;
    const R d2 = R(-0.5) * d1 / a.v;
    const R d3 = R(-1.5) * d2 / a.v;
    return chain(a, s, d1, d2, d3);
}

/// x^k for real k (x > 0 unless k is handled by ipow).
inline double rpow(double x, double k) { return std::pow(x, k); }
inline quad rpow(quad x, double k) { return rmath::pow(x, k); }
template <class R, int O>
Jet<R, O> rpow(const Jet<R, O>& a, double k) {
    const R p = rmath::pow(a.v, k);
    const R x = a.v;
    const R d1 = R(k) * p / x;
    const R d2 = R(k - 1) * d1 / x;
    const R d3 = R(k - 2) * d2 / x;
    return chain(a, p, d1, d2, d3);
}

namespace detail {
template <class R>
R int_power(R x, int n) {
    R r(1);
    bool neg = n < 0;
    unsigned m = neg ? static_cast<unsigned>(-n) : static_cast<unsigned>(n);
    R b = x;
    while (m) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1u;
    }
    return neg ? R(1) / r : r;
}
} // namespace detail

/// x^n for integer n; valid for negative bases.
inline double ipow(double x, int n) { return detail::int_power(x, n); }
inline quad ipow(quad x, int n) { return detail::int_power(x, n); }
template <class R, int O>
Jet<R, O> ipow(const Jet<R, O>& a, int n) {
    const R x = a.v;
    auto term = [&](int k) -> R {
        // n (n-1) ... (n-k+1) x^(n-k)
        R c(1);
        for (int i = 0; i < k; ++i) c *= R(n - i);
        if (c == R(0)) return R(0);
        return c * detail::int_power(x, n - k);
    };
    return chain(a, detail::int_power(x, n), term(1), term(2), term(3));
}

inline double exp_(double x) { return std::exp(x); }
inline quad exp_(quad x) { return expq(x); }
template <class R, int O>
Jet<R, O> exp_(const Jet<R, O>& a) {
    const R e = rmath::exp(a.v);
    return chain(a, e, e, e, e);
}

inline double log_(double x) { return std::log(x); }
inline quad log_(quad x) { return logq(x); }
template <class R, int O>
Jet<R, O> log_(const Jet<R, O>& a) {
    const R i1 = R(1) / a.v;
    return chain(a, rmath::log(a.v), i1, -i1 * i1, R(2) * i1 * i1 * i1);
}

/// Lift a value of real type R (or a jet) to scalar type T.
template <class T, class R>
T lift(R x) {
    if constexpr (is_jet_v<T>) {
        return T(static_cast<real_of_t<T>>(x));
    } else {
        return static_cast<T>(x);
    }
}

/// Convert a jet over one real type to another (e.g. quad -> double).
template <class Rto, class Rfrom, int O>
Jet<Rto, O> convert(const Jet<Rfrom, O>& a) {
    Jet<Rto, O> r;
    r.v = static_cast<Rto>(a.v);
    for (int i = 0; i < kVars; ++i) r.g[i] = static_cast<Rto>(a.g[i]);
    for (int i = 0; i < kHessSize; ++i) r.h[i] = static_cast<Rto>(a.h[i]);
    if constexpr (O >= 3)
        for (int i = 0; i < kThirdSize; ++i) r.t[i] = static_cast<Rto>(a.t[i]);
    return r;
}

} // namespace octo
