#pragma once

// Octonions as pairs of quaternions.
//
// Basis: e0..e3 are (1, i, j, k) in the first quaternion slot, e4..e7 are
// (0, 1), (0, i), (0, j), (0, k).  The product is
//
//     (a, b)(c, d) = (a c - conj(d) b,  d a + b conj(c)).
//
// Everything is templated on the coefficient type so the same code runs on
// double, quad and on derivative jets.

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

#include "octo/errors.hpp"
#include "octo/jet.hpp"

namespace octo {

template <class T>
struct Quaternion {
    std::array<T, 4> q{};

    Quaternion() = default;
    Quaternion(T w, T x, T y, T z) : q{w, x, y, z} {}

    friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.q[0] + b.q[0], a.q[1] + b.q[1], a.q[2] + b.q[2], a.q[3] + b.q[3]};
    }
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.q[0] - b.q[0], a.q[1] - b.q[1], a.q[2] - b.q[2], a.q[3] - b.q[3]};
    }
    friend Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        const auto& x = a.q;
        const auto& y = b.q;
        return {x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3],
                x[0] * y[1] + x[1] * y[0] + x[2] * y[3] - x[3] * y[2],
                x[0] * y[2] - x[1] * y[3] + x[2] * y[0] + x[3] * y[1],
                x[0] * y[3] + x[1] * y[2] - x[2] * y[1] + x[3] * y[0]};
    }
    [[nodiscard]] Quaternion conj() const { return {q[0], -q[1], -q[2], -q[3]}; }
};

template <class T>
struct Octonion {
    using value_type = T;
    std::array<T, 8> c{};

    Octonion() = default;
    explicit Octonion(const std::array<T, 8>& coeffs) : c(coeffs) {}
    /// Real scalar embedded as a multiple of e0.
    explicit Octonion(T re) { c[0] = re; }

    static Octonion unit(int p) {
        Octonion o;
        o.c[p] = T(1);
        return o;
    }

    static Octonion from_pair(const Quaternion<T>& a, const Quaternion<T>& b) {
        Octonion o;
        for (int i = 0; i < 4; ++i) {
            o.c[i] = a.q[i];
            o.c[4 + i] = b.q[i];
        }
        return o;
    }
    [[nodiscard]] Quaternion<T> first() const { return {c[0], c[1], c[2], c[3]}; }
    [[nodiscard]] Quaternion<T> second() const { return {c[4], c[5], c[6], c[7]}; }

    T& operator[](int p) { return c[p]; }
    const T& operator[](int p) const { return c[p]; }

    Octonion& operator+=(const Octonion& o) {
        for (int p = 0; p < 8; ++p) c[p] += o.c[p];
        return *this;
    }
    Octonion& operator-=(const Octonion& o) {
        for (int p = 0; p < 8; ++p) c[p] -= o.c[p];
        return *this;
    }
    friend Octonion operator+(Octonion a, const Octonion& b) { return a += b; }
    friend Octonion operator-(Octonion a, const Octonion& b) { return a -= b; }
    friend Octonion operator-(Octonion a) {
        for (auto& x : a.c) x = -x;
        return a;
    }
    friend Octonion operator*(const Octonion& x, const Octonion& y) {
        const auto a = x.first(), b = x.second();
        const auto cq = y.first(), d = y.second();
        return from_pair(a * cq - d.conj() * b, d * a + b * cq.conj());
    }
    friend Octonion operator*(Octonion a, const real_of_t<T>& s) {
        for (auto& x : a.c) x = x * s;
        return a;
    }
    friend Octonion operator*(const real_of_t<T>& s, Octonion a) { return a * s; }
    /// Multiplication by a real-valued scalar of the coefficient type (e.g. a jet).
    [[nodiscard]] Octonion scaled(const T& s) const {
        Octonion r = *this;
        for (auto& x : r.c) x = x * s;
        return r;
    }
};

using Oct = Octonion<double>;

template <class T>
Octonion<T> conj(const Octonion<T>& x) {
    Octonion<T> r = x;
    for (int p = 1; p < 8; ++p) r.c[p] = -r.c[p];
    return r;
}

template <class T>
T re(const Octonion<T>& x) {
    return x.c[0];
}

template <class T>
Octonion<T> im(const Octonion<T>& x) {
    Octonion<T> r = x;
    r.c[0] = T(0);
    return r;
}

template <class T>
T norm2(const Octonion<T>& x) {
    T s = x.c[0] * x.c[0];
    for (int p = 1; p < 8; ++p) s += x.c[p] * x.c[p];
    return s;
}

template <class T>
T norm(const Octonion<T>& x) {
    return sqrt_(norm2(x));
}

/// Real part of a product without forming the product.
template <class T>
T re_mul(const Octonion<T>& a, const Octonion<T>& b) {
    T s = a.c[0] * b.c[0];
    for (int p = 1; p < 8; ++p) s -= a.c[p] * b.c[p];
    return s;
}

template <class T>
Octonion<T> inv(const Octonion<T>& x) {
    const T n2 = norm2(x);
    if (value(n2) == 0) throw DomainError("octonion", "inverse of zero");
    return conj(x).scaled(recip(n2));
}

template <class T>
Octonion<T> lift_oct(const Oct& x) {
    Octonion<T> r;
    for (int p = 0; p < 8; ++p) r.c[p] = lift<T>(x.c[p]);
    return r;
}

template <class T>
Oct value_oct(const Octonion<T>& x) {
    Oct r;
    for (int p = 0; p < 8; ++p) r.c[p] = to_double(value(x.c[p]));
    return r;
}

/// The common value of Re((ab)c) and Re(a(bc)).  Both parenthesizations are
/// evaluated and must agree to 1e-12 relative to |a||b||c|.
inline double re_triple(const Oct& a, const Oct& b, const Oct& c) {
    const double left = re((a * b) * c);
    const double right = re(a * (b * c));
    const double scale = std::sqrt(norm2(a) * norm2(b) * norm2(c));
    if (std::fabs(left - right) > 1e-12 * std::max(scale, 1e-300))
        throw ContractError("octonion", "Re((ab)c) and Re(a(bc)) disagree");
    return 0.5 * (left + right);
}

struct BasisProduct {
    int sign;
    int index;
};

/// Multiplication table e_p e_q = sign * e_index derived from the pair product.
inline std::array<std::array<BasisProduct, 8>, 8> basis_table() {
    std::array<std::array<BasisProduct, 8>, 8> t{};
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            const Oct r = Oct::unit(p) * Oct::unit(q);
            int idx = -1, sign = 0, nonzero = 0;
            for (int k = 0; k < 8; ++k) {
                if (r.c[k] != 0.0) {
                    ++nonzero;
                    idx = k;
                    sign = r.c[k] > 0 ? 1 : -1;
                    if (std::fabs(r.c[k]) != 1.0) nonzero = 99;
                }
            }
            if (nonzero != 1) throw ContractError("octonion", "basis product is not a signed unit");
            t[p][q] = {sign, idx};
        }
    return t;
}

inline std::ostream& operator<<(std::ostream& os, const Oct& x) {
    os << '(';
    for (int p = 0; p < 8; ++p) os << (p ? ", " : "") << x.c[p];
    return os << ')';
}

} // namespace octo
