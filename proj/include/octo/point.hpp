#pragma once

// Points of O^2.  The 16 real coordinates are ordered (slot, basis index):
// x_{1,0} .. x_{1,7}, x_{2,0} .. x_{2,7}.

#include <array>
#include <cmath>

#include "octo/octonion.hpp"

namespace octo {

template <class T>
struct OPoint {
    Octonion<T> x1, x2;
    /// Set only on the output of seed(): coordinate i is the jet variable i.
    /// Leaf fields use it to build their jets directly.
    bool seeded = false;

    OPoint() = default;
    OPoint(const Octonion<T>& a, const Octonion<T>& b) : x1(a), x2(b) {}

    T& operator[](int i) { return i < 8 ? x1.c[i] : x2.c[i - 8]; }
    const T& operator[](int i) const { return i < 8 ? x1.c[i] : x2.c[i - 8]; }

    const Octonion<T>& slot(int alpha) const { return alpha == 0 ? x1 : x2; }
    Octonion<T>& slot(int alpha) { return alpha == 0 ? x1 : x2; }

    friend OPoint operator+(OPoint a, const OPoint& b) {
        a.x1 += b.x1;
        a.x2 += b.x2;
        return a;
    }
    friend OPoint operator-(OPoint a, const OPoint& b) {
        a.x1 -= b.x1;
        a.x2 -= b.x2;
        return a;
    }
    friend OPoint operator*(OPoint a, const real_of_t<T>& s) { return {a.x1 * s, a.x2 * s}; }
    friend OPoint operator*(const real_of_t<T>& s, OPoint a) { return a * s; }
};

using Point = OPoint<double>;

template <class T>
T norm2(const OPoint<T>& x) {
    return norm2(x.x1) + norm2(x.x2);
}

inline double norm(const Point& x) { return std::sqrt(norm2(x)); }

/// Euclidean inner product of the 16 coordinates, i.e. Re(x1 conj(y1) + x2 conj(y2)).
template <class T>
T dot(const OPoint<T>& x, const OPoint<T>& y) {
    T s = x[0] * y[0];
    for (int i = 1; i < kVars; ++i) s += x[i] * y[i];
    return s;
}

inline Point point_from(const std::array<double, kVars>& v) {
    Point p;
    for (int i = 0; i < kVars; ++i) p[i] = v[i];
    return p;
}

inline std::array<double, kVars> coords(const Point& p) {
    std::array<double, kVars> v{};
    for (int i = 0; i < kVars; ++i) v[i] = p[i];
    return v;
}

/// Point with a single nonzero coordinate: value `v` in slot `alpha`, basis index `p`.
inline Point axis_point(int alpha, int p, double v) {
    Point x;
    x[alpha * 8 + p] = v;
    return x;
}

/// Coordinate jets seeded at x: coordinate i carries derivative e_i.
template <class J>
OPoint<J> seed(const OPoint<real_of_t<J>>& x) {
    OPoint<J> s;
    for (int i = 0; i < kVars; ++i) s[i] = J::variable(x[i], i);
    s.seeded = true;
    return s;
}

template <class R>
OPoint<R> to_real_point(const Point& x) {
    OPoint<R> r;
    for (int i = 0; i < kVars; ++i) r[i] = static_cast<R>(x[i]);
    return r;
}

template <class T>
OPoint<T> lift_point(const Point& x) {
    OPoint<T> r;
    for (int i = 0; i < kVars; ++i) r[i] = lift<T>(x[i]);
    return r;
}

template <class T>
Point value_point(const OPoint<T>& x) {
    Point r;
    for (int i = 0; i < kVars; ++i) r[i] = to_double(value(x[i]));
    return r;
}

} // namespace octo
