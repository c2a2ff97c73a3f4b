#pragma once

// Octonionic gradient, Hessian and the T-map assembled from real jets.
//
//   g_alpha            = sum_p e_p du/dx_{alpha p}
//   Hess_{alpha-bar beta} = sum_{p,q} u_{(alpha p)(beta q)} e_p conj(e_q)
//   T(du (x) dv)_{alpha-bar beta}
//                      = 1/2 (g_alpha(u) conj(g_beta(v)) + g_alpha(v) conj(g_beta(u)))

#include <array>
#include <cmath>
#include <limits>

#include "octo/field.hpp"
#include "octo/hermitian.hpp"

namespace octo {

enum class Precision { Auto, Double, Quad };

template <class T>
struct OctGradient {
    Octonion<T> g1, g2;
    [[nodiscard]] const Octonion<T>& slot(int alpha) const { return alpha == 0 ? g1 : g2; }
};

using OGrad = OctGradient<double>;

namespace detail {

/// e_p conj(e_q) = sign * e_index.
inline const std::array<std::array<BasisProduct, 8>, 8>& conj_product_table() {
    static const auto table = [] {
        std::array<std::array<BasisProduct, 8>, 8> t{};
        for (int p = 0; p < 8; ++p)
            for (int q = 0; q < 8; ++q) {
                const Oct r = Oct::unit(p) * conj(Oct::unit(q));
                for (int k = 0; k < 8; ++k)
                    if (r.c[k] != 0.0) t[p][q] = {r.c[k] > 0 ? 1 : -1, k};
            }
        return t;
    }();
    return table;
}

/// e_p e_q = sign * e_index.
inline const std::array<std::array<BasisProduct, 8>, 8>& product_table() {
    static const auto table = basis_table();
    return table;
}

} // namespace detail

template <class R, int O>
OctGradient<R> oct_gradient(const Jet<R, O>& j) {
    OctGradient<R> g;
    for (int p = 0; p < 8; ++p) {
        g.g1.c[p] = j.g[p];
        g.g2.c[p] = j.g[8 + p];
    }
    return g;
}

/// The column vector du = (d_1 u, d_2 u) = (conj g_1, conj g_2); with this
/// identification outer(du) = T(du (x) du).
template <class T>
OctVector2<T> as_vector(const OctGradient<T>& g) {
    return {conj(g.g1), conj(g.g2)};
}

/// Entry (alpha-bar, beta) of the octonionic Hessian.
template <class R, int O>
Octonion<R> oct_hessian_entry(const Jet<R, O>& j, int alpha, int beta) {
    const auto& t = detail::conj_product_table();
    Octonion<R> e;
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            const auto& bp = t[p][q];
            const R h = j.hess(alpha * 8 + p, beta * 8 + q);
            e.c[bp.index] += bp.sign > 0 ? h : -h;
        }
    return e;
}

/// Full 2x2 array of octonionic entries, for checking Hermitian structure.
template <class R, int O>
std::array<std::array<Octonion<R>, 2>, 2> oct_hessian_entries(const Jet<R, O>& j) {
    std::array<std::array<Octonion<R>, 2>, 2> m;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m[a][b] = oct_hessian_entry(j, a, b);
    return m;
}

/// Hess_O as a Hermitian matrix.  The diagonal entries are the slot
/// Laplacians (real by construction of e_p conj(e_p) = 1).
template <class R, int O>
Hermitian2<R> oct_hessian(const Jet<R, O>& j) {
    Hermitian2<R> h;
    for (int p = 0; p < 8; ++p) {
        h.a11 += j.hess(p, p);
        h.a22 += j.hess(8 + p, 8 + p);
    }
    h.a12 = oct_hessian_entry(j, 0, 1);
    return h;
}

inline Herm oct_hessian(const ScalarField& f, const Point& x) { return oct_hessian(f.jet2(x)); }

inline OGrad oct_gradient(const ScalarField& f, const Point& x) { return oct_gradient(f.jet2(x)); }

template <class T>
Hermitian2<T> t_outer(const OctGradient<T>& du, const OctGradient<T>& dv) {
    Hermitian2<T> h;
    h.a11 = re_mul(du.g1, conj(dv.g1));
    h.a22 = re_mul(du.g2, conj(dv.g2));
    h.a12 = (du.g1 * conj(dv.g2) + dv.g1 * conj(du.g2)) * real_of_t<T>(0.5);
    return h;
}

namespace detail {

template <class R>
struct ClosednessResult {
    R residual;
    R magnitude;  // sum of |terms|, for a rounding bound
};

template <class R>
ClosednessResult<R> closedness(const Jet<R, 3>& j) {
    const auto& ct = conj_product_table();
    const auto& pt = product_table();
    R worst = R(0), mag = R(0);
    for (int alpha = 0; alpha < 2; ++alpha) {
        const int beta = 1 - alpha;
        // left  = sum_r ( sum_{p,q} u_{(a p)(b q)(b r)} e_p conj(e_q) ) e_r
        // right = sum_r e_r ( sum_p u_{(a r)(b p)(b p)} )
        Octonion<R> left, right;
        for (int r = 0; r < 8; ++r) {
            Octonion<R> inner;
            for (int p = 0; p < 8; ++p)
                for (int q = 0; q < 8; ++q) {
                    const auto& bp = ct[p][q];
                    const R v = j.third(alpha * 8 + p, beta * 8 + q, beta * 8 + r);
                    inner.c[bp.index] += bp.sign > 0 ? v : -v;
                    mag += rmath::abs(v);
                }
            for (int k = 0; k < 8; ++k) {
                const auto& bp = pt[k][r];
                left.c[bp.index] += bp.sign > 0 ? inner.c[k] : -inner.c[k];
            }
            R lap = R(0);
            for (int p = 0; p < 8; ++p) lap += j.third(alpha * 8 + r, beta * 8 + p, beta * 8 + p);
            right.c[r] += lap;
        }
        const Octonion<R> d = left - right;
        R n2 = norm2(d);
        const R n = rmath::sqrt(n2);
        if (n > worst) worst = n;
    }
    return {worst, mag};
}

} // namespace detail

/// max over alpha != beta of |(Hess u)_{alpha-bar beta} <- d_beta-bar  -  d_alpha-bar (Delta_beta u)|,
/// from exact third derivatives.  In Auto mode the double evaluation is
/// repeated in quad precision when its rounding bound exceeds `gate`.
inline double closedness_residual(const ScalarField& f, const Point& x, Precision prec = Precision::Auto,
                                  double gate = 1e-10) {
    if (prec != Precision::Quad) {
        const auto r = detail::closedness(f.jet3(x));
        const double bound = 256 * std::numeric_limits<double>::epsilon() * r.magnitude;
        if (prec == Precision::Double || bound <= gate) return r.residual;
    }
    const auto r = detail::closedness(f.jet3q(x));
    return to_double(r.residual);
}

} // namespace octo
