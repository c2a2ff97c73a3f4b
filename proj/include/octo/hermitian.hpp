#pragma once

// 2x2 Hermitian matrices over the octonions.
//
//     A = [ a11        a12 ]
//         [ conj(a12)  a22 ]
//
// with a11, a22 real.  det A = a11 a22 - |a12|^2 and the mixed determinant is
// the polarization of det.

#include <array>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "octo/errors.hpp"
#include "octo/octonion.hpp"
#include "octo/random.hpp"

namespace octo {

template <class T>
struct Hermitian2 {
    T a11{}, a22{};
    Octonion<T> a12{};

    static Hermitian2 identity() {
        Hermitian2 h;
        h.a11 = T(1);
        h.a22 = T(1);
        return h;
    }
    static Hermitian2 diag(T a, T b) {
        Hermitian2 h;
        h.a11 = a;
        h.a22 = b;
        return h;
    }
    [[nodiscard]] Octonion<T> a21() const { return conj(a12); }

    friend Hermitian2 operator+(Hermitian2 a, const Hermitian2& b) {
        a.a11 += b.a11;
        a.a22 += b.a22;
        a.a12 += b.a12;
        return a;
    }
    friend Hermitian2 operator-(Hermitian2 a, const Hermitian2& b) {
        a.a11 -= b.a11;
        a.a22 -= b.a22;
        a.a12 -= b.a12;
        return a;
    }
    friend Hermitian2 operator*(Hermitian2 a, const real_of_t<T>& s) {
        a.a11 = a.a11 * s;
        a.a22 = a.a22 * s;
        a.a12 = a.a12 * s;
        return a;
    }
    friend Hermitian2 operator*(const real_of_t<T>& s, const Hermitian2& a) { return a * s; }
};

using Herm = Hermitian2<double>;

template <class T>
struct OctVector2 {
    Octonion<T> v1, v2;
};

using OVec = OctVector2<double>;

template <class T>
T det(const Hermitian2<T>& A) {
    return A.a11 * A.a22 - norm2(A.a12);
}

template <class T>
T mixed_det(const Hermitian2<T>& A, const Hermitian2<T>& B) {
    // a12 b21 = a12 conj(b12); only its real part enters.
    return (A.a11 * B.a22 + A.a22 * B.a11 - T(2) * re_mul(A.a12, conj(B.a12))) * real_of_t<T>(0.5);
}

/// xi (x) xi*: entries conj(xi_j) xi_k.
template <class T>
Hermitian2<T> outer(const OctVector2<T>& xi) {
    Hermitian2<T> h;
    h.a11 = norm2(xi.v1);
    h.a22 = norm2(xi.v2);
    h.a12 = conj(xi.v1) * xi.v2;
    return h;
}

/// Re(xi* A xi) = a11|xi1|^2 + a22|xi2|^2 + 2 Re(conj(xi1) (a12 xi2)).
template <class T>
T quad_form(const Hermitian2<T>& A, const OctVector2<T>& xi) {
    return A.a11 * norm2(xi.v1) + A.a22 * norm2(xi.v2) + T(2) * re_mul(conj(xi.v1), A.a12 * xi.v2);
}

inline constexpr double kDefaultTol = 1e-10;

/// Nonnegativity of a Hermitian 2x2 matrix: both diagonal entries and the
/// determinant are >= -tol.
inline bool is_nonneg(const Herm& A, double tol = kDefaultTol) {
    return A.a11 >= -tol && A.a22 >= -tol && det(A) >= -tol;
}

namespace detail {

/// Fixed quasi-random unit directions in O^2 (Halton points pushed through the
/// normal quantile and normalized), followed by the 16 coordinate directions.
inline const std::vector<OVec>& direction_set() {
    static const std::vector<OVec> dirs = [] {
        std::vector<OVec> out;
        out.reserve(512 + 16);
        for (std::uint64_t n = 1; n <= 512; ++n) {
            const auto u = halton<16>(n);
            OVec v;
            double s = 0;
            for (int i = 0; i < 16; ++i) {
                const double g = normal_quantile(u[i]);
                (i < 8 ? v.v1.c[i] : v.v2.c[i - 8]) = g;
                s += g * g;
            }
            s = 1.0 / std::sqrt(s);
            v.v1 = v.v1 * s;
            v.v2 = v.v2 * s;
            out.push_back(v);
        }
        for (int i = 0; i < 16; ++i) {
            OVec v;
            (i < 8 ? v.v1.c[i] : v.v2.c[i - 8]) = 1.0;
            out.push_back(v);
        }
        return out;
    }();
    return dirs;
}

} // namespace detail

/// Sampled quadratic-form test: min over the fixed direction set of Re(xi* A xi).
inline double min_quad_form(const Herm& A) {
    double m = INFINITY;
    for (const auto& xi : detail::direction_set()) m = std::min(m, quad_form(A, xi));
    return m;
}

/// Dual-cone ("positive") membership, sampled: mixed_det(A, outer(zeta)) >= -tol
/// over the fixed direction set.
inline bool is_positive(const Herm& A, double tol = kDefaultTol) {
    for (const auto& z : detail::direction_set())
        if (mixed_det(A, outer(z)) < -tol) return false;
    return true;
}

/// mixed_det(A,B)^2 - det A det B, which is >= 0 for A > 0.
inline double cs_gap(const Herm& A, const Herm& B) {
    if (!(A.a11 > 0.0) || !(det(A) > 0.0)) throw DomainError("hermitian", "cs_gap needs a strictly positive A");
    const double m = mixed_det(A, B);
    return m * m - det(A) * det(B);
}

/// Coordinates (a11, a22, a12_0..a12_7) of a Hermitian matrix.
inline std::array<double, 10> herm_coords(const Herm& A) {
    std::array<double, 10> c{A.a11, A.a22};
    for (int p = 0; p < 8; ++p) c[2 + p] = A.a12.c[p];
    return c;
}

inline Herm herm_from_coords(const std::array<double, 10>& c) {
    Herm A;
    A.a11 = c[0];
    A.a22 = c[1];
    for (int p = 0; p < 8; ++p) A.a12.c[p] = c[2 + p];
    return A;
}

struct EspBasis {
    std::array<Herm, 10> h;     // elementary strongly positive: outer(xi_j)
    std::array<Herm, 10> dual;  // mixed_det(h_j, dual_k) = delta_jk
    std::array<OVec, 10> xi;
    double condition = 0;       // 2-norm condition number of the Gram matrix
};

/// Basis of the 10-dimensional space of Hermitian 2x2 matrices made of
/// elementary strongly positive elements outer(xi) with
/// xi in {(1,0), (0,1), (1,1), (1,e_1), ..., (1,e_7)}, plus its dual basis with
/// respect to mixed_det.
inline const EspBasis& esp_basis() {
    static const EspBasis basis = [] {
        EspBasis b;
        b.xi[0] = {Oct(1.0), Oct()};
        b.xi[1] = {Oct(), Oct(1.0)};
        b.xi[2] = {Oct(1.0), Oct(1.0)};
        for (int p = 1; p < 8; ++p) b.xi[2 + p] = {Oct(1.0), Oct::unit(p)};
        for (int j = 0; j < 10; ++j) b.h[j] = outer(b.xi[j]);

        Eigen::Matrix<double, 10, 10> G;
        for (int j = 0; j < 10; ++j)
            for (int k = 0; k < 10; ++k) G(j, k) = mixed_det(b.h[j], b.h[k]);
        Eigen::JacobiSVD<Eigen::Matrix<double, 10, 10>> svd(G);
        const auto& sv = svd.singularValues();
        if (sv(9) <= 1e-12 * sv(0)) throw ContractError("hermitian", "strongly positive basis is degenerate");
        b.condition = sv(0) / sv(9);
        const Eigen::Matrix<double, 10, 10> Ginv = G.inverse();
        for (int k = 0; k < 10; ++k) {
            std::array<double, 10> c{};
            for (int m = 0; m < 10; ++m) {
                const auto hm = herm_coords(b.h[m]);
                for (int i = 0; i < 10; ++i) c[i] += Ginv(k, m) * hm[i];
            }
            b.dual[k] = herm_from_coords(c);
        }
        return b;
    }();
    return basis;
}

} // namespace octo
