#pragma once

// Siegel half space, Heisenberg group, Cayley transform and the automorphisms
// T_a of the unit ball of O^2.
//
//   C(x)      = ( sqrt2 x1 (1+x2)^-1 , (1-x2)(1+x2)^-1 ),   C^-1 has the same form
//   tau_z(y)  = ( y1 + z1 , y2 + z2 + conj(z1) y1 )
//   D_d(y)    = ( d y1 , d^2 y2 )
//   T_a       = C^-1 o D_{d_a} o tau_{z_a} o C
//   Psi_a(x)  = G_a(x) (1+x2),   G_a = 1 + [D tau C(x)]_2
//
// Products are non-associative: every expression below is written with the
// parenthesization it is evaluated with.

#include <cmath>
#include <numbers>

#include "octo/catalog.hpp"
#include "octo/errors.hpp"
#include "octo/field.hpp"

namespace octo {

inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kDefaultEps0 = 0.05;
/// Jets of pullbacks are refused when |1 + x2| is below this.
inline constexpr double kPoleCollar = 0.1;

// ---- Heisenberg group -------------------------------------------------------

struct HeisPoint {
    Oct x;
    Oct t;  // purely imaginary
};

inline HeisPoint heis_mul(const HeisPoint& p, const HeisPoint& q) {
    return {p.x + q.x, p.t + q.t + im(conj(p.x) * q.x) * 2.0};
}

inline HeisPoint heis_inv(const HeisPoint& p) { return {-p.x, -p.t}; }

// ---- Siegel points ----------------------------------------------------------

template <class T>
struct SiegelPointT {
    Octonion<T> y1, y2;
    [[nodiscard]] T defect() const { return T(2) * re(y2) - norm2(y1); }
};

using SiegelPoint = SiegelPointT<double>;

template <class T>
SiegelPointT<T> cayley(const OPoint<T>& x) {
    using R = real_of_t<T>;
    const Octonion<T> one(lift<T>(1.0));
    const Octonion<T> p = one + x.x2;
    if (value(norm2(p)) == 0) throw DomainError("geometry", "Cayley transform at x2 = -1");
    const Octonion<T> pinv = inv(p);
    return {(x.x1 * R(kSqrt2)) * pinv, (one - x.x2) * pinv};
}

template <class T>
OPoint<T> cayley_inv(const SiegelPointT<T>& y) {
    using R = real_of_t<T>;
    const Octonion<T> one(lift<T>(1.0));
    const Octonion<T> p = one + y.y2;
    if (value(norm2(p)) == 0) throw DomainError("geometry", "inverse Cayley transform at y2 = -1");
    const Octonion<T> pinv = inv(p);
    return {(y.y1 * R(kSqrt2)) * pinv, (one - y.y2) * pinv};
}

inline double boundary_tol(const SiegelPoint& z) { return 1e-9 * std::max(1.0, norm2(z.y1) + norm(z.y2)); }

/// Heisenberg translation by a boundary point z.
template <class T>
SiegelPointT<T> tau(const SiegelPoint& z, const SiegelPointT<T>& y) {
    if (std::fabs(z.defect()) > boundary_tol(z))
        throw DomainError("geometry", "translation parameter is not on the Siegel boundary");
    const Octonion<T> z1 = lift_oct<T>(z.y1), z2 = lift_oct<T>(z.y2);
    return {y.y1 + z1, (y.y2 + z2) + conj(z1) * y.y1};
}

/// The inverse translation parameter (-z1, conj z2).
inline SiegelPoint tau_inverse_param(const SiegelPoint& z) { return {-z.y1, conj(z.y2)}; }

template <class T>
SiegelPointT<T> dilate(double d, const SiegelPointT<T>& y) {
    if (!(d > 0)) throw DomainError("geometry", "dilation factor must be positive");
    using R = real_of_t<T>;
    return {y.y1 * R(d), y.y2 * R(d * d)};
}

// ---- automorphism parameters -----------------------------------------------

struct AutomorphismParams {
    Point a;
    double delta = 1;
    SiegelPoint zeta;
};

/// delta_a = |1+a2| / sqrt(1 - |a|^2) and zeta_a, the projection of C(a) to the boundary:
///   zeta_a = ( -sqrt2 a1 (1+a2)^-1 ,  (|a1|^2 + 2 Im a2) / |1+a2|^2 ).
inline AutomorphismParams automorphism_params(const Point& a, double eps0 = kDefaultEps0) {
    const double na = norm(a);
    if (!(na <= 1.0 - eps0)) throw DomainError("geometry", "automorphism center too close to the sphere");
    AutomorphismParams P;
    P.a = a;
    const Oct one(1.0);
    const Oct p = one + a.x2;
    const double np2 = norm2(p);
    P.delta = std::sqrt(np2) / std::sqrt(1.0 - na * na);
    P.zeta.y1 = -((a.x1 * kSqrt2) * inv(p));
    P.zeta.y2 = (Oct(norm2(a.x1)) + im(a.x2) * 2.0) * (1.0 / np2);
    return P;
}

/// G_a(x) = 1 + delta^2 ( (1-x2)(1+x2)^-1 + zeta2 + conj(zeta1) (sqrt2 x1 (1+x2)^-1) ).
template <class T>
Octonion<T> g_a(const AutomorphismParams& P, const OPoint<T>& x) {
    using R = real_of_t<T>;
    const Octonion<T> one(lift<T>(1.0));
    const Octonion<T> p = one + x.x2;
    if (value(norm2(p)) == 0) throw DomainError("geometry", "G_a at x2 = -1");
    const Octonion<T> pinv = inv(p);
    const Octonion<T> z1 = lift_oct<T>(P.zeta.y1), z2 = lift_oct<T>(P.zeta.y2);
    const Octonion<T> inner = ((one - x.x2) * pinv + z2) + conj(z1) * ((x.x1 * R(kSqrt2)) * pinv);
    return one + inner * R(P.delta * P.delta);
}

/// Psi_a(x) = G_a(x) (1+x2).
template <class T>
Octonion<T> psi_a_g(const AutomorphismParams& P, const OPoint<T>& x) {
    const Octonion<T> one(lift<T>(1.0));
    return g_a(P, x) * (one + x.x2);
}

/// Expansion valid up to x2 = -1:
///   Psi_a = (1+delta^2) + (1-delta^2) x2 + delta^2 zeta2 (1+x2) + Rem,
///   Rem   = sqrt2 delta^2 (conj(zeta1) (x1 (1+x2)^-1)) (1+x2),   Rem = 0 at x2 = -1.
template <class T>
Octonion<T> psi_a_expansion(const AutomorphismParams& P, const OPoint<T>& x) {
    using R = real_of_t<T>;
    const R d2 = R(P.delta * P.delta);
    const Octonion<T> one(lift<T>(1.0));
    const Octonion<T> p = one + x.x2;
    const Octonion<T> z1 = lift_oct<T>(P.zeta.y1), z2 = lift_oct<T>(P.zeta.y2);
    Octonion<T> psi = one * (R(1) + d2) + x.x2 * (R(1) - d2) + (z2 * p) * d2;
    if (value(norm2(p)) > 0) psi += ((conj(z1) * (x.x1 * inv(p))) * p) * (R(kSqrt2) * d2);
    return psi;
}

/// Psi_a by its defining formula 2 (1 + [T_a(x)]_2)^-1 (1+x2), with T_a
/// evaluated as the composition C^-1 D tau C.
template <class T>
Octonion<T> psi_a_defining(const AutomorphismParams& P, const OPoint<T>& x);

/// T_a(x) through the composition C^-1 o D o tau o C (needs x2 != -1).
template <class T>
OPoint<T> t_a_composed(const AutomorphismParams& P, const OPoint<T>& x) {
    return cayley_inv(dilate(P.delta, tau(P.zeta, cayley(x))));
}

template <class T>
Octonion<T> psi_a_defining(const AutomorphismParams& P, const OPoint<T>& x) {
    const Octonion<T> one(lift<T>(1.0));
    const OPoint<T> t = t_a_composed(P, x);
    return (inv(one + t.x2) * real_of_t<T>(2)) * (one + x.x2);
}

/// Psi_a with the evaluation path chosen by distance to x2 = -1.
template <class T>
Octonion<T> psi_a(const AutomorphismParams& P, const OPoint<T>& x) {
    const Octonion<T> one(lift<T>(1.0));
    if (to_double(value(norm2(one + x.x2))) < kPoleCollar * kPoleCollar) return psi_a_expansion(P, x);
    return psi_a_g(P, x);
}

/// T_a from Psi_a:
///   [T_a x]_2 = -1 + 2 (1+x2) Psi^-1
///   [T_a x]_1 = sqrt2 delta ( sqrt2 x1 (1+x2)^-1 + zeta1 ) ((1+x2) Psi^-1)
/// written so that x2 = -1 (where T_a x = (0, -1)) is reachable.
template <class T>
OPoint<T> t_a(const AutomorphismParams& P, const OPoint<T>& x) {
    using R = real_of_t<T>;
    const Octonion<T> one(lift<T>(1.0));
    const Octonion<T> p = one + x.x2;
    const Octonion<T> psi = psi_a(P, x);
    const Octonion<T> w = p * inv(psi);  // (1+x2) Psi^-1 = G_a^-1
    OPoint<T> out;
    out.x2 = w * R(2) - one;
    if (value(norm2(p)) == 0) return out;  // x1 = 0 on the closed ball; T_a x = (0, -1)
    const Octonion<T> z1 = lift_oct<T>(P.zeta.y1);
    // Split the product so the large factor x1 (1+x2)^-1 meets w directly.
    const Octonion<T> y1w = ((x.x1 * R(kSqrt2)) * inv(p)) * w;
    out.x1 = (y1w + z1 * w) * R(kSqrt2 * P.delta);
    return out;
}

/// T_a^-1 = C^-1 o tau_{zeta^-1} o D_{1/delta} o C.
template <class T>
OPoint<T> t_a_inv(const AutomorphismParams& P, const OPoint<T>& x) {
    return cayley_inv(tau(tau_inverse_param(P.zeta), dilate(1.0 / P.delta, cayley(x))));
}

inline void check_in_ball(const Point& x) {
    if (norm2(x) > 1.0 + 1e-12) throw DomainError("geometry", "point outside the closed unit ball");
}

inline Point t_a(const Point& a, const Point& x, double eps0 = kDefaultEps0) {
    check_in_ball(x);
    return t_a(automorphism_params(a, eps0), x);
}

inline Point t_a_inv(const Point& a, const Point& x, double eps0 = kDefaultEps0) {
    check_in_ball(x);
    return t_a_inv(automorphism_params(a, eps0), x);
}

inline Oct psi_a(const Point& a, const Point& x, double eps0 = kDefaultEps0) {
    return psi_a(automorphism_params(a, eps0), x);
}

inline Oct g_a(const Point& a, const Point& x, double eps0 = kDefaultEps0) {
    return g_a(automorphism_params(a, eps0), x);
}

// ---- weighted pullbacks -----------------------------------------------------

namespace nodes {

/// x -> |Psi_a(x)|^-6 u(T_a x)   or, inverse, x -> |Psi_a(T_a^-1 x)|^6 u(T_a^-1 x).
class Pullback : public NodeBase<Pullback> {
public:
    Pullback(const AutomorphismParams& P, NodePtr u, bool inverse) : P_(P), u_(std::move(u)), inverse_(inverse) {}

    template <class T>
    T evaluate(const OPoint<T>& x) const {
        const Octonion<T> one(lift<T>(1.0));
        const double pole = to_double(value(norm2(one + x.x2)));
        if constexpr (is_jet_v<T>) {
            if (pole < kPoleCollar * kPoleCollar)
                throw DomainError("geometry", "pullback derivatives requested inside the x2 = -1 collar");
        }
        OPoint<T> y = x;
        y.seeded = false;
        if (!inverse_) {
            const Octonion<T> psi = psi_a(P_, y);
            const OPoint<T> t = t_a(P_, y);
            return ipow(norm2(psi), -3) * u_->eval(t);
        }
        const OPoint<T> s = t_a_inv(P_, y);
        const Octonion<T> psi = psi_a(P_, s);
        return ipow(norm2(psi), 3) * u_->eval(s);
    }

private:
    AutomorphismParams P_;
    NodePtr u_;
    bool inverse_;
};

} // namespace nodes

inline ScalarField weighted_pullback(const Point& a, const ScalarField& u, bool inverse = false,
                                     double eps0 = kDefaultEps0) {
    const auto P = automorphism_params(a, eps0);
    // a pole s of u moves to the preimage of s under the composed map
    std::vector<Point> sing;
    for (const auto& s : u.singular())
        if (norm(s) < 1.0) sing.push_back(inverse ? t_a(P, s) : t_a_inv(P, s));
    return {std::make_shared<nodes::Pullback>(P, u.node(), inverse),
            std::string(inverse ? "pullback_inv " : "pullback ") + fmt::point(a) + " " + u.text(), u.opsh(),
            std::move(sing), u.smooth()};
}

struct SecondDiffWeight {
    double J;
    Point L;
};

/// J(h,x) = |Psi_{x+h}(x+h) / Psi_x(x)|^6 and L(a,h,x) = T_{a+h}^-1(T_a(x)).
inline SecondDiffWeight second_diff_weight(const Point& a, const Point& h, const Point& x,
                                           double eps0 = kDefaultEps0) {
    const Point xh = x + h;
    const Oct num = psi_a(automorphism_params(xh, eps0), xh);
    const Oct den = psi_a(automorphism_params(x, eps0), x);
    const double J = std::pow(norm2(num) / norm2(den), 3);
    const Point L = t_a_inv(automorphism_params(a + h, eps0), t_a(automorphism_params(a, eps0), x));
    return {J, L};
}

} // namespace octo
