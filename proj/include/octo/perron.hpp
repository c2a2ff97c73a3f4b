#pragma once

// Two-sided approximation of the Perron-Bremermann envelope on the unit ball:
// a lower bound from a finite family of OPSH candidates lying below the
// boundary data, and the harmonic extension of the data as an upper bound.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "octo/catalog.hpp"
#include "octo/operators.hpp"
#include "octo/quadrature.hpp"

namespace octo {

/// Boundary datum phi on the unit sphere.  `phi` is a C^2 extension to a
/// neighbourhood of the closed ball (its jets provide the gradient oracle)
/// and C bounds its second-difference quotients.
struct BoundaryData {
    ScalarField phi;
    double C = 0.0;
    std::optional<ScalarField> exact;      // maximal OPSH function with trace phi, when known
    std::vector<ScalarField> minorants;    // extra OPSH candidates lying below phi on the sphere
};

struct BoundaryCheck {
    double sup_quotient = 0;  // sup |phi(x+h) + phi(x-h) - 2 phi(x)| / |h|^2 over boundary samples
    std::size_t samples = 0;
};

/// Samples second differences of phi at sphere points (|h| in {1e-1, 1e-2})
/// and throws a contract error when C does not dominate them.
inline BoundaryCheck validate_boundary(const BoundaryData& bd, std::uint64_t seed = 5, std::size_t count = 512) {
    if (!bd.phi) throw DomainError("perron", "boundary datum has no field");
    if (!(bd.C >= 0)) throw DomainError("perron", "C must be nonnegative");
    BoundaryCheck out;
    Stream rng(seed, 0xb0d);
    for (std::size_t i = 0; i < count; ++i) {
        const Point x = random_sphere_point(rng, 1.0);
        const Point dir = random_sphere_point(rng, 1.0);
        for (double h : {1e-1, 1e-2}) {
            const Point hv = dir * h;
            const double q = std::fabs(bd.phi(x + hv) + bd.phi(x - hv) - 2 * bd.phi(x)) / (h * h);
            out.sup_quotient = std::max(out.sup_quotient, q);
            ++out.samples;
        }
    }
    if (out.sup_quotient > bd.C * (1 + 1e-9) + 1e-8)
        throw ContractError("perron", "C = " + fmt::num(bd.C) + " is below a sampled second-difference quotient " +
                                          fmt::num(out.sup_quotient));
    return out;
}

/// Barrier at a boundary point: affine, equal to phi at x0 and below phi on
/// the sphere when C bounds the second derivatives of the extension.
/// Its minimum over the closed ball is written to *ball_min when given.
inline ScalarField boundary_barrier(const BoundaryData& bd, const Point& x0, double* ball_min = nullptr) {
    const Jet2d j = bd.phi.jet2(x0);
    Point g;
    for (int i = 0; i < kVars; ++i) g[i] = j.g[i];
    if (ball_min) *ball_min = j.v - dot(g, x0) - 2 * bd.C - norm(g + x0 * (2 * bd.C));
    return barrier(x0, j.v, g, bd.C);
}

struct LowerEnvelope {
    ScalarField field;                    // max (or LSE when smoothing > 0) of the candidates
    std::vector<ScalarField> candidates;
    std::vector<Point> feet;              // boundary sample points carrying barriers
    double constant = 0;                  // certified lower bound for min phi on the sphere
};

/// Lower envelope from M barriers at quasi-random sphere points, the
/// constant min phi (bounded below through the barriers: an affine barrier
/// c0 + w.x is >= c0 - |w| on the ball) and the user minorants.  With
/// smoothing tau > 0 the max is replaced by tau log(mean exp(./tau)), which
/// stays below the max.
inline LowerEnvelope build_lower(const BoundaryData& bd, std::size_t M, std::uint64_t seed, double smoothing = 0.0) {
    if (M < 16) throw DomainError("perron", "build_lower needs at least 16 boundary points");
    validate_boundary(bd, seed);
    LowerEnvelope env;
    env.feet = qmc_sphere_points(M, 1.0, seed);
    env.constant = -INFINITY;
    for (const auto& x0 : env.feet) {
        double m = 0;
        env.candidates.push_back(boundary_barrier(bd, x0, &m));
        env.constant = std::max(env.constant, m);
    }
    env.candidates.push_back(constant(env.constant));
    for (const auto& m : bd.minorants) {
        if (!m.opsh()) throw ContractError("perron", "minorant '" + m.text() + "' is not OPSH-flagged");
        env.candidates.push_back(m);
    }
    env.field = smoothing > 0 ? lse_of(env.candidates, smoothing) : max_of(env.candidates);
    return env;
}

enum class UpperMethod { Auto, Poisson, WalkOnSpheres };

/// Radius up to which Auto uses the Poisson kernel; beyond it the kernel's
/// variance grows like (1 - |x|)^-15 and walk-on-spheres takes over.
inline constexpr double kPoissonRadius = 0.3;

/// Harmonic extension of phi evaluated at x, |x| < 1.
inline QuadratureEstimate upper_harmonic(const BoundaryData& bd, const Point& x, const QuadratureSpec& spec,
                                         UpperMethod method = UpperMethod::Auto) {
    if (!(norm(x) < 1.0)) throw DomainError("perron", "upper bound requested at |x| >= 1");
    const auto phi = [&](const Point& z) { return bd.phi(z); };
    if (method == UpperMethod::Poisson || (method == UpperMethod::Auto && norm(x) <= kPoissonRadius))
        return poisson_integral(x, phi, spec.samples, spec.seed);
    return harmonic_measure_wos(x, phi, spec.samples, spec.seed);
}

struct SandwichValue {
    double lower = 0;
    QuadratureEstimate upper;
    double gap = 0;                 // upper - lower
    std::optional<double> exact;    // u*(x) when known
    /// lower <= upper + 3 stderr, and lower <= u* <= upper + 3 stderr when u* is known.
    [[nodiscard]] bool ordered(double k = 3.0) const {
        const double slack = k * upper.stderr_ + 1e-12;
        bool ok = lower <= upper.value + slack;
        if (exact) ok = ok && lower <= *exact + 1e-12 && *exact <= upper.value + slack;
        return ok;
    }
    [[nodiscard]] bool tight(double k = 3.0) const { return gap <= k * upper.stderr_ + 1e-12; }
};

inline SandwichValue sandwich_eval(const BoundaryData& bd, const LowerEnvelope& lower, const Point& x,
                                   const QuadratureSpec& spec, UpperMethod method = UpperMethod::Auto) {
    SandwichValue s;
    s.lower = lower.field(x);
    s.upper = upper_harmonic(bd, x, spec, method);
    s.gap = s.upper.value - s.lower;
    if (bd.exact) s.exact = (*bd.exact)(x);
    return s;
}

// ---- regularity estimates --------------------------------------------------

struct SecondDifferenceRow {
    double h;
    double sup_quotient;
};

struct SecondDifferenceReport {
    std::vector<SecondDifferenceRow> rows;  // one per |h|, in the given order
    double sup = -INFINITY;
    [[nodiscard]] bool bounded() const { return std::isfinite(sup); }
    /// Relative change of the sup between the two finest h, at most `rel`.
    [[nodiscard]] bool stable(double rel = 0.1) const {
        if (rows.size() < 2) return true;
        const double a = rows[rows.size() - 2].sup_quotient, b = rows.back().sup_quotient;
        return std::fabs(a - b) <= rel * std::max(1.0, std::max(std::fabs(a), std::fabs(b)));
    }
};

/// sup of (u(x+h) + u(x-h) - 2u(x))/|h|^2 over x in B(0, 1 - margin) and
/// directions of h, for each |h| in h_set (each |h| must be < margin/2).
inline SecondDifferenceReport second_difference_check(const ScalarField& u, double margin,
                                                      const std::vector<double>& h_set, std::uint64_t seed = 9,
                                                      std::size_t points = 2000) {
    if (!(margin > 0 && margin < 1)) throw DomainError("perron", "margin must lie in (0, 1)");
    SecondDifferenceReport rep;
    for (double h : h_set) {
        if (!(h > 0 && h < margin / 2)) throw DomainError("perron", "|h| must lie in (0, margin/2)");
        Stream rng(seed, 0x5d);
        double sup = -INFINITY;
        for (std::size_t i = 0; i < points; ++i) {
            const Point x = random_ball_point(rng, 1.0 - margin);
            const Point hv = random_sphere_point(rng, h);
            sup = std::max(sup, (u(x + hv) + u(x - hv) - 2 * u(x)) / (h * h));
        }
        rep.rows.push_back({h, sup});
        rep.sup = std::max(rep.sup, sup);
    }
    return rep;
}

struct MaximalityReport {
    std::size_t boundary_samples = 0;
    std::size_t interior_samples = 0;
    double worst_excess = -INFINITY;  // max over competitors and points of competitor - u
    [[nodiscard]] bool pass(double tol = 1e-9) const { return worst_excess <= tol; }
};

/// Every OPSH competitor lying below u on the sphere |x - center| = radius
/// must lie below u inside; a violation shows u is not maximal there.
inline MaximalityReport maximality_check(const ScalarField& u, const std::vector<ScalarField>& competitors,
                                         const Point& center = Point{}, double radius = 1.0, std::uint64_t seed = 13,
                                         std::size_t samples = 4000, double tol = 1e-9) {
    MaximalityReport rep;
    Stream rng(seed, 0x3a);
    std::vector<Point> bnd, inner;
    for (std::size_t i = 0; i < samples; ++i) bnd.push_back(center + random_sphere_point(rng, radius));
    for (std::size_t i = 0; i < samples; ++i) inner.push_back(center + random_ball_point(rng, radius));
    for (const auto& v : competitors) {
        if (!v.opsh()) throw ContractError("perron", "competitor '" + v.text() + "' is not OPSH-flagged");
        for (const auto& x : bnd)
            if (v(x) > u(x) + tol)
                throw ContractError("perron", "competitor '" + v.text() + "' exceeds u on the boundary");
        for (const auto& x : inner) rep.worst_excess = std::max(rep.worst_excess, v(x) - u(x));
    }
    rep.boundary_samples = bnd.size();
    rep.interior_samples = inner.size();
    return rep;
}

} // namespace octo
