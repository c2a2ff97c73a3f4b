#pragma once

// Monge-Ampere densities, OPSH certification, integral identities
// (integration by parts, comparison, Cauchy-Schwarz), Lelong numbers, the
// T_eps Laplacian estimator and ball-condenser capacities.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "octo/catalog.hpp"
#include "octo/differential.hpp"
#include "octo/quadrature.hpp"

namespace octo {

// ---- densities with precision escalation ------------------------------------

/// Rounding allowance factor for determinants of jet-assembled Hessians, in
/// units of machine epsilon times the size of the cancelling terms.
inline constexpr double kDetRounding = 1024.0;
inline constexpr double kQuadEpsilon = 1.92592994438723585305597794258492732e-34;

struct HessianEval {
    Herm H;               // rounded to double
    double det = 0;       // determinant, from the precision actually used
    double bound = 0;     // rounding allowance on det
    bool quad = false;    // true when recomputed in quad precision
};

namespace detail {

/// Absolute sums of the real Hessian entries feeding each Hess_O entry.  The
/// entries are sums that can cancel, so rounding is judged against these.
struct EntryMagnitudes {
    double m11 = 0, m22 = 0, m12 = 0;
};

template <class R, int O>
EntryMagnitudes entry_magnitudes(const Jet<R, O>& j) {
    EntryMagnitudes m;
    for (int p = 0; p < 8; ++p) {
        m.m11 += std::fabs(to_double(j.hess(p, p)));
        m.m22 += std::fabs(to_double(j.hess(8 + p, 8 + p)));
        for (int q = 0; q < 8; ++q) m.m12 += std::fabs(to_double(j.hess(p, 8 + q)));
    }
    return m;
}

template <class R, int O>
double hessian_scale(const Jet<R, O>& j) {
    const EntryMagnitudes m = entry_magnitudes(j);
    return m.m11 * m.m22 + m.m12 * m.m12;
}

template <class R, int O>
HessianEval finish_hessian(const Jet<R, O>& j, double eps) {
    const Hermitian2<R> Hr = oct_hessian(j);
    HessianEval e;
    e.H.a11 = to_double(Hr.a11);
    e.H.a22 = to_double(Hr.a22);
    for (int p = 0; p < 8; ++p) e.H.a12.c[p] = to_double(Hr.a12.c[p]);
    e.det = to_double(det(Hr));
    e.bound = kDetRounding * eps * hessian_scale(j);
    return e;
}

inline bool needs_quad(const HessianEval& e, double gate) { return e.bound > gate + 1e-10 * std::fabs(e.det); }

} // namespace detail

/// Hess_O(u)(x) and its determinant.  In Auto mode the double result is
/// recomputed with quad-precision jets when its rounding allowance exceeds
/// `gate` (plus 1e-10 relative).
inline HessianEval hessian_eval(const ScalarField& u, const Point& x, Precision prec = Precision::Auto,
                                double gate = 1e-12) {
    if (prec != Precision::Quad) {
        HessianEval e = detail::finish_hessian(u.jet2(x), std::numeric_limits<double>::epsilon());
        if (prec == Precision::Double || !detail::needs_quad(e, gate)) return e;
    }
    HessianEval e = detail::finish_hessian(u.jet2q(x), kQuadEpsilon);
    e.quad = true;
    return e;
}

inline double ma_density(const ScalarField& u, const Point& x, Precision prec = Precision::Auto) {
    return hessian_eval(u, x, prec).det;
}

inline double mixed_ma_density(const ScalarField& u, const ScalarField& v, const Point& x,
                               Precision prec = Precision::Auto) {
    if (prec != Precision::Quad) {
        const Jet2d ju = u.jet2(x), jv = v.jet2(x);
        const double m = mixed_det(oct_hessian(ju), oct_hessian(jv));
        const detail::EntryMagnitudes a = detail::entry_magnitudes(ju), b = detail::entry_magnitudes(jv);
        const double scale = a.m11 * b.m22 + a.m22 * b.m11 + 2 * a.m12 * b.m12;
        if (prec == Precision::Double ||
            kDetRounding * std::numeric_limits<double>::epsilon() * scale <= 1e-12 + 1e-10 * std::fabs(m))
            return m;
    }
    return to_double(mixed_det(oct_hessian(u.jet2q(x)), oct_hessian(v.jet2q(x))));
}

// ---- OPSH certification ---------------------------------------------------

/// Nonnegativity of Hess_O(u)(x) with the determinant judged against
/// tol plus its rounding allowance.
inline bool hessian_nonneg(const HessianEval& e, double tol = kDefaultTol) {
    return e.H.a11 >= -tol && e.H.a22 >= -tol && e.det >= -(tol + e.bound);
}

/// 8-variable Laplacian in t of u(a + b t) at t = 0, where b t = (b1 t, b2 t).
template <class R>
R line_laplacian(const Jet<R, 2>& j, const OVec& b) {
    R lap = R(0);
    for (int p = 0; p < 8; ++p) {
        const Oct e = Oct::unit(p);
        const Oct d1 = b.v1 * e, d2 = b.v2 * e;
        std::array<R, 16> v{};
        for (int i = 0; i < 8; ++i) {
            v[i] = static_cast<R>(d1.c[i]);
            v[8 + i] = static_cast<R>(d2.c[i]);
        }
        for (int i = 0; i < 16; ++i) {
            if (v[i] == R(0)) continue;
            for (int k = 0; k < 16; ++k) lap += v[i] * j.hess(i, k) * v[k];
        }
    }
    return lap;
}

struct OpshReport {
    std::size_t points = 0;
    std::size_t lines = 0;
    double min_det = INFINITY;      // matrix mode
    double min_diag = INFINITY;
    double min_line_laplacian = INFINITY;  // line mode
    std::size_t matrix_failures = 0;
    std::size_t line_failures = 0;
    std::size_t quad_escalations = 0;
    [[nodiscard]] bool matrix_pass() const { return matrix_failures == 0; }
    [[nodiscard]] bool line_pass() const { return line_failures == 0; }
    [[nodiscard]] bool agree() const { return matrix_pass() == line_pass(); }
    [[nodiscard]] bool pass() const { return matrix_pass() && line_pass(); }
};

/// Matrix mode: Hess_O(u) >= 0 at each point.  Line mode: for `lines_per_point`
/// sampled unit directions b (b1 real), the Laplacian of t -> u(x + b t) at
/// t = 0 is >= -tol.
inline OpshReport opsh_check(const ScalarField& u, const std::vector<Point>& points, std::size_t lines_per_point = 4,
                             std::uint64_t seed = 7, double tol = kDefaultTol) {
    OpshReport r;
    const auto dirs = sample_lines(std::max<std::size_t>(1, points.size() * lines_per_point), seed);
    std::size_t di = 0;
    for (const auto& x : points) {
        const HessianEval e = hessian_eval(u, x);
        ++r.points;
        r.quad_escalations += e.quad ? 1 : 0;
        r.min_det = std::min(r.min_det, e.det);
        r.min_diag = std::min({r.min_diag, e.H.a11, e.H.a22});
        if (!hessian_nonneg(e, tol)) ++r.matrix_failures;
        if (lines_per_point == 0) continue;
        const Jet2d j = u.jet2(x);
        double hscale = 0;
        for (int i = 0; i < kVars; ++i) hscale = std::max(hscale, std::fabs(j.hess(i, i)));
        for (std::size_t k = 0; k < lines_per_point; ++k, ++di) {
            const double lap = line_laplacian(j, dirs[di].b);
            ++r.lines;
            r.min_line_laplacian = std::min(r.min_line_laplacian, lap);
            const double allowance = tol + kDetRounding * std::numeric_limits<double>::epsilon() * 16 * hscale;
            if (lap < -allowance) ++r.line_failures;
        }
    }
    return r;
}

/// Points of the ball B(center, radius) at distance >= `exclusion` from u's
/// singular set (quasi-random, deterministic in seed).
inline std::vector<Point> interior_points(const ScalarField& u, std::size_t count, double radius, std::uint64_t seed,
                                          double exclusion = 0.05, const Point& center = Point{}) {
    std::vector<Point> out;
    std::size_t batch = count * 2 + 16;
    std::uint64_t s = seed;
    while (out.size() < count) {
        for (const auto& p : qmc_ball_points(batch, radius, s)) {
            const Point x = center + p;
            if (u.singular_distance(x) >= exclusion) out.push_back(x);
            if (out.size() == count) break;
        }
        ++s;
    }
    return out;
}

// ---- closedness ------------------------------------------------------------

/// max of the closedness residual of Hess_O(w) over `count` points of the unit ball.
inline double max_closedness_residual(const ScalarField& w, std::size_t count = 100, std::uint64_t seed = 11) {
    double worst = 0;
    for (const auto& x : interior_points(w, count, 1.0, seed)) worst = std::max(worst, closedness_residual(w, x));
    return worst;
}

inline constexpr double kClosedGate = 1e-8;

inline void require_closed(const ScalarField& w) {
    const double res = max_closedness_residual(w);
    if (!(res <= kClosedGate))
        throw ContractError("operators", "Hess_O(w) is not certified closed (residual " + fmt::num(res) + ")");
}

// ---- integration by parts --------------------------------------------------

enum class IbpMode { Full, BoundaryOnly, Exchange };

struct IbpReport {
    IbpMode mode = IbpMode::Full;
    QuadratureEstimate volume;    // interior integral of (LHS - first RHS term)
    QuadratureEstimate boundary;  // boundary integral
    QuadratureEstimate residual;  // LHS - RHS
    [[nodiscard]] bool pass(double k = 3.0) const { return std::fabs(residual.value) <= k * residual.stderr_; }
};

/// LHS - RHS of
///   int v det(Hess u, w_) dV = - int det(T(du (x) dv), w_) dV + int_S v det(T(du (x) d rho), w_) dS/|grad rho|
/// over the unit ball with rho = (|x|^2 - 1)/2 and w_ = Hess_O(w).
///
/// BoundaryOnly takes v = 1.  Exchange checks
///   int u det(Hess v, Hess w) = int v det(Hess u, Hess w)
/// for u compactly supported in the ball (no boundary term).
inline IbpReport ibp_residual(const ScalarField& u, const ScalarField& v, const ScalarField& w, QuadratureSpec spec,
                              IbpMode mode = IbpMode::Full) {
    require_closed(w);
    IbpReport rep;
    rep.mode = mode;
    spec.center = Point{};
    spec.r_in = 0.0;
    spec.r_out = 1.0;
    spec.dim = 16;

    if (mode == IbpMode::Exchange) {
        spec.region = Region::Ball;
        rep.volume = integrate(spec, [&](const Point& x) {
            const Jet2d ju = u.jet2(x), jv = v.jet2(x);
            const Herm Hw = oct_hessian(w.jet2(x));
            return ju.v * mixed_det(oct_hessian(jv), Hw) - jv.v * mixed_det(oct_hessian(ju), Hw);
        });
        rep.residual = rep.volume;
        return rep;
    }

    spec.region = Region::Ball;
    rep.volume = integrate(spec, [&](const Point& x) {
        const Jet2d ju = u.jet2(x);
        const Herm omega = oct_hessian(w.jet2(x));
        const double lhs_density = mixed_det(oct_hessian(ju), omega);
        if (mode == IbpMode::BoundaryOnly) return lhs_density;
        const Jet2d jv = v.jet2(x);
        return jv.v * lhs_density + mixed_det(t_outer(oct_gradient(ju), oct_gradient(jv)), omega);
    });

    QuadratureSpec bs = spec;
    bs.region = Region::Sphere;
    bs.seed = spec.seed ^ 0x5bd1e995ULL;
    const ScalarField rho = defining_rho();
    rep.boundary = integrate(bs, [&](const Point& x) {
        const Jet2d ju = u.jet2(x), jr = rho.jet2(x);
        const Herm omega = oct_hessian(w.jet2(x));
        double grad_rho = 0;
        for (int i = 0; i < kVars; ++i) grad_rho += jr.g[i] * jr.g[i];
        grad_rho = std::sqrt(grad_rho);
        const double vv = mode == IbpMode::BoundaryOnly ? 1.0 : v(x);
        return vv * mixed_det(t_outer(oct_gradient(ju), oct_gradient(jr)), omega) / grad_rho;
    });
    rep.residual = rep.volume - rep.boundary;
    return rep;
}

// ---- comparison principle --------------------------------------------------

struct ComparisonReport {
    QuadratureEstimate mass_u;  // int_{u<v} det Hess u
    QuadratureEstimate mass_v;  // int_{u<v} det Hess v
    QuadratureEstimate difference;
    std::size_t collar_samples = 0;
    [[nodiscard]] bool pass(double k = 3.0) const { return difference.value >= -k * difference.stderr_; }
};

/// Checks int_{u<v} MA(u) >= int_{u<v} MA(v) on the ball Omega = B(0, spec.r_out).
/// The set {u < v} must stay away from its sphere: no sample of the collar
/// (1 - collar) r_out <= |x| <= r_out may have u < v.
inline ComparisonReport comparison_check(const ScalarField& u, const ScalarField& v, QuadratureSpec spec,
                                         double collar = 0.05, std::size_t collar_samples = 20000) {
    if (!u.opsh() || !v.opsh()) throw ContractError("operators", "comparison needs OPSH-flagged fields");
    if (!(spec.r_out > 0 && spec.r_out <= 1.0)) throw DomainError("operators", "comparison domain must lie in B(0, 1)");
    ComparisonReport rep;
    {
        Stream rng(spec.seed, 0xc011a5);
        for (std::size_t i = 0; i < collar_samples; ++i) {
            const double rad = spec.r_out * (1.0 - collar * rng.uniform());
            const Point x = random_sphere_point(rng, rad);
            if (u(x) < v(x))
                throw ContractError("operators", "{u < v} reaches the boundary collar at |x| = " + fmt::num(rad));
        }
        rep.collar_samples = collar_samples;
    }
    spec.region = Region::Ball;
    spec.center = Point{};
    spec.r_in = 0.0;
    const MultiEstimate m = integrate_multi(spec, 2, [&](const Point& x, double* out) {
        if (u(x) < v(x)) {
            out[0] = ma_density(u, x);
            out[1] = ma_density(v, x);
        } else {
            out[0] = out[1] = 0.0;
        }
    });
    rep.mass_u = m[0];
    rep.mass_v = m[1];
    rep.difference = m.combine({1.0, -1.0});
    return rep;
}

// ---- Lelong numbers --------------------------------------------------------

/// sigma(a, r) = int_{B(a,r)} det(Hess_O |x|^2, Hess_O w) dV = 8 int_{B(a,r)} Delta w dV.
inline QuadratureEstimate sigma(const Point& a, double r, const ScalarField& w, QuadratureSpec spec) {
    spec.region = Region::Ball;
    spec.center = a;
    spec.r_in = 0;
    spec.r_out = r;
    const Herm I16 = Herm::diag(16.0, 16.0);
    return integrate(spec, [&](const Point& x) { return mixed_det(I16, oct_hessian(w.jet2(x))); });
}

struct LelongRow {
    double r;
    QuadratureEstimate sigma_over_r8;
};

struct LelongReport {
    std::vector<LelongRow> rows;
    bool monotone = true;           // nondecreasing up to 3 sigma
    QuadratureEstimate lelong;      // extrapolated to r -> 0
    std::vector<double> eps_family; // empty for a smooth w
    double eps_fit_residual = 0;    // misfit of the linear-in-eps model at the largest eps
};

namespace detail {

/// Value at 0 of the line through (t1, e1), (t2, e2).
inline QuadratureEstimate extrapolate_to_zero(double t1, const QuadratureEstimate& e1, double t2,
                                              const QuadratureEstimate& e2) {
    const double w1 = t2 / (t2 - t1), w2 = -t1 / (t2 - t1);
    QuadratureEstimate r;
    r.value = w1 * e1.value + w2 * e2.value;
    r.stderr_ = std::hypot(w1 * e1.stderr_, w2 * e2.stderr_);
    r.samples = e1.samples + e2.samples;
    r.seed = e1.seed;
    return r;
}

inline bool monotone_rows(const std::vector<LelongRow>& rows, double k = 3.0) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto d = rows[i].sigma_over_r8 - rows[i - 1].sigma_over_r8;
        if (d.value < -k * d.stderr_) return false;
    }
    return true;
}

inline LelongReport lelong_from_rows(std::vector<LelongRow> rows) {
    LelongReport rep;
    rep.rows = std::move(rows);
    rep.monotone = monotone_rows(rep.rows);
    if (rep.rows.size() >= 2) {
        const auto& a = rep.rows[0];
        const auto& b = rep.rows[1];
        rep.lelong = extrapolate_to_zero(std::pow(a.r, 8), a.sigma_over_r8, std::pow(b.r, 8), b.sigma_over_r8);
    } else if (!rep.rows.empty()) {
        rep.lelong = rep.rows[0].sigma_over_r8;
    }
    return rep;
}

} // namespace detail

inline std::vector<double> default_r_grid() { return {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0}; }

/// sigma(a, r)/r^8 over an r-grid for a smooth closed w, and its r -> 0
/// extrapolation (linear in r^8 through the two smallest radii).
inline LelongReport lelong(const Point& a, const ScalarField& w, const std::vector<double>& r_grid,
                           const QuadratureSpec& spec) {
    if (!w.singular().empty()) throw DomainError("operators", "fields with a pole go through lelong_fundamental");
    require_closed(w);
    std::vector<LelongRow> rows;
    std::uint64_t k = 0;
    for (double r : r_grid) {
        QuadratureSpec s = spec;
        s.seed = splitmix64(spec.seed + k++);
        QuadratureEstimate e = sigma(a, r, w, s);
        const double r8 = std::pow(r, 8);
        rows.push_back({r, {e.value / r8, e.stderr_ / r8, e.samples, e.seed}});
    }
    return detail::lelong_from_rows(std::move(rows));
}

/// Lelong numbers of Hess_O(K) for K = -|x - pole|^-6 through the smoothed
/// family K_eps: at each r, sigma_eps/r^8 is extrapolated linearly in eps
/// through the two smallest eps of the family, then to r -> 0 as above.
inline LelongReport lelong_fundamental(const Point& pole, const Point& a, const std::vector<double>& r_grid,
                                       const std::vector<double>& eps_family, const QuadratureSpec& spec) {
    if (eps_family.size() < 2) throw DomainError("operators", "the eps family needs at least two members");
    std::vector<double> eps = eps_family;
    std::sort(eps.begin(), eps.end());
    std::vector<LelongRow> rows;
    double fit_residual = 0;
    std::uint64_t k = 0;
    for (double r : r_grid) {
        const double r8 = std::pow(r, 8);
        std::vector<QuadratureEstimate> vals;
        for (double e : eps) {
            QuadratureSpec s = spec;
            s.seed = splitmix64(spec.seed + k++);
            const QuadratureEstimate sg = sigma(a, r, fundamental_smoothed(pole, e), s);
            vals.push_back({sg.value / r8, sg.stderr_ / r8, sg.samples, sg.seed});
        }
        const QuadratureEstimate ext = detail::extrapolate_to_zero(eps[0], vals[0], eps[1], vals[1]);
        if (eps.size() >= 3) {
            const double slope = (vals[1].value - vals[0].value) / (eps[1] - eps[0]);
            const double predicted = vals[0].value + slope * (eps.back() - eps[0]);
            const double scale = std::max(std::fabs(vals.back().value), 1e-300);
            fit_residual = std::max(fit_residual, std::fabs(predicted - vals.back().value) / scale);
        }
        rows.push_back({r, ext});
    }
    LelongReport rep = detail::lelong_from_rows(std::move(rows));
    rep.eps_family = eps;
    rep.eps_fit_residual = fit_residual;
    return rep;
}

// ---- T_eps -------------------------------------------------------------------

/// T_eps u(x) = 2(N+2)(u_eps(x) - u(x))/eps^2 with u_eps the average of u over
/// B(x, eps), N = 16.  Antithetic: each sample y contributes
/// (u(x+y) + u(x-y))/2 - u(x).
inline QuadratureEstimate t_eps(const ScalarField& u, const Point& x, double eps, QuadratureSpec spec) {
    if (!(eps > 0)) throw DomainError("operators", "T_eps needs eps > 0");
    if (u.singular_distance(x) <= eps) throw DomainError("operators", "B(x, eps) meets the singular set");
    spec.region = Region::Ball;
    spec.center = Point{};
    spec.r_in = 0;
    spec.r_out = eps;
    spec.dim = 16;
    const double ux = u(x);
    const QuadratureEstimate e = integrate(spec, [&](const Point& y) { return 0.5 * (u(x + y) + u(x - y)) - ux; });
    const double vol = ball_volume(16) * std::pow(eps, 16);
    const double k = 2.0 * (16 + 2) / (eps * eps) / vol;
    return {k * e.value, k * e.stderr_, e.samples, e.seed};
}

/// Euclidean Laplacian from the jet (the oracle T_eps approaches).
inline double laplacian(const ScalarField& u, const Point& x) {
    const Jet2d j = u.jet2(x);
    double s = 0;
    for (int i = 0; i < kVars; ++i) s += j.hess(i, i);
    return s;
}

// ---- capacity --------------------------------------------------------------

struct CondenserSpec {
    Point a{};
    double r = 0.5;
    double R = 1.0;
    std::vector<double> deltas = {0.04, 0.02, 0.01};
};

struct CapacityReport {
    CondenserSpec condenser;
    std::vector<QuadratureEstimate> masses;  // one per delta, in sweep order (descending delta)
    QuadratureEstimate capacity;             // Richardson limit
    double extrapolation_residual = 0;       // |difference of successive Richardson limits|
    double residual_stderr = 0;
    [[nodiscard]] bool converged(double k = 5.0) const { return extrapolation_residual <= k * residual_stderr; }
};

/// MA mass of extremal_ball(a, r, R, delta) over the shell r - 3 delta <= |x-a| <= r + 3 delta.
inline QuadratureEstimate extremal_mass(const CondenserSpec& c, double delta, QuadratureSpec spec) {
    const ScalarField u = extremal_ball(c.a, c.r, c.R, delta);
    spec.region = Region::Shell;
    spec.center = c.a;
    spec.r_in = std::max(c.r - 3 * delta, 0.0);
    spec.r_out = std::min(c.r + 3 * delta, c.R);
    return integrate(spec, [&](const Point& x) { return ma_density(u, x, Precision::Double); });
}

/// Capacity of the condenser (B(a,r), B(a,R)) as the delta -> 0 limit of the
/// MA mass of the regularized extremal function.  Richardson extrapolation
/// assumes an error linear in delta and uses the two smallest deltas.
inline CapacityReport capacity_ball(const CondenserSpec& c, const QuadratureSpec& spec) {
    if (!(c.r > 0) || !(c.r < c.R)) throw DomainError("operators", "condenser needs 0 < r < R");
    if (c.deltas.size() < 2) throw DomainError("operators", "the delta sweep needs at least two values");
    CapacityReport rep;
    rep.condenser = c;
    std::vector<double> d = c.deltas;
    std::sort(d.begin(), d.end(), std::greater<>());
    rep.condenser.deltas = d;
    std::uint64_t k = 0;
    for (double delta : d) {
        QuadratureSpec s = spec;
        s.seed = splitmix64(spec.seed + 977 * k++);
        rep.masses.push_back(extremal_mass(c, delta, s));
    }
    const std::size_t n = d.size();
    rep.capacity = detail::extrapolate_to_zero(d[n - 1], rep.masses[n - 1], d[n - 2], rep.masses[n - 2]);
    if (n >= 3) {
        const QuadratureEstimate prev =
            detail::extrapolate_to_zero(d[n - 2], rep.masses[n - 2], d[n - 3], rep.masses[n - 3]);
        rep.extrapolation_residual = std::fabs(rep.capacity.value - prev.value);
        rep.residual_stderr = std::hypot(rep.capacity.stderr_, prev.stderr_);
    } else {
        rep.residual_stderr = rep.capacity.stderr_;
    }
    return rep;
}

// ---- Cauchy-Schwarz ----------------------------------------------------------

struct CauchySchwarzReport {
    QuadratureEstimate uv, uu, vv;  // int det(T(du (x) dv), w_) etc.
    QuadratureEstimate slack;       // uu * vv - uv^2 (delta-method stderr)
    [[nodiscard]] bool pass(double k = 3.0) const { return slack.value >= -k * slack.stderr_; }
};

/// |int det(T(du(x)dv), w_)|^2 <= int det(T(du(x)du), w_) int det(T(dv(x)dv), w_)
/// over the unit ball, w_ = Hess_O(w).
inline CauchySchwarzReport cauchy_schwarz_check(const ScalarField& u, const ScalarField& v, const ScalarField& w,
                                                QuadratureSpec spec) {
    for (const auto& x : interior_points(w, 100, 1.0, spec.seed))
        if (!hessian_nonneg(hessian_eval(w, x)))
            throw ContractError("operators", "Hess_O(w) is not nonnegative at a sampled point");
    spec.region = Region::Ball;
    spec.center = Point{};
    spec.r_out = 1.0;
    const MultiEstimate m = integrate_multi(spec, 3, [&](const Point& x, double* out) {
        const OGrad du = oct_gradient(u.jet2(x)), dv = oct_gradient(v.jet2(x));
        const Herm omega = oct_hessian(w.jet2(x));
        out[0] = mixed_det(t_outer(du, dv), omega);
        out[1] = mixed_det(t_outer(du, du), omega);
        out[2] = mixed_det(t_outer(dv, dv), omega);
    });
    CauchySchwarzReport rep;
    rep.uv = m[0];
    rep.uu = m[1];
    rep.vv = m[2];
    const double A = m[0].value, B = m[1].value, C = m[2].value;
    // gradient of B C - A^2 with respect to (A, B, C)
    const std::vector<double> g = {-2 * A, C, B};
    double var = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) var += g[i] * g[j] * m.covariance(i, j);
    rep.slack = {B * C - A * A, std::sqrt(std::max(var, 0.0)), m[0].samples, m[0].seed};
    return rep;
}

} // namespace octo
