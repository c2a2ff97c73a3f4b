#pragma once

// Named verification suites.  Each suite returns one CheckResult per gated
// check; seeds are derived from the run seed and the check name, so a check
// produces the same numbers whether it runs alone or inside "all".

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "octo/field_text.hpp"
#include "octo/geometry.hpp"
#include "octo/operators.hpp"
#include "octo/perron.hpp"
#include "octo/report.hpp"

namespace octo {

struct SuiteConfig {
    std::uint64_t seed = 1;
    std::size_t samples = kDefaultSamples;
    std::map<std::string, double> tol;  // overrides, see README

    [[nodiscard]] double get(const std::string& key, double fallback) const {
        const auto it = tol.find(key);
        return it == tol.end() ? fallback : it->second;
    }
    [[nodiscard]] std::uint64_t seed_for(const std::string& check) const { return splitmix64(seed ^ fnv1a(check)); }
    [[nodiscard]] QuadratureSpec spec(const std::string& check, Method m = Method::MC) const {
        QuadratureSpec s;
        s.samples = samples;
        s.seed = seed_for(check);
        s.method = m;
        return s;
    }
    [[nodiscard]] double sigmas() const { return get("sigma", 3.0); }
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"algebra", "hermitian", "jets",     "geometry", "ibp",
                                                   "comparison", "lelong", "capacity", "perron"};
    return names;
}

namespace suite_detail {

inline CheckResult upper_gate(std::string name, json inputs, double value, double bound) {
    return {std::move(name), std::move(inputs), value, 0.0, "<= " + fmt::num(bound), value <= bound};
}

inline CheckResult lower_gate(std::string name, json inputs, double value, double bound) {
    return {std::move(name), std::move(inputs), value, 0.0, ">= " + fmt::num(bound), value >= bound};
}

/// |estimate| <= k stderr.
inline CheckResult zero_gate(std::string name, json inputs, const QuadratureEstimate& e, double k) {
    return {std::move(name),
            std::move(inputs),
            e.value,
            e.stderr_,
            "|value| <= " + fmt::num(k) + " stderr",
            std::fabs(e.value) <= k * e.stderr_};
}

/// estimate >= -k stderr.
inline CheckResult nonneg_gate(std::string name, json inputs, const QuadratureEstimate& e, double k) {
    return {std::move(name), std::move(inputs), e.value, e.stderr_, "value >= -" + fmt::num(k) + " stderr",
            e.value >= -k * e.stderr_};
}

inline json spec_json(const QuadratureSpec& s) {
    return {{"samples", s.samples}, {"seed", s.seed}, {"method", to_string(s.method)}};
}

inline Point pt(std::initializer_list<double> v) {
    Point p;
    int i = 0;
    for (double x : v) p[i++] = x;
    return p;
}

/// Centres of the automorphisms used by the geometry checks.
inline std::vector<Point> automorphism_centers() {
    return {Point{}, pt({0.3}), pt({0, 0, 0, 0, 0, 0, 0, 0, 0.3}), pt({0.2, 0, 0, 0, 0, 0.15, 0, 0, 0.2, 0, 0, 0.1}),
            pt({0, 0.4, 0, 0, 0, 0, 0, 0.3, 0, 0, -0.5, 0, 0, 0, 0.2}), pt({0, 0, 0, 0, 0, 0, 0, 0, -0.85})};
}

} // namespace suite_detail

// ---- algebra -----------------------------------------------------------------

inline std::vector<CheckResult> suite_algebra(const SuiteConfig& cfg) {
    using namespace suite_detail;
    const std::size_t n = static_cast<std::size_t>(cfg.get("algebra.count", 1e5));
    const double tol = cfg.get("identity", 1e-12);
    Stream rng(cfg.seed_for("algebra"), 1);
    double e_norm = 0, e_left = 0, e_right = 0, e_flex = 0, e_triple = 0, e_conj = 0, assoc = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const Oct a = random_octonion(rng), b = random_octonion(rng), c = random_octonion(rng);
        const double na = norm(a), nb = norm(b), nc = norm(c);
        e_norm = std::max(e_norm, std::fabs(norm(a * b) - na * nb) / (na * nb));
        e_left = std::max(e_left, norm((a * a) * b - a * (a * b)) / (na * na * nb));
        e_right = std::max(e_right, norm((a * b) * b - a * (b * b)) / (na * nb * nb));
        e_flex = std::max(e_flex, norm((a * b) * a - a * (b * a)) / (na * na * nb));
        e_triple = std::max(e_triple, std::fabs(re((a * b) * c) - re(a * (b * c))) / (na * nb * nc));
        e_conj = std::max(e_conj, norm(conj(a * b) - conj(b) * conj(a)) / (na * nb));
        assoc = std::max(assoc, norm((a * b) * c - a * (b * c)) / (na * nb * nc));
    }
    const json in = {{"count", n}, {"seed", cfg.seed_for("algebra")}};
    std::vector<CheckResult> out;
    out.push_back(upper_gate("algebra.norm_multiplicative", in, e_norm, tol));
    out.push_back(upper_gate("algebra.alternative_left", in, e_left, tol));
    out.push_back(upper_gate("algebra.alternative_right", in, e_right, tol));
    out.push_back(upper_gate("algebra.flexible", in, e_flex, tol));
    out.push_back(upper_gate("algebra.re_triple", in, e_triple, tol));
    out.push_back(upper_gate("algebra.conj_antihomomorphism", in, e_conj, tol));
    out.push_back(lower_gate("algebra.non_associative", in, assoc, 0.1));

    double table_err = 0;
    for (int p = 0; p < 8; ++p)
        for (int q = 0; q < 8; ++q) {
            const Oct r = Oct::unit(p) * Oct::unit(q);
            const Oct s = Oct::unit(q) * Oct::unit(p);
            if (p == q) table_err = std::max(table_err, norm(r - Oct(p == 0 ? 1.0 : -1.0)));
            else if (p > 0 && q > 0) table_err = std::max(table_err, norm(r + s));
        }
    out.push_back(upper_gate("algebra.basis_table", json::object(), table_err, 0.0));
    return out;
}

// ---- hermitian ---------------------------------------------------------------

namespace suite_detail {

inline Herm random_herm(Stream& rng) {
    return {rng.normal(), rng.normal(), random_octonion(rng)};
}

inline OVec random_ovec(Stream& rng) { return {random_octonion(rng), random_octonion(rng)}; }

} // namespace suite_detail

inline std::vector<CheckResult> suite_hermitian(const SuiteConfig& cfg) {
    using namespace suite_detail;
    const double tol = cfg.get("identity", 1e-12);
    Stream rng(cfg.seed_for("hermitian"), 1);
    const std::size_t n = 10000;
    double e_outer = 0, e_polar = 0, e_lin = 0, e_sym = 0;
    std::size_t disagree = 0;
    double cs_min = INFINITY;
    for (std::size_t i = 0; i < n; ++i) {
        const OVec xi = random_ovec(rng);
        const Herm P = outer(xi);
        e_outer = std::max(e_outer, std::fabs(det(P)) / (norm2(xi.v1) * norm2(xi.v2) + 1e-300));
        const Herm A = random_herm(rng), B = random_herm(rng), C = random_herm(rng);
        const double sA = std::fabs(A.a11) + std::fabs(A.a22) + norm(A.a12);
        const double sB = std::fabs(B.a11) + std::fabs(B.a22) + norm(B.a12);
        const double sC = std::fabs(C.a11) + std::fabs(C.a22) + norm(C.a12);
        e_polar = std::max(e_polar, std::fabs(mixed_det(A, A) - det(A)) / (sA * sA));
        e_lin = std::max(e_lin, std::fabs(mixed_det(A + B, C) - mixed_det(A, C) - mixed_det(B, C)) / ((sA + sB) * sC));
        e_sym = std::max(e_sym, std::fabs(mixed_det(A, B) - mixed_det(B, A)) / (sA * sB));
        // a matrix passing the Sylvester test has no sampled direction with a
        // negative form; positive combinations of outers must pass it
        const Herm Pp = outer(random_ovec(rng)) + outer(random_ovec(rng));
        if (!is_nonneg(Pp)) ++disagree;
        if (is_nonneg(A, 0.0) && min_quad_form(A) < -1e-12 * sA) ++disagree;
        if (A.a11 < 0 && min_quad_form(A) >= 0) ++disagree;
        const Herm Q = outer(random_ovec(rng)) + outer(random_ovec(rng)) + outer(random_ovec(rng));
        const Herm R = outer(random_ovec(rng)) + outer(random_ovec(rng)) + outer(random_ovec(rng));
        cs_min = std::min(cs_min, cs_gap(Q, R) / std::pow(std::fabs(mixed_det(Q, R)) + 1e-300, 2));
    }
    std::vector<CheckResult> out;
    const json in = {{"count", n}, {"seed", cfg.seed_for("hermitian")}};
    out.push_back(upper_gate("hermitian.outer_is_singular", in, e_outer, tol));
    out.push_back(upper_gate("hermitian.mixed_polarization", in, e_polar, tol));
    out.push_back(upper_gate("hermitian.mixed_linearity", in, e_lin, tol));
    out.push_back(upper_gate("hermitian.mixed_symmetry", in, e_sym, tol));
    out.push_back(upper_gate("hermitian.sylvester_vs_sampled_forms", in, static_cast<double>(disagree), 0.0));
    out.push_back(lower_gate("hermitian.cauchy_schwarz_gap", in, cs_min, -tol));

    // outer(du) against T(du (x) du) for gradients of a field
    const ScalarField f = parse_field("add ipow sqnorm 2 coord 9");
    double e_t = 0;
    for (const auto& x : qmc_ball_points(200, 1.0, cfg.seed_for("hermitian.t"))) {
        const OGrad g = oct_gradient(f, x);
        const Herm a = outer(as_vector(g)), b = t_outer(g, g);
        e_t = std::max({e_t, std::fabs(a.a11 - b.a11), std::fabs(a.a22 - b.a22), norm(a.a12 - b.a12)});
    }
    out.push_back(upper_gate("hermitian.outer_matches_t_map", {{"field", f.text()}}, e_t, 1e-12));

    const EspBasis& eb = esp_basis();
    double e_dual = 0;
    for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) e_dual = std::max(e_dual, std::fabs(mixed_det(eb.h[j], eb.dual[k]) - (j == k)));
    out.push_back(upper_gate("hermitian.esp_dual_basis", {{"condition", eb.condition}}, e_dual, 1e-10));
    return out;
}

// ---- jets: densities and closedness ------------------------------------------

/// Fields of the catalog with continuous third derivatives, in text form.
inline std::vector<std::string> c3_catalog() {
    return {"const 1.5",
            "affine 0.3 [1 0 -2 0 0 0.5 0 0 0 1]",
            "coord 11",
            "sqnorm",
            "sqdist [0.2 0 0.1 0 0 0 0 0 -0.3]",
            "rho",
            "shell_pusher",
            "quadratic_pusher",
            "fundamental [0.1 0 0 0 0 0 0 0 0.2]",
            "fundamental_smoothed origin 0.5",
            "fundamental_smoothed [0.3 0 0 0 0 0 0 0 0.2] 0.05",
            "bump [0.1 0.2] 0.9",
            "barrier [0 0 0 0 0 0 0 0 1] 0.5 [1 0 0 0 0 0 0 0 0.5] 2",
            "mul sqnorm coord 0",
            "scale_shift fundamental_smoothed origin 1 2 0.5",
            "pow add sqnorm const 1 1.5",
            "ipow sqnorm 2",
            "smooth_max sqnorm fundamental_smoothed origin 0.2 0.1",
            "lsen 2 0.2 sqnorm coord 1",
            "extremal origin 0.5 1 0.05",
            "pullback [0.3] sqnorm",
            "pullback [0.2 0 0 0 0 0.15 0 0 0.2 0 0 0.1] fundamental_smoothed origin 0.5",
            "pullback_inv [0 0 0 0 0 0 0 0 0.3] ipow sqnorm 2"};
}

/// OPSH fields of the catalog used for pullback checks.
inline std::vector<std::string> opsh_catalog() {
    return {"sqnorm",
            "sqdist [0.2 0 0.1]",
            "affine 0.3 [1 0 -2 0 0 0.5]",
            "fundamental [0.3]",
            "fundamental_smoothed origin 0.5",
            "shell_pusher",
            "ipow sqnorm 2",
            "extremal origin 0.5 1 0.05",
            "smooth_max sqnorm fundamental_smoothed origin 0.2 0.1",
            "lsen 2 0.2 sqnorm coord 1"};
}

/// Closed-form and vanishing Monge-Ampere densities, mixed-determinant identities.
inline std::vector<CheckResult> suite_density(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double dens_tol = cfg.get("density", 1e-8);

    // closed form of det Hess K_eps at 10^3 points for a few (pole, eps)
    struct Case {
        Point a;
        double eps;
    };
    const std::vector<Case> cases = {{Point{}, 1.0}, {pt({0.3, 0, 0, 0, 0, 0, 0, 0, 0.2}), 0.5}, {Point{}, 0.01}};
    const auto pts = qmc_ball_points(1000, 1.5, cfg.seed_for("density.k_eps"));
    double e_stated = 0, e_entries = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const Case& c = cases[i % cases.size()];
        const Point x = pts[i];
        const ScalarField k = fundamental_smoothed(c.a, c.eps);
        const HessianEval h = hessian_eval(k, x);
        const Point d = x - c.a;
        const double q = norm2(d) + c.eps;
        const double stated = 1152.0 * c.eps / std::pow(q, 9);
        e_stated = std::max(e_stated, std::fabs(h.det - stated) / stated);
        // entries 48 delta/q^4 - 48 x_alpha conj(x_beta)/q^5, determinant a11 a22 - |a12|^2
        const double a11 = 48.0 / std::pow(q, 4) - 48.0 * norm2(d.x1) / std::pow(q, 5);
        const double a22 = 48.0 / std::pow(q, 4) - 48.0 * norm2(d.x2) / std::pow(q, 5);
        const Oct a12 = (d.x1 * conj(d.x2)) * (-48.0 / std::pow(q, 5));
        const double from_entries = a11 * a22 - norm2(a12);
        e_entries = std::max(e_entries, std::fabs(h.det - from_entries) / from_entries);
    }
    out.push_back(upper_gate("density.k_eps_stated_constant",
                             {{"points", pts.size()}, {"formula", "1152 eps/(|x-a|^2+eps)^9"}}, e_stated, dens_tol));
    out.push_back(upper_gate("density.k_eps_from_entries",
                             {{"points", pts.size()}, {"formula", "a11 a22 - |a12|^2 of the closed-form entries"}},
                             e_entries, dens_tol));

    {
        const ScalarField k = fundamental(Point{});
        Stream rng(cfg.seed_for("density.fundamental"), 2);
        double worst = 0;
        std::size_t quad = 0;
        for (int i = 0; i < 1000; ++i) {
            const double r = 0.1 + 2.9 * rng.uniform();
            const HessianEval h = hessian_eval(k, random_sphere_point(rng, r));
            worst = std::max(worst, std::fabs(h.det));
            quad += h.quad;
        }
        out.push_back(upper_gate("density.fundamental_vanishes",
                                 {{"points", 1000}, {"shell", {0.1, 3.0}}, {"quad_escalations", quad}}, worst,
                                 dens_tol));
    }
    {
        double worst = 0;
        for (const auto& x : qmc_ball_points(100, 1.0, cfg.seed_for("density.sqnorm")))
            worst = std::max(worst, std::fabs(ma_density(sq_norm(), x) - 256.0));
        out.push_back(upper_gate("density.sqnorm", {{"points", 100}}, worst, 1e-10));
    }
    {
        // 4 det Hess((u+v)/2) = det Hess u + 2 det(Hess u, Hess v) + det Hess v and
        // det(Hess(u1 - v1), Hess u2) = det(Hess u1, Hess u2) - det(Hess v1, Hess u2)
        const ScalarField u = parse_field("fundamental_smoothed [0.2] 0.3");
        const ScalarField v = parse_field("add ipow sqnorm 2 coord 3");
        const ScalarField w = parse_field("sqdist [0 0 0 0 0 0 0 0 0.4]");
        const ScalarField half = scale_shift(add(u, v), 0.5, 0.0);
        const ScalarField diff = add(u, scale_shift(v, -1.0, 0.0));
        double e_exp = 0, e_lin = 0, mixed_min = INFINITY;
        for (const auto& x : qmc_ball_points(500, 1.0, cfg.seed_for("density.mixed"))) {
            const Herm Hu = oct_hessian(u, x), Hv = oct_hessian(v, x), Hw = oct_hessian(w, x);
            const double scale = std::pow(std::fabs(Hu.a11) + std::fabs(Hu.a22) + std::fabs(Hv.a11) + std::fabs(Hv.a22) +
                                              std::fabs(Hw.a11) + std::fabs(Hw.a22),
                                          2);
            e_exp = std::max(e_exp, std::fabs(4 * ma_density(half, x) -
                                              (det(Hu) + 2 * mixed_det(Hu, Hv) + det(Hv))) / scale);
            e_lin = std::max(e_lin, std::fabs(mixed_ma_density(diff, w, x) - (mixed_det(Hu, Hw) - mixed_det(Hv, Hw))) /
                                        scale);
            mixed_min = std::min(mixed_min, mixed_ma_density(u, v, x) / scale);
        }
        const json in = {{"u", u.text()}, {"v", v.text()}, {"w", w.text()}, {"points", 500}};
        out.push_back(upper_gate("density.mixed_expansion", in, e_exp, 1e-10));
        out.push_back(upper_gate("density.mixed_linearity", in, e_lin, 1e-10));
        out.push_back(lower_gate("density.mixed_opsh_nonneg", in, mixed_min, -1e-10));
    }

    return out;
}

/// Closedness of Hess_O for every C^3 catalog field.
inline std::vector<CheckResult> suite_closedness(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double ctol = cfg.get("closedness", 1e-8);
    for (const auto& text : c3_catalog()) {
        const ScalarField f = parse_field(text);
        double worst = 0;
        for (const auto& x : interior_points(f, 100, 0.9, cfg.seed_for("closedness " + text)))
            worst = std::max(worst, closedness_residual(f, x));
        out.push_back(upper_gate("closedness." + text, {{"field", text}, {"points", 100}}, worst, ctol));
    }

    return out;
}

inline std::vector<CheckResult> suite_jets(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out = suite_density(cfg);
    const auto closed = suite_closedness(cfg);
    out.insert(out.end(), closed.begin(), closed.end());
    {
        const ScalarField f = parse_field("pullback [0.2 0 0 0 0 0.15 0 0 0.2 0 0 0.1] fundamental_smoothed origin 0.5");
        double e2 = 0;
        const double h = 1e-4;
        for (const auto& x : qmc_ball_points(10, 0.8, cfg.seed_for("jets.fd"))) {
            const Jet3d j = f.jet3(x);
            for (int i = 0; i < kVars; ++i) {
                Point xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                const Jet2d jp = f.jet2(xp), jm = f.jet2(xm);
                for (int k = 0; k < kVars; ++k) {
                    const double fd = (jp.g[k] - jm.g[k]) / (2 * h);
                    e2 = std::max(e2, std::fabs(fd - j.hess(i, k)) / (1 + std::fabs(j.hess(i, k))));
                    for (int l = 0; l < kVars; ++l) {
                        const double fd3 = (jp.hess(k, l) - jm.hess(k, l)) / (2 * h);
                        e2 = std::max(e2, std::fabs(fd3 - j.third(i, k, l)) / (1 + std::fabs(j.third(i, k, l))));
                    }
                }
            }
        }
        out.push_back(upper_gate("jets.central_differences", {{"field", f.text()}, {"h", h}}, e2, 1e-5));
    }
    return out;
}

// ---- geometry ----------------------------------------------------------------

inline std::vector<CheckResult> suite_automorphism(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double gtol = cfg.get("geometry", 1e-10);
    const auto centers = automorphism_centers();
    json cin = json::array();
    for (const auto& a : centers) cin.push_back(fmt::point(a));

    double e_zero = 0;
    for (const auto& a : centers) e_zero = std::max(e_zero, norm(t_a(a, a)));
    out.push_back(upper_gate("automorphism.t_a_fixes_center", {{"centers", cin}}, e_zero, gtol));

    Stream rng(cfg.seed_for("automorphism"), 3);
    double e_trip = 0, e_defect = 0, min_g = INFINITY, e_sphere = 0, max_inside = 0;
    const std::size_t n = 10000;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = centers[i % centers.size()];
        const auto P = automorphism_params(a);
        const Point x = random_ball_point(rng, 1.0);
        e_trip = std::max(e_trip, norm(t_a_inv(P, t_a(P, x)) - x));
        const SiegelPoint y = cayley(x);
        const double rhs = 2 * (1 - norm2(x)) / norm2(Oct(1.0) + x.x2);
        e_defect = std::max(e_defect, std::fabs(y.defect() - rhs) / std::max(1.0, std::fabs(rhs)));
        min_g = std::min(min_g, re(g_a(P, x)));
        max_inside = std::max(max_inside, norm(t_a(P, x)));
        const Point z = random_sphere_point(rng, 1.0);
        e_sphere = std::max(e_sphere, std::fabs(norm(t_a(P, z)) - 1.0));
    }
    const json in = {{"centers", cin}, {"points", n}};
    out.push_back(upper_gate("automorphism.round_trip", in, e_trip, gtol));
    out.push_back(upper_gate("automorphism.cayley_defect", in, e_defect, gtol));
    out.push_back(lower_gate("automorphism.re_g_at_least_one", in, min_g, 1.0 - gtol));
    out.push_back(upper_gate("automorphism.sphere_preserved", in, e_sphere, gtol));
    out.push_back(upper_gate("automorphism.ball_preserved", in, max_inside, 1.0));

    double e_heis = 0, e_heis_inv = 0;
    for (int i = 0; i < 10000; ++i) {
        auto hp = [&] {
            HeisPoint p{random_octonion(rng), im(random_octonion(rng))};
            return p;
        };
        const HeisPoint p = hp(), q = hp(), r = hp();
        const HeisPoint l = heis_mul(heis_mul(p, q), r), m = heis_mul(p, heis_mul(q, r));
        const double s = 1 + norm2(p.x) + norm2(q.x) + norm2(r.x) + norm(p.t) + norm(q.t) + norm(r.t);
        e_heis = std::max(e_heis, (norm(l.x - m.x) + norm(l.t - m.t)) / s);
        const HeisPoint e = heis_mul(p, heis_inv(p));
        e_heis_inv = std::max(e_heis_inv, (norm(e.x) + norm(e.t)) / s);
    }
    out.push_back(upper_gate("automorphism.heisenberg_associative", {{"triples", 10000}}, e_heis,
                             cfg.get("heisenberg", 1e-12)));
    out.push_back(upper_gate("automorphism.heisenberg_inverse", {{"triples", 10000}}, e_heis_inv,
                             cfg.get("heisenberg", 1e-12)));

    return out;
}

/// Weighted pullbacks of OPSH fields keep a nonnegative octonionic Hessian.
inline std::vector<CheckResult> suite_pullback(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double ptol = cfg.get("pullback", 1e-8);
    const std::vector<Point> pb_centers = {Point{}, pt({0.3}), pt({0.2, 0, 0, 0, 0, 0.15, 0, 0, 0.2, 0, 0, 0.1})};
    const std::size_t npts = static_cast<std::size_t>(cfg.get("pullback.points", 1000));
    for (const auto& text : opsh_catalog()) {
        const ScalarField u = parse_field(text);
        for (const auto& a : pb_centers) {
            const ScalarField pb = weighted_pullback(a, u);
            double min_det_excess = INFINITY, min_diag = INFINITY;
            std::size_t quad = 0;
            for (const auto& x : interior_points(pb, npts, 0.9, cfg.seed_for("pullback " + pb.text()))) {
                const HessianEval h = hessian_eval(pb, x);
                quad += h.quad;
                min_det_excess = std::min(min_det_excess, h.det + h.bound);
                min_diag = std::min({min_diag, h.H.a11, h.H.a22});
            }
            const double worst = std::min(min_det_excess, min_diag);
            out.push_back({"pullback.opsh." + pb.text(),
                           {{"field", pb.text()}, {"points", npts}, {"quad_escalations", quad},
                            {"min_det_plus_rounding", min_det_excess}, {"min_diag", min_diag}},
                           worst,
                           0.0,
                           "min(det + rounding, diag) >= -" + fmt::num(ptol),
                           worst >= -ptol});
        }
    }
    return out;
}

inline std::vector<CheckResult> suite_geometry(const SuiteConfig& cfg) {
    std::vector<CheckResult> out = suite_automorphism(cfg);
    const auto pb = suite_pullback(cfg);
    out.insert(out.end(), pb.begin(), pb.end());
    return out;
}

// ---- integration by parts ------------------------------------------------------

inline std::vector<std::string> ibp_catalog() {
    return {"sqnorm", "fundamental_smoothed [0.3 0 0 0 0 0 0 0 0.2] 0.5", "ipow sqnorm 2"};
}

inline std::vector<CheckResult> suite_ibp(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double k = cfg.sigmas();
    const auto cat = ibp_catalog();
    auto run = [&](const std::string& tag, const std::string& us, const std::string& vs, const std::string& ws,
                   IbpMode mode) {
        const std::string name = "ibp." + tag + " u=" + us + " v=" + vs + " w=" + ws;
        const QuadratureSpec s = cfg.spec(name);
        const IbpReport r = ibp_residual(parse_field(us), parse_field(vs), parse_field(ws), s, mode);
        json in = {{"u", us}, {"v", vs}, {"w", ws}, {"quadrature", spec_json(s)},
                   {"volume", r.volume.value}, {"boundary", r.boundary.value}};
        out.push_back(zero_gate(name, std::move(in), r.residual, k));
    };
    for (const auto& u : cat)
        for (const auto& v : cat)
            for (const auto& w : cat) run("full", u, v, w, IbpMode::Full);
    for (const auto& u : cat)
        for (const auto& w : cat) run("boundary", u, "const 1", w, IbpMode::BoundaryOnly);
    for (const auto& u : {std::string("bump origin 0.8"), std::string("bump [0.2 0 0 0 0 0 0 0 -0.1] 0.6")})
        for (const auto& v : cat)
            for (const auto& w : {cat[0], cat[1]}) run("exchange", u, v, w, IbpMode::Exchange);
    return out;
}

// ---- comparison --------------------------------------------------------------

inline std::vector<CheckResult> suite_comparison(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double k = cfg.sigmas();
    struct Pair {
        std::string u, v;
        double radius;
        bool equality;
    };
    const std::vector<Pair> pairs = {
        {"scale_shift sqnorm 1 -0.5", "scale_shift sqnorm 0.6 -0.4", 0.6, false},
        {"fundamental_smoothed origin 1", "const -0.2962962962962963", 0.8, false},
        {"fundamental_smoothed origin 0.3", "scale_shift sqnorm 4 -10", 0.5, false},
        {"scale_shift sqnorm 1 -0.5", "scale_shift sqnorm 1 -0.5", 1.0, true},
    };
    for (const auto& p : pairs) {
        const std::string name = "comparison u=" + p.u + " v=" + p.v;
        QuadratureSpec s = cfg.spec(name);
        s.r_out = p.radius;
        const ComparisonReport r = comparison_check(parse_field(p.u), parse_field(p.v), s);
        json in = {{"u", p.u}, {"v", p.v}, {"domain_radius", p.radius}, {"quadrature", spec_json(s)},
                   {"mass_u", r.mass_u.value}, {"mass_v", r.mass_v.value}};
        if (p.equality) out.push_back(zero_gate(name, std::move(in), r.difference, k));
        else out.push_back(nonneg_gate(name, std::move(in), r.difference, k));
    }
    return out;
}

// ---- Lelong numbers ----------------------------------------------------------

inline json lelong_rows(const LelongReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows)
        rows.push_back({{"r", row.r}, {"sigma_over_r8", row.sigma_over_r8.value}, {"stderr", row.sigma_over_r8.stderr_}});
    return rows;
}

inline std::vector<CheckResult> suite_lelong(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double k = cfg.sigmas();
    const auto grid = default_r_grid();
    for (const std::string text : {"fundamental_smoothed origin 0.01", "fundamental_smoothed origin 0.001",
                                   "sqnorm", "ipow sqnorm 2"}) {
        const std::string name = "lelong.monotone w=" + text;
        const QuadratureSpec s = cfg.spec(name);
        const LelongReport r = lelong(Point{}, parse_field(text), grid, s);
        out.push_back({name, {{"w", text}, {"quadrature", spec_json(s)}, {"rows", lelong_rows(r)}},
                       r.monotone ? 1.0 : 0.0, 0.0, "sigma/r^8 nondecreasing up to " + fmt::num(k) + " stderr",
                       r.monotone});
    }
    for (const Point& a : {Point{}, pt({0.3, 0, 0, 0, 0, 0, 0, 0, 0.2})}) {
        const std::string name = "lelong.smooth_zero a=" + fmt::point(a);
        const QuadratureSpec s = cfg.spec(name);
        const LelongReport r = lelong(a, sq_norm(), {0.1, 0.2}, s);
        out.push_back(zero_gate(name, {{"w", "sqnorm"}, {"a", fmt::point(a)}, {"quadrature", spec_json(s)}}, r.lelong,
                                k));
    }
    const std::vector<double> eps = {1e-2, 1e-3, 1e-4};
    {
        const std::string name = "lelong.pole_positive";
        const QuadratureSpec s = cfg.spec(name);
        const LelongReport r = lelong_fundamental(Point{}, Point{}, {0.1, 0.2}, eps, s);
        const double z = r.lelong.value / r.lelong.stderr_;
        out.push_back({name,
                       {{"pole", "origin"}, {"a", "origin"}, {"eps", eps}, {"quadrature", spec_json(s)},
                        {"rows", lelong_rows(r)}, {"eps_fit_residual", r.eps_fit_residual}},
                       r.lelong.value, r.lelong.stderr_, "value > 5 stderr", z > 5.0});
    }
    {
        const std::string name = "lelong.off_pole_zero";
        const QuadratureSpec s = cfg.spec(name);
        const Point a = pt({0.5});
        const LelongReport r = lelong_fundamental(Point{}, a, {0.1, 0.2}, eps, s);
        // the eps extrapolation leaves an O(eps^2) bias, so zero is judged against the pole mass
        const double rel = cfg.get("lelong.off_pole_rel", 1e-4);
        const double allowance = rel * 48 * sphere_area(16);
        out.push_back({name,
                       {{"pole", "origin"}, {"a", fmt::point(a)}, {"eps", eps}, {"quadrature", spec_json(s)},
                        {"eps_fit_residual", r.eps_fit_residual}},
                       r.lelong.value, r.lelong.stderr_,
                       "|value| <= " + fmt::num(k) + " stderr + " + fmt::num(allowance),
                       std::fabs(r.lelong.value) <= k * r.lelong.stderr_ + allowance});
    }
    return out;
}

// ---- capacity ----------------------------------------------------------------

/// C(0.5, 1) from the delta sweep at the default configuration (seed 1, 2e5 QMC points per delta).
inline constexpr double kCapacityRegression = 0.1363963;

inline json capacity_json(const CapacityReport& r) {
    json m = json::array();
    for (std::size_t i = 0; i < r.masses.size(); ++i)
        m.push_back({{"delta", r.condenser.deltas[i]}, {"mass", r.masses[i].value}, {"stderr", r.masses[i].stderr_}});
    return {{"a", fmt::point(r.condenser.a)}, {"r", r.condenser.r}, {"R", r.condenser.R}, {"sweep", m},
            {"capacity", r.capacity.value}, {"capacity_stderr", r.capacity.stderr_},
            {"extrapolation_residual", r.extrapolation_residual}};
}

inline std::vector<CheckResult> suite_capacity(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double k = cfg.sigmas();
    auto cap = [&](double r, double R) {
        CondenserSpec c;
        c.r = r;
        c.R = R;
        return capacity_ball(c, cfg.spec("capacity r=" + fmt::num(r) + " R=" + fmt::num(R), Method::QMC));
    };
    const CapacityReport base = cap(0.5, 1.0);
    const double ek = cfg.get("extrapolation", 5.0);
    out.push_back({"capacity.converged", capacity_json(base), base.extrapolation_residual, base.residual_stderr,
                   "residual <= " + fmt::num(ek) + " stderr", base.converged(ek)});
    {
        QuadratureEstimate d = base.capacity;
        d.value -= kCapacityRegression;
        out.push_back(zero_gate("capacity.regression", {{"frozen", kCapacityRegression}, {"r", 0.5}, {"R", 1.0}}, d,
                                k + 1.0));
    }
    const CapacityReport c3 = cap(0.3, 1.0), c4 = cap(0.4, 1.0);
    auto increase = [&](const std::string& name, const CapacityReport& lo, const CapacityReport& hi) {
        const QuadratureEstimate d = hi.capacity - lo.capacity;
        out.push_back({name, {{"lower", capacity_json(lo)}, {"upper", capacity_json(hi)}}, d.value, d.stderr_,
                       "difference > " + fmt::num(k) + " stderr", d.value > k * d.stderr_});
    };
    increase("capacity.increasing_r 0.3<0.4", c3, c4);
    increase("capacity.increasing_r 0.4<0.5", c4, base);
    const CapacityReport wide = cap(0.5, 1.5);
    increase("capacity.decreasing_R 1.5>1", wide, base);

    // the exact extremal function has vanishing MA density off |x - a| = r
    {
        const ScalarField u = extremal_ball(Point{}, 0.5, 1.0, 0.0);
        Stream rng(cfg.seed_for("capacity.exact_density"), 4);
        double worst = 0;
        for (int i = 0; i < 1000; ++i) {
            const double rad = i % 2 ? 0.5 + 0.01 + 0.49 * rng.uniform() : 0.49 * rng.uniform();
            worst = std::max(worst, std::fabs(ma_density(u, random_sphere_point(rng, rad))));
        }
        out.push_back(upper_gate("capacity.exact_density_vanishes", {{"field", u.text()}, {"points", 1000}}, worst,
                                 cfg.get("density", 1e-8)));
    }
    return out;
}

// ---- Perron sandwich -----------------------------------------------------------

inline std::size_t perron_walks(const SuiteConfig& cfg) { return std::max<std::size_t>(1000, cfg.samples / 50); }

inline std::vector<CheckResult> suite_perron(const SuiteConfig& cfg) {
    using namespace suite_detail;
    std::vector<CheckResult> out;
    const double k = cfg.sigmas();
    QuadratureSpec ws;
    ws.samples = perron_walks(cfg);

    auto sandwich_points = [&](const std::string& name, const BoundaryData& bd, const LowerEnvelope& env,
                               const std::vector<Point>& pts) {
        double worst_z = -INFINITY, worst_gap = -INFINITY;
        bool tight = true, ordered = true;
        std::size_t i = 0;
        for (const auto& x : pts) {
            QuadratureSpec s = ws;
            s.seed = splitmix64(cfg.seed_for(name) + i++);
            const SandwichValue v = sandwich_eval(bd, env, x, s);
            tight = tight && v.tight(k);
            ordered = ordered && v.ordered(k);
            worst_gap = std::max(worst_gap, v.gap);
            if (v.upper.stderr_ > 0) worst_z = std::max(worst_z, v.gap / v.upper.stderr_);
        }
        return std::tuple{tight, ordered, worst_gap, worst_z};
    };

    {
        BoundaryData one{constant(1.0), 0.0, constant(1.0), {}};
        const LowerEnvelope env = build_lower(one, 64, cfg.seed_for("perron.const"));
        const auto pts = interior_points(one.phi, 10, 0.95, cfg.seed_for("perron.const.points"));
        auto [tight, ordered, gap, z] = sandwich_points("perron.const", one, env, pts);
        out.push_back({"perron.constant_gap", {{"phi", "const 1"}, {"M", 64}, {"points", pts.size()}, {"walks", ws.samples}},
                       gap, 0.0, "gap <= " + fmt::num(k) + " stderr", tight && ordered});
    }
    {
        const ScalarField re1 = coord(0);
        BoundaryData lin{re1, 0.0, re1, {re1}};
        const LowerEnvelope env = build_lower(lin, 64, cfg.seed_for("perron.linear"));
        const auto pts = interior_points(re1, 100, 0.95, cfg.seed_for("perron.linear.points"));
        auto [tight, ordered, gap, z] = sandwich_points("perron.linear", lin, env, pts);
        out.push_back({"perron.linear_gap",
                       {{"phi", re1.text()}, {"M", 64}, {"points", pts.size()}, {"walks", ws.samples},
                        {"max_gap_over_stderr", z}},
                       gap, 0.0, "gap <= " + fmt::num(k) + " stderr at every point", tight && ordered});
        // certification of the injected candidate: OPSH and zero MA density
        const auto cpts = interior_points(re1, 100, 1.0, cfg.seed_for("perron.linear.cert"));
        const OpshReport o = opsh_check(re1, cpts);
        double worst = 0;
        for (const auto& x : cpts) worst = std::max(worst, std::fabs(ma_density(re1, x)));
        out.push_back({"perron.linear_candidate_maximal", {{"candidate", re1.text()}, {"points", cpts.size()}}, worst,
                       0.0, "OPSH and |MA| <= 1e-12", o.pass() && worst <= 1e-12});
    }

    // smooth datum: barriers only
    const ScalarField smooth_phi = parse_field("add coord 0 scale_shift ipow coord 8 2 0.5 0");
    BoundaryData sm{smooth_phi, 1.0, {}, {}};
    {
        const LowerEnvelope env = build_lower(sm, 256, cfg.seed_for("perron.smooth"), 0.05);
        const std::vector<double> hs = {1e-1, 1e-2, 1e-3};
        const SecondDifferenceReport r = second_difference_check(env.field, 0.25, hs, cfg.seed_for("perron.second"));
        json rows = json::array();
        for (const auto& row : r.rows) rows.push_back({{"h", row.h}, {"sup", row.sup_quotient}});
        out.push_back({"perron.second_difference",
                       {{"phi", smooth_phi.text()}, {"C", sm.C}, {"M", 256}, {"smoothing", 0.05}, {"margin", 0.25},
                        {"rows", rows}},
                       r.sup, 0.0, "finite sup, relative change <= 0.1 between the finest h",
                       r.bounded() && r.stable()});

        const auto pts = interior_points(smooth_phi, 20, 0.9, cfg.seed_for("perron.smooth.points"));
        auto [tight, ordered, gap, z] = sandwich_points("perron.smooth", sm, env, pts);
        out.push_back({"perron.smooth_order", {{"phi", smooth_phi.text()}, {"points", pts.size()}, {"walks", ws.samples}},
                       gap, 0.0, "lower <= upper + " + fmt::num(k) + " stderr", ordered});

        // near the sphere both bounds are within 5 C (1 - 0.99) of phi; the smoothed
        // envelope sits up to tau log M below the max, so the plain max is used here
        const LowerEnvelope hard = build_lower(sm, 256, cfg.seed_for("perron.smooth"));
        double worst_lower = 0, worst_upper_z = 0;
        std::size_t i = 0;
        for (const auto& x0 : std::vector<Point>(hard.feet.begin(), hard.feet.begin() + 10)) {
            const Point x = x0 * 0.99;
            const double p = smooth_phi(x);
            QuadratureSpec s = ws;
            s.seed = splitmix64(cfg.seed_for("perron.boundary") + i++);
            const QuadratureEstimate up = upper_harmonic(sm, x, s);
            worst_lower = std::max(worst_lower, std::fabs(hard.field(x) - p));
            worst_upper_z = std::max(worst_upper_z, std::fabs(up.value - p) - k * up.stderr_);
        }
        const double bound = 5 * sm.C * 0.01;
        out.push_back(upper_gate("perron.boundary_lower", {{"radius", 0.99}, {"points", 10}}, worst_lower, bound));
        out.push_back(upper_gate("perron.boundary_upper", {{"radius", 0.99}, {"points", 10}}, worst_upper_z, bound));
    }
    {
        const LowerEnvelope small = build_lower(sm, 64, cfg.seed_for("perron.nested"));
        const LowerEnvelope large = build_lower(sm, 4096, cfg.seed_for("perron.nested"));
        double worst = INFINITY;
        for (const auto& x : qmc_ball_points(200, 1.0, cfg.seed_for("perron.nested.points")))
            worst = std::min(worst, large.field(x) - small.field(x));
        out.push_back(lower_gate("perron.lower_monotone_in_M", {{"M", {64, 4096}}, {"points", 200}}, worst, 0.0));
    }
    {
        // trace of an off-centre extremal function: barriers alone stay strictly below
        const ScalarField ext = parse_field("extremal [0.3] 0.5 1.5 0");
        BoundaryData bd{ext, 0.0, {}, {}};
        bd.C = 2.0 * validate_boundary(BoundaryData{ext, INFINITY, {}, {}}).sup_quotient;
        const LowerEnvelope env = build_lower(bd, 256, cfg.seed_for("perron.extremal"));
        QuadratureSpec s = ws;
        s.seed = cfg.seed_for("perron.extremal.upper");
        const SandwichValue v = sandwich_eval(bd, env, Point{}, s);
        out.push_back({"perron.extremal_gap", {{"phi", ext.text()}, {"C", bd.C}, {"M", 256}, {"lower", v.lower},
                                               {"upper", v.upper.value}},
                       v.gap, v.upper.stderr_, "0 < gap, lower <= upper + " + fmt::num(k) + " stderr",
                       v.ordered(k) && v.gap > k * v.upper.stderr_});
    }
    {
        const ScalarField re1 = coord(0);
        BoundaryData lin{re1, 0.5, {}, {}};
        std::vector<ScalarField> comps;
        for (const auto& x0 : qmc_sphere_points(16, 1.0, cfg.seed_for("maximality")))
            comps.push_back(boundary_barrier(lin, x0));
        const MaximalityReport m = maximality_check(re1, comps, Point{}, 1.0, cfg.seed_for("maximality.linear"));
        out.push_back(upper_gate("maximality.linear", {{"u", re1.text()}, {"competitors", comps.size()}},
                                 m.worst_excess, 1e-9));
        const MaximalityReport z = maximality_check(constant(0.0), {parse_field("scale_shift sqnorm 1 -1"),
                                                                   parse_field("fundamental_smoothed origin 1"),
                                                                   constant(-0.5)},
                                                    Point{}, 1.0, cfg.seed_for("maximality.zero"));
        out.push_back(upper_gate("maximality.zero", {{"u", "const 0"}, {"competitors", 3}}, z.worst_excess, 1e-9));
        const MaximalityReport neg = maximality_check(parse_field("scale_shift sqnorm 1 -1"), {constant(0.0)}, Point{},
                                                      1.0, cfg.seed_for("maximality.negative"));
        out.push_back({"maximality.detects_non_maximal", {{"u", "scale_shift sqnorm 1 -1"}, {"competitor", "const 0"}},
                       neg.worst_excess, 0.0, "check fails (excess > 1e-9)", !neg.pass()});
    }
    return out;
}

// ---- dispatch ------------------------------------------------------------------

inline bool is_suite(const std::string& name) {
    const auto& n = suite_names();
    return name == "all" || std::find(n.begin(), n.end(), name) != n.end();
}

inline std::vector<CheckResult> run_suite(const std::string& name, const SuiteConfig& cfg) {
    static const std::map<std::string, std::function<std::vector<CheckResult>(const SuiteConfig&)>> table = {
        {"algebra", suite_algebra}, {"hermitian", suite_hermitian},   {"jets", suite_jets},
        {"geometry", suite_geometry}, {"ibp", suite_ibp},             {"comparison", suite_comparison},
        {"lelong", suite_lelong},   {"capacity", suite_capacity},     {"perron", suite_perron}};
    if (name == "all") {
        std::vector<CheckResult> all;
        for (const auto& s : suite_names()) {
            auto r = table.at(s)(cfg);
            all.insert(all.end(), r.begin(), r.end());
        }
        return all;
    }
    const auto it = table.find(name);
    if (it == table.end()) throw DomainError("cli", "unknown suite '" + name + "'");
    return it->second(cfg);
}

} // namespace octo
