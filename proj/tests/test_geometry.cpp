#include <catch_amalgamated.hpp>

#include <complex>
#include <random>

#include "octo/field_text.hpp"
#include "octo/geometry.hpp"
#include "octo/operators.hpp"

using namespace octo;

namespace {

Point random_point(std::mt19937_64& g, double radius) {
    std::normal_distribution<double> n;
    std::uniform_real_distribution<double> u;
    Point x;
    for (int i = 0; i < kVars; ++i) x[i] = n(g);
    return x * (radius * std::pow(u(g), 1.0 / 16) / norm(x));
}

Point on_sphere(std::mt19937_64& g) {
    Point x = random_point(g, 1.0);
    return x * (1.0 / norm(x));
}

Oct random_imag(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    Oct t;
    for (int p = 1; p < 8; ++p) t.c[p] = n(g);
    return t;
}

const Point kCenters[] = {Point{}, parse_point("[0.3]"), parse_point("[0 0 0 0 0 0 0 0 -0.4]"),
                          parse_point("[0.2 0.1 0 0 0 0 0 0 0.15 0 -0.3]"), parse_point("[0 0 0 0.5 0 0 0 0 0 0 0 0 0.6]")};

} // namespace

TEST_CASE("Cayley transform onto the Siegel domain", "[geometry]") {
    std::mt19937_64 g(41);
    for (int t = 0; t < 1000; ++t) {
        const Point x = random_point(g, 0.99);
        const SiegelPoint y = cayley(x);
        const double expected = 2 * (1 - norm2(x)) / norm2(Oct(1.0) + x.x2);
        CHECK(y.defect() == Catch::Approx(expected).epsilon(1e-10));
        CHECK(norm(cayley_inv(y) - x) < 1e-12);
    }
}

TEST_CASE("automorphisms move the center to the origin and invert", "[geometry]") {
    std::mt19937_64 g(42);
    for (const Point& a : kCenters) {
        const auto P = automorphism_params(a);
        CHECK(norm(t_a(P, a)) < 1e-10);
        for (int t = 0; t < 2000; ++t) {
            const Point x = random_point(g, 0.95);
            const Point y = t_a(P, x);
            CHECK(norm(y) < 1.0);
            CHECK(norm(t_a_inv(P, y) - x) < 1e-10);
            CHECK(norm(t_a_composed(P, x) - y) < 1e-10);
            CHECK(re(g_a(P, x)) >= 1 - 1e-10);
        }
        for (int t = 0; t < 200; ++t) CHECK(norm(t_a(P, on_sphere(g))) == Catch::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("restriction to a complex disc is the Moebius map", "[geometry]") {
    // for a = (0, s) with real s the slice x1 = 0, x2 complex is invariant and
    // T_a acts there as z -> (z - s)/(1 - s z)
    std::mt19937_64 g(43);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (double s : {-0.6, -0.2, 0.3, 0.8}) {
        Point a;
        a[8] = s;
        const auto P = automorphism_params(a);
        for (int t = 0; t < 200; ++t) {
            const std::complex<double> z(u(g), u(g));
            Point x;
            x[8] = z.real();
            x[9] = z.imag();
            const std::complex<double> w = (z - s) / (1.0 - s * z);
            const Point y = t_a(P, x);
            CHECK(y[8] == Catch::Approx(w.real()).margin(1e-12));
            CHECK(y[9] == Catch::Approx(w.imag()).margin(1e-12));
            CHECK(norm2(y.x1) < 1e-24);
            for (int p = 2; p < 8; ++p) CHECK(std::fabs(y[8 + p]) < 1e-12);
        }
    }
}

TEST_CASE("the two evaluations of Psi_a agree", "[geometry]") {
    std::mt19937_64 g(44);
    for (const Point& a : kCenters) {
        const auto P = automorphism_params(a);
        for (int t = 0; t < 200; ++t) {
            const Point x = random_point(g, 0.9);
            const Oct p1 = psi_a_g(P, x), p2 = psi_a_expansion(P, x), p3 = psi_a_defining(P, x);
            CHECK(norm(p1 - p2) < 1e-10 * norm(p1));
            CHECK(norm(p1 - p3) < 1e-10 * norm(p1));
        }
    }
}

TEST_CASE("centers near the sphere are rejected", "[geometry]") {
    CHECK_THROWS_AS(automorphism_params(parse_point("[0.97]")), DomainError);
    CHECK_NOTHROW(automorphism_params(parse_point("[0.94]")));
}

TEST_CASE("Heisenberg group law", "[geometry]") {
    std::mt19937_64 g(45);
    std::normal_distribution<double> n;
    auto random_heis = [&] {
        HeisPoint p;
        for (auto& c : p.x.c) c = n(g);
        p.t = random_imag(g);
        return p;
    };
    for (int t = 0; t < 1000; ++t) {
        const HeisPoint p = random_heis(), q = random_heis(), r = random_heis();
        const HeisPoint l = heis_mul(heis_mul(p, q), r), m = heis_mul(p, heis_mul(q, r));
        CHECK(norm(l.x - m.x) < 1e-12 * (1 + norm(l.x)));
        CHECK(norm(l.t - m.t) < 1e-12 * (1 + norm(l.t)));
        const HeisPoint e = heis_mul(p, heis_inv(p));
        CHECK(norm2(e.x) + norm2(e.t) < 1e-24);
        CHECK(std::fabs(re(l.t)) < 1e-12);
    }
}

TEST_CASE("translations preserve the Siegel boundary", "[geometry]") {
    std::mt19937_64 g(46);
    std::normal_distribution<double> n;
    for (int t = 0; t < 200; ++t) {
        SiegelPoint z, y;
        for (auto& c : z.y1.c) c = n(g);
        z.y2 = Oct(0.5 * norm2(z.y1)) + random_imag(g);
        for (auto& c : y.y1.c) c = n(g);
        y.y2 = Oct(0.5 * norm2(y.y1) + std::fabs(n(g))) + random_imag(g);
        const SiegelPoint w = tau(z, y);
        CHECK(w.defect() == Catch::Approx(y.defect()).margin(1e-10 * (1 + norm2(y.y1) + norm2(z.y1))));
        const SiegelPoint back = tau(tau_inverse_param(z), w);
        CHECK(norm(back.y1 - y.y1) < 1e-10 * (1 + norm(y.y1)));
        CHECK(norm(back.y2 - y.y2) < 1e-9 * (1 + norm(y.y2) + norm2(z.y1)));
    }
    SiegelPoint off;
    off.y2 = Oct(1.0);
    CHECK_THROWS_AS(tau(off, SiegelPoint{}), DomainError);
}

TEST_CASE("weighted pullbacks keep OPSH fields nonnegative", "[geometry]") {
    for (const Point& a : kCenters) {
        for (const char* text : {"sqnorm", "fundamental_smoothed origin 0.2", "add sqdist [0.1] coord 3"}) {
            const ScalarField f = weighted_pullback(a, parse_field(text));
            CHECK(f.opsh());
            const OpshReport r = opsh_check(f, interior_points(f, 100, 0.9, 47), 2, 47);
            INFO(f.text());
            CHECK(r.matrix_pass());
        }
    }
}

TEST_CASE("poles move with the pullback", "[geometry]") {
    const Point a = parse_point("[0.3]");
    const Point pole = parse_point("[0 0.2]");
    const ScalarField f = weighted_pullback(a, fundamental(pole));
    REQUIRE(f.singular().size() == 1);
    CHECK(norm(t_a(automorphism_params(a), f.singular()[0]) - pole) < 1e-12);
}

TEST_CASE("second-difference weight is trivial for h = 0", "[geometry]") {
    std::mt19937_64 g(48);
    const Point a = kCenters[3];
    for (int t = 0; t < 20; ++t) {
        const Point x = random_point(g, 0.8);
        const SecondDiffWeight w = second_diff_weight(a, Point{}, x);
        CHECK(w.J == Catch::Approx(1.0));
        CHECK(norm(w.L - x) < 1e-10);
    }
}
