#include <catch_amalgamated.hpp>

#include <random>

#include "octo/differential.hpp"
#include "octo/field_text.hpp"
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

// For a radial f(s), s = |x|^2: the real Hessian is 2f' I + 4f'' x x^T, so the
// slot Laplacians are 16f' + 4f''|x_a|^2 and the off-diagonal entry
// sum_{p,q} H_{(1p)(2q)} e_p conj(e_q) is 4f'' x1 conj(x2).
struct Radial {
    double d1, d2;  // f'(s), f''(s)
};

Herm radial_hessian(const Point& x, Radial f) {
    Herm h;
    h.a11 = 16 * f.d1 + 4 * f.d2 * norm2(x.x1);
    h.a22 = 16 * f.d1 + 4 * f.d2 * norm2(x.x2);
    h.a12 = (x.x1 * conj(x.x2)) * (4 * f.d2);
    return h;
}

Radial smoothed_fundamental(double s, double eps) {
    return {3 * std::pow(s + eps, -4), -12 * std::pow(s + eps, -5)};
}

} // namespace

TEST_CASE("jet derivatives match central differences", "[jets]") {
    const ScalarField f = parse_field("add mul coord 0 ipow coord 9 2 pow add sqnorm const 1 0.5");
    std::mt19937_64 g(21);
    for (int t = 0; t < 20; ++t) {
        const Point x = random_point(g, 0.8);
        const Jet3d j = f.jet3(x);
        CHECK(j.v == Catch::Approx(f(x)).epsilon(1e-14));
        const double h = 1e-4;
        for (int i = 0; i < kVars; ++i) {
            const Point e = axis_point(i / 8, i % 8, h);
            CHECK(j.g[i] == Catch::Approx((f(x + e) - f(x - e)) / (2 * h)).margin(1e-7));
            for (int k = i; k < kVars; ++k) {
                const Jet2d jp = f.jet2(x + e), jm = f.jet2(x - e);
                CHECK(j.hess(i, k) == Catch::Approx((jp.g[k] - jm.g[k]) / (2 * h)).margin(1e-6));
                CHECK(j.third(i, k, 3) == Catch::Approx((jp.hess(k, 3) - jm.hess(k, 3)) / (2 * h)).margin(1e-5));
            }
        }
    }
}

TEST_CASE("quad and double jets agree", "[jets]") {
    const ScalarField f = parse_field("fundamental_smoothed [0.1 0 0 0.2] 0.05");
    std::mt19937_64 g(22);
    for (int t = 0; t < 20; ++t) {
        const Point x = random_point(g, 0.9);
        const Jet2d d = f.jet2(x);
        const Jet2q q = f.jet2q(x);
        for (int i = 0; i < kHessSize; ++i) CHECK(d.h[i] == Catch::Approx(static_cast<double>(q.h[i])).epsilon(1e-12));
    }
}

TEST_CASE("octonionic Hessian of radial fields", "[jets]") {
    std::mt19937_64 g(23);
    for (int t = 0; t < 100; ++t) {
        const Point x = random_point(g, 1.5);
        const double s = norm2(x), eps = 0.01;
        const Herm h = oct_hessian(fundamental_smoothed(Point{}, eps), x);
        const Herm r = radial_hessian(x, smoothed_fundamental(s, eps));
        const double scale = std::fabs(r.a11) + std::fabs(r.a22);
        CHECK(h.a11 == Catch::Approx(r.a11).epsilon(1e-11));
        CHECK(h.a22 == Catch::Approx(r.a22).epsilon(1e-11));
        for (int p = 0; p < 8; ++p) CHECK(h.a12.c[p] == Catch::Approx(r.a12.c[p]).margin(1e-11 * scale));

        const Herm hs = oct_hessian(sq_norm(), x);
        CHECK(hs.a11 == Catch::Approx(16.0));
        CHECK(hs.a22 == Catch::Approx(16.0));
        CHECK(norm(hs.a12) < 1e-13);
    }
}

TEST_CASE("MA density of the smoothed fundamental solution", "[jets]") {
    // det = 256 f'^2 + 64 f' f'' s = 2304 eps / (s + eps)^9
    std::mt19937_64 g(24);
    for (double eps : {1.0, 0.1, 0.01}) {
        for (int t = 0; t < 200; ++t) {
            const Point x = random_point(g, 2.0);
            const double s = norm2(x);
            const double expected = 2304 * eps / std::pow(s + eps, 9);
            CHECK(ma_density(fundamental_smoothed(Point{}, eps), x) == Catch::Approx(expected).epsilon(1e-8));
        }
    }
}

TEST_CASE("MA density of the fundamental solution vanishes off the pole", "[jets]") {
    std::mt19937_64 g(25);
    const ScalarField K = fundamental(Point{});
    for (int t = 0; t < 200; ++t) {
        Point x = random_point(g, 1.0);
        const double r = 0.1 + 2.9 * (t / 199.0);
        x = x * (r / norm(x));
        CHECK(std::fabs(ma_density(K, x)) <= 1e-8);
    }
    CHECK_THROWS_AS(ma_density(K, Point{}), DomainError);
}

TEST_CASE("mixed density is the polarization of the density", "[jets]") {
    const ScalarField u = parse_field("add ipow sqnorm 2 coord 3");
    const ScalarField v = parse_field("fundamental_smoothed [0.2] 0.3");
    const ScalarField uv = add(u, v);
    std::mt19937_64 g(26);
    for (int t = 0; t < 50; ++t) {
        const Point x = random_point(g, 0.9);
        CHECK(mixed_ma_density(u, u, x) == Catch::Approx(ma_density(u, x)).epsilon(1e-12));
        const double lhs = ma_density(uv, x);
        const double rhs = ma_density(u, x) + 2 * mixed_ma_density(u, v, x) + ma_density(v, x);
        CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("Hessians of smooth fields are closed", "[jets]") {
    std::mt19937_64 g(27);
    for (const char* text : {"fundamental_smoothed [0.3 0 0 0 0 0 0 0 0.2] 0.5", "mul coord 1 ipow coord 9 3",
                             "pow add sqnorm const 1 1.5", "pullback [0.2 0 0 0 0 0 0 0 0.1] ipow sqnorm 2",
                             "bump [0.1] 0.9"}) {
        const ScalarField f = parse_field(text);
        for (int t = 0; t < 10; ++t) CHECK(closedness_residual(f, random_point(g, 0.7)) <= 1e-8);
    }
}

TEST_CASE("incomplete field text is rejected", "[jets]") {
    CHECK_THROWS_AS(parse_field("pow sqnorm"), ParseError);
}
