#include <catch_amalgamated.hpp>

#include <random>

#include "octo/field_text.hpp"
#include "octo/quadrature.hpp"

using namespace octo;

namespace {

Point random_point(std::mt19937_64& g, double radius) {
    std::normal_distribution<double> n;
    Point x;
    for (int i = 0; i < kVars; ++i) x[i] = n(g);
    return x * (radius / norm(x));
}

const char* const kTexts[] = {
    "const -2.5",
    "coord 11",
    "affine 1 [0 2 0 0 0 0 0 0 -1]",
    "sqnorm",
    "sqdist [0.1 0.2]",
    "rho",
    "shell_pusher",
    "quadratic_pusher",
    "fundamental [0.5]",
    "fundamental_smoothed origin 0.25",
    "extremal [0.1] 0.3 0.9 0.01",
    "bump [0 0.2] 0.5",
    "barrier [0 1] 0.5 [1 0 2] 3",
    "add sqnorm coord 3",
    "mul coord 0 coord 8",
    "scale_shift sqnorm 2 -1",
    "pow add sqnorm const 1 1.5",
    "ipow sqnorm 3",
    "smooth_max coord 0 coord 1 0.1",
    "maxn 3 coord 0 coord 1 const 0.2",
    "lsen 2 0.05 coord 0 coord 1",
    "pullback [0.2 0 0 0 0 0 0 0 0.1] sqnorm",
    "pullback_inv [0.2] fundamental_smoothed origin 0.5",
};

} // namespace

TEST_CASE("text form round trips", "[catalog]") {
    std::mt19937_64 g(31);
    for (const char* text : kTexts) {
        INFO(text);
        const ScalarField f = parse_field(text);
        const ScalarField h = parse_field(f.text());
        CHECK(h.text() == f.text());
        CHECK(h.opsh() == f.opsh());
        CHECK(h.smooth() == f.smooth());
        for (int t = 0; t < 5; ++t) {
            const Point x = random_point(g, 0.6);
            CHECK(h(x) == f(x));
        }
    }
}

TEST_CASE("parser accepts commas and rejects malformed input", "[catalog]") {
    CHECK(parse_field("sqdist [0.1, 0.2]")(Point{}) == Catch::Approx(0.05));
    CHECK(parse_point("[1,2,3]")[2] == 3.0);
    CHECK(norm(parse_point("origin")) == 0.0);
    for (const char* bad : {"", "nosuch", "sqnorm extra", "coord x", "sqdist [1 2", "ipow sqnorm 1.5",
                            "maxn 0", "fundamental [1 2 3 4 5 6 7 8 9 10 11 12 13 14 15 16 17]", "const 1e"}) {
        INFO(bad);
        CHECK_THROWS_AS(parse_field(bad), ParseError);
    }
    CHECK_THROWS_AS(parse_field("coord 16"), DomainError);
    CHECK_THROWS_AS(parse_field("bump origin 0"), DomainError);
    CHECK_THROWS_AS(parse_field("extremal origin 1 0.5 0"), DomainError);
    CHECK_THROWS_AS(parse_field("barrier [0.5] 0 origin 1"), DomainError);
}

TEST_CASE("closed-form values", "[catalog]") {
    std::mt19937_64 g(32);
    const Point a = parse_point("[0.1 0 0.2]");
    for (int t = 0; t < 50; ++t) {
        const Point x = random_point(g, 0.3 + 0.6 * (t / 49.0));
        const double s = norm2(x - a);
        CHECK(fundamental(a)(x) == Catch::Approx(-1.0 / (s * s * s)));
        CHECK(fundamental_smoothed(a, 0.2)(x) == Catch::Approx(-std::pow(s + 0.2, -3)));
        CHECK(defining_rho()(x) == Catch::Approx(0.5 * (norm2(x) - 1)));
        const double bump = std::max(0.0, 1 - s / 0.25);
        CHECK(parse_field("bump [0.1 0 0.2] 0.5")(x) == Catch::Approx(bump * bump * bump * bump).margin(1e-15));
    }
    CHECK(shell_pusher()(random_point(g, 1.0)) == Catch::Approx(4.0));
}

TEST_CASE("extremal function of concentric balls", "[catalog]") {
    std::mt19937_64 g(33);
    const Point a = parse_point("[0.2]");
    const ScalarField w = extremal_ball(a, 0.3, 0.7, 0.0);
    for (int t = 0; t < 50; ++t) {
        CHECK(w(a + random_point(g, 0.3 * (t + 1) / 51.0)) == Catch::Approx(-1.0));
        CHECK(w(a + random_point(g, 0.3)) == Catch::Approx(-1.0));
        CHECK(w(a + random_point(g, 0.7)) == Catch::Approx(0.0).margin(1e-12));
        const double mid = w(a + random_point(g, 0.5));
        CHECK(mid > -1.0);
        CHECK(mid < 0.0);
    }
    CHECK(w.opsh());
    CHECK_FALSE(w.smooth());
    CHECK(extremal_ball(a, 0.3, 0.7, 0.01).smooth());
}

TEST_CASE("barrier touches at its foot and is affine", "[catalog]") {
    std::mt19937_64 g(34);
    const Point x0 = random_point(g, 1.0);
    const Point grad = random_point(g, 2.0);
    const ScalarField b = barrier(x0, 0.7, grad, 1.5);
    CHECK(b(x0) == Catch::Approx(0.7));
    const Point y = random_point(g, 0.5), z = random_point(g, 0.5);
    CHECK(b((y + z) * 0.5) == Catch::Approx(0.5 * (b(y) + b(z))));
    // the barrier is below phi0 + grad.(x - x0) on the unit sphere
    for (int t = 0; t < 100; ++t) {
        const Point x = random_point(g, 1.0);
        CHECK(b(x) <= 0.7 + dot(grad, x - x0) + 1e-12);
    }
}

TEST_CASE("max and log-sum-exp combinations", "[catalog]") {
    std::mt19937_64 g(35);
    const std::vector<ScalarField> fs = {coord(0), coord(5), scale_shift(sq_norm(), 1, -0.4)};
    const ScalarField mx = max_of(fs);
    const ScalarField lse = lse_of(fs, 0.05);
    for (int t = 0; t < 100; ++t) {
        const Point x = random_point(g, 0.9);
        const double m = std::max({fs[0](x), fs[1](x), fs[2](x)});
        CHECK(mx(x) == m);
        CHECK(lse(x) <= m + 1e-15);
        CHECK(lse(x) >= m - 0.05 * std::log(3.0) - 1e-15);
    }
    CHECK(mx.opsh());
    CHECK_FALSE(mx.smooth());
    CHECK(lse.smooth());
    CHECK_THROWS_AS(max_of({}), DomainError);
}

TEST_CASE("OPSH flags follow the constructors", "[catalog]") {
    CHECK(parse_field("add sqnorm fundamental origin").opsh());
    CHECK(parse_field("scale_shift sqnorm 2 -1").opsh());
    CHECK_FALSE(parse_field("scale_shift sqnorm -2 -1").opsh());
    CHECK_FALSE(parse_field("mul coord 0 coord 8").opsh());
    CHECK_FALSE(parse_field("bump origin 0.5").opsh());
    CHECK(parse_field("pullback [0.2] fundamental_smoothed origin 0.5").opsh());
    CHECK(parse_field("fundamental [0.3]").singular().size() == 1);
}

TEST_CASE("fundamental solution raises at its pole", "[catalog]") {
    const ScalarField K = fundamental(parse_point("[0.5]"));
    CHECK_THROWS_AS(K(parse_point("[0.5]")), DomainError);
    CHECK(K.singular_distance(Point{}) == Catch::Approx(0.5));
}
