#include <catch_amalgamated.hpp>

#include <numbers>

#include "octo/quadrature.hpp"

using namespace octo;

namespace {

constexpr double kPi = std::numbers::pi;
const double kPi8 = std::pow(kPi, 8);

bool within(const QuadratureEstimate& e, double exact, double k = 4.0) {
    return std::fabs(e.value - exact) <= k * e.stderr_ + 1e-12 * std::fabs(exact);
}

} // namespace

TEST_CASE("ball volume and sphere area in 16 dimensions", "[quadrature]") {
    CHECK(ball_volume(16) == Catch::Approx(kPi8 / 40320));
    CHECK(sphere_area(16) == Catch::Approx(2 * kPi8 / 5040));
    CHECK(sphere_area(16) == Catch::Approx(3.7652901).epsilon(1e-7));
    CHECK(ball_volume(8) == Catch::Approx(kPi * kPi * kPi * kPi / 24));
}

TEST_CASE("moments over the ball", "[quadrature]") {
    for (Method m : {Method::MC, Method::QMC}) {
        QuadratureSpec s;
        s.method = m;
        s.samples = 50000;
        s.seed = 3;
        const auto one = integrate(s, [](const Point&) { return 1.0; });
        CHECK(one.value == Catch::Approx(ball_volume(16)));
        // int |x|^2 = (16/18) vol
        const auto r2 = integrate(s, [](const Point& x) { return norm2(x); });
        CHECK(within(r2, ball_volume(16) * 16.0 / 18.0));
        const auto x0 = integrate(s, [](const Point& x) { return x[0]; });
        CHECK(within(x0, 0.0));
        s.r_out = 0.5;
        const auto r2h = integrate(s, [](const Point& x) { return norm2(x); });
        CHECK(within(r2h, ball_volume(16) * std::pow(0.5, 18) * 16.0 / 18.0));
    }
}

TEST_CASE("sphere, shell and disc regions", "[quadrature]") {
    QuadratureSpec s;
    s.samples = 40000;
    s.seed = 4;
    s.region = Region::Sphere;
    const auto x0sq = integrate(s, [](const Point& x) { return x[0] * x[0]; });
    CHECK(within(x0sq, sphere_area(16) / 16));

    s.region = Region::Shell;
    s.r_in = 0.5;
    s.r_out = 1.0;
    const auto shell = integrate(s, [](const Point&) { return 1.0; });
    CHECK(shell.value == Catch::Approx(ball_volume(16) * (1 - std::pow(0.5, 16))));
    const auto shell_r2 = integrate(s, [](const Point& x) { return norm2(x); });
    CHECK(within(shell_r2, ball_volume(16) * 16.0 / 18.0 * (1 - std::pow(0.5, 18))));

    QuadratureSpec d;
    d.region = Region::LineDisc;
    d.r_out = 0.7;
    d.samples = 20000;
    const auto t2 = integrate8(d, [](const Oct& t) { return norm2(t); });
    CHECK(within(t2, ball_volume(8) * std::pow(0.7, 10) * 8.0 / 10.0));
}

TEST_CASE("estimates are a pure function of their settings", "[quadrature]") {
    QuadratureSpec s;
    s.samples = 10000;
    s.seed = 77;
    auto f = [](const Point& x) { return std::exp(x[3] - x[12]); };
    const auto a = integrate(s, f), b = integrate(s, f);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    s.seed = 78;
    CHECK(integrate(s, f).value != a.value);
}

TEST_CASE("shared-sample covariance", "[quadrature]") {
    QuadratureSpec s;
    s.samples = 8000;
    const MultiEstimate m = integrate_multi(s, 2, [](const Point& x, double* out) {
        out[0] = x[1] + norm2(x);
        out[1] = 2 * (x[1] + norm2(x));
    });
    const QuadratureEstimate d = m.combine({2.0, -1.0});
    CHECK(std::fabs(d.value) < 1e-12);
    CHECK(d.stderr_ < 1e-10);
    CHECK(m.covariance(0, 1) == Catch::Approx(2 * m.covariance(0, 0)));
}

TEST_CASE("invalid specs are rejected", "[quadrature]") {
    QuadratureSpec s;
    s.samples = 10;
    CHECK_THROWS_AS(integrate(s, [](const Point&) { return 1.0; }), DomainError);
    s.samples = 5000;
    s.region = Region::Shell;
    s.r_in = 0.9;
    s.r_out = 0.5;
    CHECK_THROWS_AS(integrate(s, [](const Point&) { return 1.0; }), DomainError);
    CHECK_THROWS_AS(poisson_integral(Point{} + axis_point(0, 0, 1.0), [](const Point&) { return 1.0; }, 5000, 1),
                    DomainError);
}

TEST_CASE("point sets lie where they should", "[quadrature]") {
    for (const Point& p : qmc_sphere_points(200, 1.0, 5)) CHECK(norm(p) == Catch::Approx(1.0));
    for (const Point& p : qmc_ball_points(200, 0.5, 5)) CHECK(norm(p) <= 0.5 + 1e-15);
    Stream rng(9, 1);
    double m = 0;
    for (int i = 0; i < 20000; ++i) m += norm2(random_ball_point(rng));
    CHECK(m / 20000 == Catch::Approx(16.0 / 18.0).epsilon(0.01));
}

TEST_CASE("harmonic extension of harmonic data", "[quadrature]") {
    // x0 and x0^2 - x1^2 are harmonic in R^16, so their extensions reproduce them
    auto lin = [](const Point& z) { return z[0]; };
    auto quad = [](const Point& z) { return z[0] * z[0] - z[1] * z[1]; };
    Point x;
    x[0] = 0.2;
    x[1] = -0.1;
    x[9] = 0.15;
    const auto p1 = poisson_integral(x, lin, 200000, 6);
    CHECK(within(p1, 0.2));
    const auto p2 = poisson_integral(x, quad, 200000, 7);
    CHECK(within(p2, 0.04 - 0.01));
    // walk-on-spheres carries a bias of at most stop * Lipschitz constant
    const auto w1 = harmonic_measure_wos(x, lin, 4000, 8, 1e-4);
    CHECK(std::fabs(w1.value - 0.2) <= 4 * w1.stderr_ + 1e-4);
    const auto w2 = harmonic_measure_wos(x, quad, 4000, 9, 1e-4);
    CHECK(std::fabs(w2.value - 0.03) <= 4 * w2.stderr_ + 2e-4);
}
