#include <catch_amalgamated.hpp>

#include <random>

#include "octo/field_text.hpp"
#include "octo/perron.hpp"

using namespace octo;

namespace {

Point on_sphere(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    Point x;
    for (int i = 0; i < kVars; ++i) x[i] = n(g);
    return x * (1.0 / norm(x));
}

QuadratureSpec walks(std::uint64_t seed, std::size_t n = 4000) {
    QuadratureSpec s;
    s.seed = seed;
    s.samples = n;
    return s;
}

} // namespace

TEST_CASE("second-difference bound is validated", "[perron]") {
    // D^2 of x0^2 is 2 e0 e0^T, so quotients reach 2
    const ScalarField phi = parse_field("ipow coord 0 2");
    CHECK_THROWS_AS(validate_boundary({phi, 0.5, {}, {}}), ContractError);
    const BoundaryCheck ok = validate_boundary({phi, 2.0, {}, {}});
    CHECK(ok.sup_quotient <= 2.0 + 1e-9);
    CHECK(ok.sup_quotient > 1.0);
    CHECK_THROWS_AS(validate_boundary({phi, -1.0, {}, {}}), DomainError);
}

TEST_CASE("barriers lie below the datum on the sphere", "[perron]") {
    // on the sphere 1 - x.x0 = |x - x0|^2/2, so the barrier is the second-order
    // Taylor minorant phi0 + g.(x - x0) - C|x - x0|^2
    const ScalarField phi = parse_field("add coord 0 scale_shift ipow coord 8 2 0.5 0");
    const BoundaryData bd{phi, 1.0, {}, {}};
    std::mt19937_64 g(71);
    for (int t = 0; t < 50; ++t) {
        const Point x0 = on_sphere(g);
        double ball_min = 0;
        const ScalarField b = boundary_barrier(bd, x0, &ball_min);
        CHECK(b(x0) == Catch::Approx(phi(x0)));
        for (int k = 0; k < 50; ++k) {
            const Point x = on_sphere(g);
            CHECK(b(x) <= phi(x) + 1e-12);
            CHECK(b(x * 0.5) >= ball_min - 1e-12);
        }
    }
}

TEST_CASE("lower envelope stays below the datum and the harmonic extension", "[perron]") {
    const ScalarField phi = parse_field("add coord 0 scale_shift ipow coord 8 2 0.5 0");
    const BoundaryData bd{phi, 1.0, {}, {}};
    const LowerEnvelope env = build_lower(bd, 128, 72);
    CHECK(env.candidates.size() == 129);
    CHECK(env.field.opsh());
    std::mt19937_64 g(73);
    for (int t = 0; t < 200; ++t) {
        const Point x = on_sphere(g);
        CHECK(env.field(x) <= phi(x) + 1e-12);
        CHECK(env.constant <= phi(x) + 1e-12);
    }
    for (const Point& x : {Point{}, parse_point("[0.2 0 0 0 0 0 0 0 0.1]")}) {
        const SandwichValue v = sandwich_eval(bd, env, x, walks(74, 20000));
        CHECK(v.ordered());
        CHECK(v.gap > 0);
    }
    CHECK_THROWS_AS(build_lower(bd, 8, 1), DomainError);
    CHECK_THROWS_AS(build_lower({phi, 1.0, {}, {parse_field("scale_shift sqnorm -1 0")}}, 16, 1), ContractError);
}

TEST_CASE("constant and linear data are reproduced exactly", "[perron]") {
    const BoundaryData one{constant(1.0), 0.0, constant(1.0), {}};
    const LowerEnvelope e1 = build_lower(one, 32, 75);
    const SandwichValue v1 = sandwich_eval(one, e1, parse_point("[0.5 0.3]"), walks(76));
    CHECK(v1.lower == Catch::Approx(1.0));
    CHECK(v1.upper.value == Catch::Approx(1.0));
    CHECK(v1.tight());

    // an affine minorant below phi on the sphere is below it inside, so the
    // injected candidate is the envelope itself
    const ScalarField lin = coord(1);
    const BoundaryData bd{lin, 0.0, lin, {lin}};
    const LowerEnvelope e2 = build_lower(bd, 64, 77);
    std::mt19937_64 g(78);
    for (int t = 0; t < 10; ++t) {
        const Point x = on_sphere(g) * (0.25 * (t + 1) / 10.0);
        const SandwichValue v = sandwich_eval(bd, e2, x, walks(79 + t, 20000));
        CHECK(v.lower == Catch::Approx(lin(x)).margin(1e-14));
        CHECK(v.ordered(4));
        CHECK(std::fabs(v.gap) <= 4 * v.upper.stderr_);
    }
}

TEST_CASE("envelopes grow with the barrier count", "[perron]") {
    const ScalarField phi = parse_field("add coord 0 scale_shift ipow coord 8 2 0.5 0");
    const BoundaryData bd{phi, 1.0, {}, {}};
    const LowerEnvelope small = build_lower(bd, 32, 80), large = build_lower(bd, 512, 80);
    for (const Point& x : qmc_ball_points(100, 1.0, 81)) CHECK(large.field(x) >= small.field(x) - 1e-14);
}

TEST_CASE("second-difference quotients", "[perron]") {
    const SecondDifferenceReport q = second_difference_check(sq_norm(), 0.2, {0.05, 0.01}, 82, 500);
    for (const auto& row : q.rows) CHECK(row.sup_quotient == Catch::Approx(2.0));
    CHECK(q.stable());
    CHECK_THROWS_AS(second_difference_check(sq_norm(), 0.2, {0.2}), DomainError);
    const SecondDifferenceReport kink = second_difference_check(parse_field("maxn 2 coord 0 const 0"), 0.2,
                                                                {0.05, 0.005, 0.0005}, 83, 4000);
    // an exact max has quotients growing like 1/h near its crease
    CHECK_FALSE(kink.stable());
}

TEST_CASE("maximality", "[perron]") {
    const MaximalityReport lin = maximality_check(coord(0), {coord(0), scale_shift(coord(0), 1, -0.1)});
    CHECK(lin.pass());
    const MaximalityReport bowl = maximality_check(parse_field("scale_shift sqnorm 1 -1"), {constant(0.0)});
    CHECK_FALSE(bowl.pass());
    CHECK(bowl.worst_excess > 0.5);
    CHECK_THROWS_AS(maximality_check(constant(0.0), {constant(1.0)}), ContractError);
    CHECK_THROWS_AS(maximality_check(constant(0.0), {parse_field("bump origin 0.5")}), ContractError);
}
