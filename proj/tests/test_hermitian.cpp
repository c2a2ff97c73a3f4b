#include <catch_amalgamated.hpp>

#include <complex>
#include <random>

#include <Eigen/Dense>

#include "octo/hermitian.hpp"

using namespace octo;

namespace {

Oct random_oct(std::mt19937_64& g, double s = 1.0) {
    std::normal_distribution<double> n(0.0, s);
    Oct o;
    for (auto& c : o.c) c = n(g);
    return o;
}

Herm random_herm(std::mt19937_64& g) {
    std::normal_distribution<double> n;
    Herm A;
    A.a11 = n(g);
    A.a22 = n(g);
    A.a12 = random_oct(g, 0.7);
    return A;
}

OVec basis_vec(int i) {
    OVec v;
    (i < 8 ? v.v1.c[i] : v.v2.c[i - 8]) = 1.0;
    return v;
}

OVec sum(const OVec& a, const OVec& b) { return {a.v1 + b.v1, a.v2 + b.v2}; }

// xi -> Re(xi* A xi) is a real quadratic form on R^16; its matrix comes from polarization.
Eigen::Matrix<double, 16, 16> real_form(const Herm& A) {
    Eigen::Matrix<double, 16, 16> Q;
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j) {
            const double qi = quad_form(A, basis_vec(i)), qj = quad_form(A, basis_vec(j));
            Q(i, j) = 0.5 * (quad_form(A, sum(basis_vec(i), basis_vec(j))) - qi - qj);
        }
    return Q;
}

} // namespace

TEST_CASE("det equals the product of the two eigenvalues of the real form", "[hermitian]") {
    std::mt19937_64 g(11);
    for (int t = 0; t < 200; ++t) {
        const Herm A = random_herm(g);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 16, 16>> es(real_form(A));
        const auto ev = es.eigenvalues();
        // each eigenvalue of the octonionic matrix appears eight times
        CHECK(ev(7) == Catch::Approx(ev(0)).margin(1e-10));
        CHECK(ev(15) == Catch::Approx(ev(8)).margin(1e-10));
        CHECK(det(A) == Catch::Approx(ev(0) * ev(15)).margin(1e-10));
        const bool nonneg = ev(0) >= -1e-12;
        if (std::fabs(ev(0)) > 1e-6) CHECK(is_nonneg(A) == nonneg);
    }
}

TEST_CASE("complex entries reduce to a complex Hermitian matrix", "[hermitian]") {
    std::mt19937_64 g(12);
    std::normal_distribution<double> n;
    for (int t = 0; t < 200; ++t) {
        Herm A;
        A.a11 = n(g);
        A.a22 = n(g);
        A.a12.c[0] = n(g);
        A.a12.c[1] = n(g);
        Eigen::Matrix2cd M;
        const std::complex<double> z(A.a12.c[0], A.a12.c[1]);
        M << A.a11, z, std::conj(z), A.a22;
        CHECK(det(A) == Catch::Approx(M.determinant().real()).margin(1e-12));

        OVec xi;
        const std::complex<double> x1(n(g), n(g)), x2(n(g), n(g));
        xi.v1.c[0] = x1.real();
        xi.v1.c[1] = x1.imag();
        xi.v2.c[0] = x2.real();
        xi.v2.c[1] = x2.imag();
        Eigen::Vector2cd v(x1, x2);
        CHECK(quad_form(A, xi) == Catch::Approx((v.adjoint() * M * v)(0).real()).margin(1e-12));
    }
}

TEST_CASE("mixed determinant polarizes det", "[hermitian]") {
    std::mt19937_64 g(13);
    for (int t = 0; t < 500; ++t) {
        const Herm A = random_herm(g), B = random_herm(g);
        CHECK(det(A + B) == Catch::Approx(det(A) + 2 * mixed_det(A, B) + det(B)).margin(1e-12));
        CHECK(mixed_det(A, B) == Catch::Approx(mixed_det(B, A)).margin(1e-14));
        CHECK(mixed_det(A, A) == Catch::Approx(det(A)).margin(1e-14));
    }
}

TEST_CASE("outer products are singular and nonnegative", "[hermitian]") {
    std::mt19937_64 g(14);
    for (int t = 0; t < 500; ++t) {
        const OVec xi{random_oct(g), random_oct(g)};
        const OVec eta{random_oct(g), random_oct(g)};
        const Herm P = outer(xi);
        const double s = norm2(xi.v1) + norm2(xi.v2);
        CHECK(std::fabs(det(P)) <= 1e-12 * s * s);
        CHECK(quad_form(P, eta) >= -1e-12 * s * (norm2(eta.v1) + norm2(eta.v2)));
    }
}

TEST_CASE("sampled positivity tests never reject a nonnegative matrix", "[hermitian]") {
    std::mt19937_64 g(15);
    int pos = 0, neg = 0, neg_caught = 0;
    for (int t = 0; t < 300; ++t) {
        Herm A = random_herm(g);
        if (t % 2 == 0) {
            A.a11 = std::fabs(A.a11) + 0.5;
            A.a22 = std::fabs(A.a22) + 0.5;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 16, 16>> es(real_form(A));
        const double lo = es.eigenvalues()(0);
        if (std::fabs(lo) < 0.05) continue;
        if (lo > 0) {
            ++pos;
            CHECK(is_positive(A));
            CHECK(min_quad_form(A) >= 0);
        } else {
            ++neg;
            CHECK_FALSE(is_nonneg(A));
            neg_caught += !is_positive(A) && min_quad_form(A) < 0;
        }
    }
    // a thin negative cone can fall between the sampled directions
    CHECK(pos > 20);
    CHECK(neg_caught >= 0.9 * neg);
}

TEST_CASE("Cauchy-Schwarz gap for a positive matrix", "[hermitian]") {
    std::mt19937_64 g(16);
    for (int t = 0; t < 300; ++t) {
        Herm A = random_herm(g);
        A.a11 = std::fabs(A.a11) + 1.0;
        A.a22 = norm2(A.a12) / A.a11 + 0.5;
        const Herm B = random_herm(g);
        CHECK(cs_gap(A, B) >= -1e-12);
    }
    CHECK_THROWS_AS(cs_gap(Herm::diag(-1, 1), Herm::identity()), DomainError);
}

TEST_CASE("elementary strongly positive basis and its dual", "[hermitian]") {
    const EspBasis& b = esp_basis();
    for (int j = 0; j < 10; ++j)
        for (int k = 0; k < 10; ++k) CHECK(mixed_det(b.h[j], b.dual[k]) == Catch::Approx(j == k ? 1.0 : 0.0).margin(1e-12));
    CHECK(b.condition < 1e3);
}

TEST_CASE("coordinates round trip", "[hermitian]") {
    std::mt19937_64 g(17);
    const Herm A = random_herm(g);
    const Herm B = herm_from_coords(herm_coords(A));
    CHECK(B.a11 == A.a11);
    CHECK(B.a22 == A.a22);
    CHECK(B.a12.c == A.a12.c);
}
