#include "doctest.h"

#include <cmath>
#include <random>

#include "mate/errors.hpp"
#include "mate/fields.hpp"

using namespace mate;

namespace {
Vec2 random_vec(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    return {u(rng), u(rng)};
}
}  // namespace

TEST_CASE("conformal A values") {
    MatrixField A = make_conformal_A();
    Sym2 at0 = A({0, 0}, 0.0, {0, 0});
    CHECK(frobenius(at0) == doctest::Approx(0.0));

    Sym2 a = A({0.3, 0.2}, 1.0, {1, 0});
    CHECK(a.xx == doctest::Approx(-0.5));
    CHECK(a.yy == doctest::Approx(0.5));
    CHECK(a.xy == doctest::Approx(0.0));
}

TEST_CASE("conformal A contraction identity") {
    MatrixField A = make_conformal_A();
    std::mt19937 rng(11);
    for (int k = 0; k < 100; ++k) {
        Vec2 xi = random_vec(rng, -2, 2), eta = random_vec(rng, -2, 2);
        Vec2 p = random_vec(rng, -3, 3);
        double got = A.regularity_contraction({0, 0}, 0.0, p, xi, eta);
        double want = norm2(xi) * norm2(eta) - 2.0 * dot(xi, eta) * dot(xi, eta);
        CHECK(got == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("conformal analytic first p-jet matches symbolic form in FD mode") {
    MatrixField analytic = make_conformal_A();
    MatrixField fd([](const Vec2&, double, const Vec2& p) {
        return 0.5 * norm2(p) * Sym2::identity() - Sym2::outer(p);
    });
    Vec2 p{1, 0};
    MatrixJet jf = fd.jet({0, 0}, 0.0, p, 1);
    MatrixJet ja = analytic.jet({0, 0}, 0.0, p, 1);
    for (int k = 0; k < 2; ++k)
        CHECK(frobenius(jf.dp[k] - ja.dp[k]) <= 1e-6);
}

TEST_CASE("analytic vs finite-difference jets at random samples") {
    MatrixField analytic = make_conformal_A();
    MatrixField fd([](const Vec2&, double, const Vec2& p) {
        return 0.5 * norm2(p) * Sym2::identity() - Sym2::outer(p);
    });
    std::mt19937 rng(3);
    for (int k = 0; k < 100; ++k) {
        Vec2 x = random_vec(rng, -1, 1);
        Vec2 p = random_vec(rng, -3, 3);
        double z = std::uniform_real_distribution<double>(-1, 1)(rng);
        MatrixJet ja = analytic.jet(x, z, p, 2);
        MatrixJet jf = fd.jet(x, z, p, 2);
        double scale1 = 1.0 + norm(p);
        for (int i = 0; i < 2; ++i)
            CHECK(frobenius(ja.dp[i] - jf.dp[i]) / scale1 <= 1e-6);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                CHECK(frobenius(ja.dpp[i][j] - jf.dpp[i][j]) / scale1 <= 1e-4);
    }
}

TEST_CASE("constant scalar field has zero jets") {
    ScalarField b = ScalarField::constant(1.0, true);
    ScalarJet j = b.jet({0.5, -0.2}, 0.3, {1, 2});
    CHECK(j.value == 1.0);
    CHECK(j.dz == 0.0);
    CHECK(norm(j.dx) == 0.0);
    CHECK(norm(j.dp) == 0.0);
}

TEST_CASE("positive-flagged field rejects nonpositive values") {
    ScalarField b([](const Vec2&, double z, const Vec2&) { return z; }, true);
    CHECK(b({0, 0}, 2.0, {0, 0}) == 2.0);
    CHECK_THROWS_AS(b({0, 0}, -1.0, {0, 0}), NonpositiveB);
}

TEST_CASE("neumann boundary operator") {
    Domain d = Domain::disk({0, 0}, 1.0);
    BoundaryOperator g = make_neumann_G(d, [](const Vec2&, double z) { return z; });
    BoundaryPoint bp = d.normal_and_curvature({1, 0});
    BoundaryJet j = g.jet(bp, 0.7, {2, 1});
    CHECK(j.dz == doctest::Approx(-1.0).epsilon(1e-9));
    CHECK(norm(j.dp - bp.normal) <= 1e-12);
    CHECK(frobenius(j.dpp) <= 1e-12);
    CHECK(dot(j.dp, bp.normal) == doctest::Approx(1.0));

    // phi == -1, p = (1,0) at (1,0): G = -1 - (-1) = 0
    BoundaryOperator g2 = make_neumann_G(d, [](const Vec2&, double) { return -1.0; });
    CHECK(g2(bp, 0.0, {1, 0}) == doctest::Approx(0.0));

    // phi(x,z) = z - 3/2, z = 1/2, p.nu = -1 -> G = 0
    BoundaryOperator g3 = make_neumann_G(d, [](const Vec2&, double z) { return z - 1.5; });
    CHECK(g3(bp, 0.5, -1.0 * bp.normal) == doctest::Approx(0.0));
}

TEST_CASE("OT generator: dot-product cost") {
    CostFunction c = CostFunction::dot_product();
    MatrixField A = make_ot_A(c);
    std::mt19937 rng(5);
    for (int k = 0; k < 20; ++k) {
        Vec2 x = random_vec(rng, -1, 1), p = random_vec(rng, -4, 4);
        CHECK(norm(ot_map_Y(c, x, p) - p) <= 1e-14);
        CHECK(frobenius(A(x, 0.0, p)) <= 1e-14);
        CHECK(ot_bfactor(c, x, p) == doctest::Approx(1.0));
    }
}

TEST_CASE("OT generator: quadratic cost") {
    CostFunction c = CostFunction::neg_half_sqdist();
    MatrixField A = make_ot_A(c);
    std::mt19937 rng(6);
    for (int k = 0; k < 20; ++k) {
        Vec2 x = random_vec(rng, -1, 1), p = random_vec(rng, -4, 4);
        CHECK(norm(ot_map_Y(c, x, p) - (x + p)) <= 1e-12);
        CHECK(frobenius(A(x, 0.0, p) + Sym2::identity()) <= 1e-10);
    }
}

TEST_CASE("OT inversion failure modes") {
    // c_x(x, y) = y^3 componentwise: bounded inverse exists but the mixed
    // Hessian is singular at y = 0.
    CostFunction c;
    c.c = [](const Vec2&, const Vec2&) { return 0.0; };
    c.c_x = [](const Vec2&, const Vec2& y) {
        return Vec2{y.x * y.x * y.x, y.y * y.y * y.y};
    };
    c.c_xx = [](const Vec2&, const Vec2&) { return Sym2{}; };
    c.c_xy = [](const Vec2&, const Vec2& y) {
        return Mat2{3 * y.x * y.x, 0, 0, 3 * y.y * y.y};
    };
    CHECK_THROWS_AS(ot_map_Y(c, {-1, -1}, {1, 1}), SingularMixedHessian);
}
