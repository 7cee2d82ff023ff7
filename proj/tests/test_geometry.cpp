#include "doctest.h"

#include "qsep/geometry.hpp"

using namespace qsep;

namespace {

NumericLax lax_w2_minus_z3() {
    // l(z) = [[0, 1], [z^3, 0]], so det(wI + l) = w^2 - z^3
    NumericLax lax;
    lax.N = 2;
    lax.n = 3;
    lax.coef.assign(4, std::vector<std::vector<mpq_class>>(2, std::vector<mpq_class>(2, 0)));
    lax.coef[0][0][1] = 1;
    lax.coef[3][1][0] = 1;
    return lax;
}

}  // namespace

TEST_CASE("genus and index map agree with the Newton polygon interior") {
    for (int N = 2; N <= 6; ++N)
        for (int n = 1; n <= 5; ++n) {
            std::vector<IndexEntry> expect;
            int i = 0;
            // interior points (w^{k-1}... ) ordered by k, then l
            for (int k = 1; k < N; ++k)
                for (int l = 1; l <= k * n - 1; ++l) expect.push_back({++i, k, l});
            auto got = index_map(N, n);
            REQUIRE(got.size() == expect.size());
            CHECK(genus(N, n) == static_cast<long>(expect.size()));
            for (size_t t = 0; t < got.size(); ++t) {
                CHECK(got[t].i == expect[t].i);
                CHECK(got[t].k == expect[t].k);
                CHECK(got[t].l == expect[t].l);
            }
        }
    auto m = index_map(3, 2);
    REQUIRE(m.size() == 4);
    CHECK(m[0].k == 1);
    CHECK(m[1].k == 2);
    CHECK(m[1].l == 1);
    CHECK(m[3].l == 3);
}

TEST_CASE("divisor determinant at genus 2 is a Vandermonde") {
    auto table = index_map(2, 3);
    REQUIRE(table.size() == 2);
    mpq_class z1(2, 3), z2(-5, 7);
    CHECK(divisor_matrix_det(table, {{z1, 1}, {z2, 4}}) == z2 - z1);
    // alternating
    CHECK(divisor_matrix_det(table, {{z2, 4}, {z1, 1}}) == z1 - z2);
}

TEST_CASE("divisor determinant is alternating at higher genus") {
    NumericLax lax;
    std::mt19937_64 rng(5);
    lax = random_lax(3, 2, rng, false);
    CurveData c = curve_from_lax(lax);
    REQUIRE(c.g == 4);
    std::vector<std::pair<mpq_class, mpq_class>> pts{{1, 2}, {mpq_class(1, 2), 3}, {-2, 5}, {3, mpq_class(-1, 3)}};
    mpq_class d = divisor_matrix_det(c.index_table, pts);
    CHECK(d != 0);
    std::swap(pts[0], pts[2]);
    CHECK(divisor_matrix_det(c.index_table, pts) == -d);
    pts[1] = pts[0];
    CHECK(divisor_matrix_det(c.index_table, pts) == 0);
}

TEST_CASE("holomorphic differentials: errors at branch points and off the curve") {
    CurveData c = curve_from_lax(lax_w2_minus_z3());
    CHECK(c.g == 2);
    CHECK(c.r(mpq_class(1), mpq_class(1)) == 0);
    cplx v = holomorphic_differential(c, 1, make_point(c, 1.0, 1.0));
    CHECK(std::abs(v - cplx(0.5, 0)) < 1e-12);
    // at z = 4: w = 8, dr/dw = 16, f_2 = z
    cplx v2 = holomorphic_differential(c, 2, make_point(c, 4.0, 8.0));
    CHECK(std::abs(v2 - cplx(0.25, 0)) < 1e-12);
    CHECK_THROWS_AS(holomorphic_differential(c, 1, make_point(c, 0.0, 0.0)), GeometryError);
    CHECK_THROWS_AS(holomorphic_differential(c, 1, make_point(c, 1.0, 2.0)), GeometryError);
}

TEST_CASE("roots of the spectral polynomial") {
    CurveData c = curve_from_lax(lax_w2_minus_z3());
    auto roots = c.w_roots(4.0);
    REQUIRE(roots.size() == 2);
    for (auto w : roots) CHECK(std::abs(c.r(w, cplx(4.0))) < 1e-9);
}

TEST_CASE("coinciding divisor points are rejected") {
    CurveData c = curve_from_lax(lax_w2_minus_z3());
    auto p = make_point(c, 1.0, 1.0);
    CHECK_THROWS(divisor_determinant(c, {p, p}));
    CHECK(std::abs(divisor_determinant(c, {p, make_point(c, 4.0, 8.0)}) - cplx(3, 0)) < 1e-12);
}

TEST_CASE("separated variables satisfy the Weyl-type relations") {
    ExpFunction G = ExpFunction::exponential({mpq_class(1, 3), -1}, {0, 1});
    for (auto& id : check_separated_identities(G)) CHECK_MESSAGE(id.holds, id.name << " " << id.residual);
    // w z = q^2 z w directly
    auto lhs = apply_word({{SepOp::w, 0}, {SepOp::z, 0}}, G);
    auto rhs = apply_word({{SepOp::z, 0}, {SepOp::w, 0}}, G).times_phase(2, 0, 0);
    CHECK(lhs == rhs);
    // W_j Z_j picks up e^{2 pi i} = 1 only together with the pi^2/gamma phase
    CHECK_FALSE(apply_word({{SepOp::W, 0}, {SepOp::Z, 0}}, G) == apply_word({{SepOp::Z, 0}, {SepOp::W, 0}}, G));
}

TEST_CASE("operators act as described on numeric samples") {
    ExpFunction G = ExpFunction::exponential({mpq_class(1, 2), 2}, {1, 0});
    double gamma = 0.7;
    std::vector<cplx> zeta{cplx(0.3, 0.1), cplx(-0.2, 0.4)};
    cplx base = G.eval(zeta, gamma);
    CHECK(std::abs(apply_op(SepOp::z, 0, G).eval(zeta, gamma) - std::exp(2.0 * zeta[0]) * base) < 1e-9);
    auto shifted = zeta;
    shifted[1] += cplx(0, gamma);
    CHECK(std::abs(apply_op(SepOp::w, 1, G).eval(zeta, gamma) - G.eval(shifted, gamma)) < 1e-9);
    shifted = zeta;
    shifted[0] += cplx(0, M_PI);
    CHECK(std::abs(apply_op(SepOp::W, 0, G).eval(zeta, gamma) - G.eval(shifted, gamma)) < 1e-9);
    CHECK(std::abs(apply_op(SepOp::Z, 1, G).eval(zeta, gamma) - std::exp(2 * M_PI * zeta[1] / gamma) * base) < 1e-9);
}

TEST_CASE("measure kernel at genus 2 matches the hand expansion") {
    auto table = index_map(2, 3);
    ExpFunction G = ExpFunction::exponential({mpq_class(1, 4), mpq_class(-1, 2)}, {0, 0});
    // (z2 - z1)(Z2 - Z1) G
    auto zz = [&](int a, int b) { return apply_word({{SepOp::z, a}, {SepOp::Z, b}}, G); };
    ExpFunction hand = zz(1, 1) - zz(1, 0) - zz(0, 1) + zz(0, 0);
    CHECK(measure_kernel_apply(table, G) == hand);
    CHECK_FALSE(hand.is_zero());
}

TEST_CASE("measure kernel with shift entries, genus 3") {
    // f = w, w^2, w^2 z
    auto table = index_map(4, 1);
    REQUIRE(table.size() == 3);
    ExpFunction G = ExpFunction::exponential({1, 0, mpq_class(1, 3)}, {0, 1, 0});
    ExpFunction K = measure_kernel_apply(table, G);
    CHECK_FALSE(K.is_zero());
    std::vector<std::vector<cplx>> grid{{cplx(0.1, 0.2), cplx(0.3, -0.1), cplx(-0.2, 0.05)}};
    auto s = measure_kernel_sample(table, G, 0.7, grid);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0] - K.eval(grid[0], 0.7)) < 1e-6 * (1 + std::abs(s[0])));
    CHECK_THROWS_AS(measure_kernel_apply(index_map(3, 2), ExpFunction::exponential({0, 0, 0, 0})), BudgetError);
}
