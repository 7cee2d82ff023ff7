#include "doctest.h"

#include "qsep/classical.hpp"

using namespace qsep;

namespace {

// det of an mpq matrix by elimination
mpq_class det(std::vector<std::vector<mpq_class>> a) {
    size_t n = a.size();
    mpq_class d = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && a[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(a[p], a[c]);
            d = -d;
        }
        d *= a[c][c];
        for (size_t r = c + 1; r < n; ++r) {
            mpq_class f = a[r][c] / a[c][c];
            for (size_t j = c; j < n; ++j) a[r][j] -= f * a[c][j];
        }
    }
    return d;
}

// det(w I + sum_a coef[a] z^a)
mpq_class char_value(const std::vector<std::vector<std::vector<mpq_class>>>& coef, int N, const mpq_class& z,
                     const mpq_class& w) {
    std::vector<std::vector<mpq_class>> a(N, std::vector<mpq_class>(N, 0));
    mpq_class zp = 1;
    for (auto& c : coef) {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) a[i][j] += c[i][j] * zp;
        zp *= z;
    }
    for (int i = 0; i < N; ++i) a[i][i] += w;
    return det(a);
}

}  // namespace

TEST_CASE("hand-computed bracket at (2,1)") {
    ClassicalModel m = build_bracket_table(2, 1);
    CPoly a = m.gen_poly(0, 1, 1), b = m.gen_poly(0, 1, 2);
    // {l^{(0)}_11, l^{(0)}_12} = -1/2 l^{(0)}_11 l^{(0)}_12
    CHECK(poisson_bracket(a, b, m) == (a * b) * CPoly(m.vars, ScalarQ(mpq_class(-1, 2))));
    CHECK(poisson_bracket(b, a, m) == (a * b) * CPoly(m.vars, ScalarQ(mpq_class(1, 2))));
    // shape: no z^1 term upper, no z^0 term lower
    CHECK_FALSE(m.has(1, 1, 2));
    CHECK_FALSE(m.has(0, 2, 1));
    CHECK(m.has(1, 2, 1));
}

TEST_CASE("bracket table satisfies the defining identity, antisymmetry and Jacobi") {
    for (auto [N, n] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
        ClassicalModel m = build_bracket_table(N, n);
        CHECK(check_definition(m).pass());
        BracketCheck j = check_antisymmetry_jacobi(m);
        CHECK(j.checked > 0);
        CHECK(j.pass());
    }
}

TEST_CASE("spectral invariants are in involution") {
    for (auto [N, n] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}, {3, 2}}) {
        ClassicalModel m = build_bracket_table(N, n);
        BracketCheck c = check_involution(m);
        CHECK(c.checked > 0);
        CHECK(c.pass());
    }
}

TEST_CASE("center: determinant coefficients and diagonal products are Casimirs") {
    for (auto [N, n] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
        ClassicalModel m = build_bracket_table(N, n);
        CenterReport r = check_center(m);
        CHECK(r.det_coefficients.pass());
        CHECK(r.diagonal_products.pass());
        CHECK(r.noncentral_witness);
        // constant terms t_k(0) for k < N do not Poisson-commute with everything
        CHECK_FALSE(r.constant_terms.pass());
    }
}

TEST_CASE("dimension counts agree with direct enumeration") {
    for (int N = 2; N <= 6; ++N)
        for (int n = 1; n <= 6; ++n) {
            DimensionReport r = dimension_report(N, n);
            long gens = 0;
            for (int a = 0; a <= n; ++a)
                for (int i = 1; i <= N; ++i)
                    for (int j = 1; j <= N; ++j) {
                        bool in = i == j || (i < j && a < n) || (i > j && a > 0);
                        gens += in;
                    }
            // interior lattice points of the Newton polygon of det(wI + l(z))
            long interior = 0;
            for (int p = 1; p < N; ++p)
                for (int j = 1; j < (N - p) * n; ++j) ++interior;
            long coeffs = 0;
            for (int k = 1; k <= N; ++k)
                for (int j = 0; j <= k * n; ++j) ++coeffs;
            CHECK(r.generators == gens);
            CHECK(r.genus == interior);
            CHECK(r.dim_M == gens - r.central);
            CHECK(r.invariants == coeffs - r.central);
            CHECK(r.identity_ok);
            CHECK(r.half_ok);
            CHECK(r.count_ok);
        }
}

TEST_CASE("classical reduction: exact samples satisfy the structure and keep the spectrum") {
    for (auto [N, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 1}, {3, 2}}) {
        std::mt19937_64 rng(7 + N * 10 + n);
        int done = 0, singular = 0;
        while (done < 100) {
            NumericLax lax = random_lax(N, n, rng);
            ReduceResult r = classical_reduce(lax);
            if (r.singular) {
                REQUIRE(++singular < 100);
                continue;
            }
            ++done;
            CHECK(r.ok);
            CHECK(r.violations.empty());
            // the spectral curve is unchanged
            for (auto [z, w] : std::vector<std::pair<int, int>>{{2, 3}, {-1, 5}, {3, -2}})
                CHECK(char_value(r.m, N, z, w) == char_value(lax.coef, N, z, w));
        }
    }
}

TEST_CASE("batch and floating-point backend") {
    ReduceBatch b = classical_reduce_batch(3, 1, 100, 11);
    CHECK(b.violations == 0);
    CHECK(b.samples == 100);
    std::mt19937_64 rng(3);
    for (int k = 0; k < 20; ++k) {
        NumericLax lax = random_lax(2, 2, rng);
        ReduceResult e = classical_reduce(lax), f = classical_reduce_float(lax);
        CHECK(e.ok == f.ok);
        CHECK(e.singular == f.singular);
    }
}

TEST_CASE("quantum relations reduce to the bracket at first order") {
    for (auto [N, n] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {3, 1}}) {
        BridgeReport b = classical_limit_bridge(N, n);
        CHECK(b.pass);
        CHECK(b.kappa == -2);
        CHECK(b.relations > 0);
        CHECK(b.common_pairs > 0);
        CHECK(b.common_mismatch == 0);
    }
}
