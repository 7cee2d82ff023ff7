#include "doctest.h"

#include "qsep/rmatrix.hpp"

using namespace qsep;

namespace {

// Numeric oracle: R matrices over Q at s = 3/2 (q = 9/4), built from the
// defining formula with plain nested vectors.
using Mat = std::vector<std::vector<mpq_class>>;

Mat zeros(int n) { return Mat(n, std::vector<mpq_class>(n, 0)); }

Mat mul(const Mat& a, const Mat& b) {
    int n = static_cast<int>(a.size());
    Mat r = zeros(n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a[i][k] != 0)
                for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Mat kron(const Mat& a, const Mat& b) {
    int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    Mat r = zeros(na * nb);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < na; ++j)
            for (int k = 0; k < nb; ++k)
                for (int l = 0; l < nb; ++l) r[i * nb + k][j * nb + l] = a[i][j] * b[k][l];
    return r;
}

Mat inverse(Mat a) {
    int n = static_cast<int>(a.size());
    Mat inv = zeros(n);
    for (int i = 0; i < n; ++i) inv[i][i] = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (a[p][c] == 0) ++p;
        std::swap(a[p], a[c]);
        std::swap(inv[p], inv[c]);
        mpq_class d = a[c][c];
        for (int j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c] == 0) continue;
            mpq_class f = a[r][c];
            for (int j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

Mat R12_numeric(int N, const mpq_class& q, bool literal) {
    Mat R = zeros(N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            int d = i * N + j;
            if (literal) {
                // sum_j q^{E^jj} (x) q^{E^jj}
                mpq_class v = 0;
                for (int t = 0; t < N; ++t) v += (i == t ? q : 1) * (j == t ? q : 1);
                R[d][d] = v;
            } else {
                R[d][d] = i == j ? q : 1;
            }
            if (j > i) R[j * N + i][i * N + j] += q - 1 / q;
        }
    return R;
}

Mat perm(int N) {
    Mat P = zeros(N * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) P[i * N + j][j * N + i] = 1;
    return P;
}

bool numeric_ybe(int N, bool literal) {
    mpq_class q(9, 4);
    Mat R = R12_numeric(N, q, literal);
    Mat P = perm(N);
    Mat R21inv = inverse(mul(mul(P, R), P));
    auto Rz = [&](const mpq_class& a, const mpq_class& b) {
        Mat r = zeros(N * N);
        for (int i = 0; i < N * N; ++i)
            for (int j = 0; j < N * N; ++j) r[i][j] = a * R[i][j] - b * R21inv[i][j];
        return r;
    };
    Mat I = zeros(N);
    for (int i = 0; i < N; ++i) I[i][i] = 1;
    Mat P23 = kron(I, P);
    mpq_class z1(2, 3), z2(-5, 7), z3(11, 4);
    Mat A = kron(Rz(z1, z2), I), C = kron(I, Rz(z2, z3));
    Mat B = mul(mul(P23, kron(Rz(z1, z3), I)), P23);
    return mul(mul(A, B), C) == mul(mul(C, B), A);
}

}  // namespace

TEST_CASE("Yang-Baxter for the interpreted reading, N = 2, 3, 4") {
    for (int N = 2; N <= 4; ++N) {
        YbeReport y = check_ybe(N, RReading::Interpreted);
        CHECK_MESSAGE(y.pass, "N=" << N << " " << y.first_offending);
        CHECK(numeric_ybe(N, false));
    }
}

TEST_CASE("literal reading agrees with the numeric oracle") {
    for (int N = 2; N <= 3; ++N) CHECK(check_ybe(N, RReading::Literal).pass == numeric_ybe(N, true));
}

TEST_CASE("constant R entries at N = 2") {
    CMatrix R = constant_R(2, RReading::Interpreted);
    ScalarQ q = ScalarQ::q();
    CHECK(R(0, 0).constant_term() == q);
    CHECK(R(1, 1).constant_term() == ScalarQ(1));
    CHECK(R(3, 3).constant_term() == q);
    // E^{21} (x) E^{12}: row (2,1), column (1,2)
    CHECK(R(2, 1).constant_term() == q - ScalarQ::qinv());
    CHECK(R(1, 2).is_zero());
}

TEST_CASE("classical limit gives c = 2i") {
    for (int N = 2; N <= 3; ++N) {
        ClassicalLimitReport c = classical_limit_check(N);
        CHECK_MESSAGE(c.pass, c.residual);
        CHECK(c.c_imag == 2);
    }
}

TEST_CASE("projector and inverse formulas, N = 2..5") {
    for (int N = 2; N <= 5; ++N) {
        ProjectorReport p = check_projector_inverse(N);
        CHECK(p.projector);
        CHECK(p.inverse);
        CHECK(p.inverse_left);
    }
}

TEST_CASE("flip21 is an involution and swaps kron factors") {
    auto v = spectral_vars(2);
    CMatrix a = unit_matrix(2, 1, 2, v), b = unit_matrix(2, 2, 2, v);
    CMatrix ab = kron(a, b, SpaceTag::Tensor2), ba = kron(b, a, SpaceTag::Tensor2);
    CHECK(flip21(ab) == ba);
    CHECK(flip21(flip21(ab)) == ab);
}
