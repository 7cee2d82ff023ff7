#pragma once

#include <gmpxx.h>

#include <complex>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qsep/classical.hpp"

namespace qsep {

using cplx = std::complex<double>;

struct IndexEntry {
    int i = 0, k = 0, l = 0;
};

long genus(int N, int n);
// i -> (k, l) for i = 1..g, k found by scanning the defining inequality
std::vector<IndexEntry> index_map(int N, int n);

struct CurveData {
    int N = 0, n = 0;
    // t[k][p]: coefficient of z^p in t_k(z), k = 0..N (t_0 = 1)
    std::vector<std::vector<mpq_class>> t;
    long g = 0;
    std::vector<IndexEntry> index_table;

    // r(w,z) = det(wI + l(z)) = sum_k w^{N-k} t_k(z)
    cplx r(cplx w, cplx z) const;
    cplx dr_dw(cplx w, cplx z) const;
    mpq_class r(const mpq_class& w, const mpq_class& z) const;
    // all N roots w of r(w, z) = 0
    std::vector<cplx> w_roots(cplx z) const;
};

CurveData curve_from_lax(const NumericLax& lax);

struct DivisorPoint {
    cplx z, w;
    double on_curve_residual = 0;
};

DivisorPoint make_point(const CurveData& c, cplx z, cplx w);

// f_i(z,w) = w^{k-1} z^{l-1}
cplx f_value(const IndexEntry& e, cplx z, cplx w);
mpq_class f_value(const IndexEntry& e, const mpq_class& z, const mpq_class& w);

class GeometryError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// f_i / dr/dw at p; throws GeometryError at branch points or off the curve
cplx holomorphic_differential(const CurveData& c, int i, const DivisorPoint& p, double tol = 1e-9);

// det(f_i(z_j, w_j)), i, j = 1..g; coinciding points are rejected
cplx divisor_determinant(const CurveData& c, const std::vector<DivisorPoint>& pts, double tol = 1e-12);
mpq_class divisor_determinant_exact(const CurveData& c, const std::vector<std::pair<mpq_class, mpq_class>>& pts);
// same determinant without the coincidence guard
mpq_class divisor_matrix_det(const std::vector<IndexEntry>& table, const std::vector<std::pair<mpq_class, mpq_class>>& pts);

// ---------------------------------------------------------------------------
// Separated variables acting on exponential test functions
//   G(zeta) = sum c * exp(i*phase) * exp(sum_j a_j zeta_j)
// with a_j = alpha_j + beta_j * pi/gamma and
//   phase = cg*gamma + cp*pi + cpp*pi^2/gamma   (cp taken mod 2).
// gamma is kept generic, so distinct (exponent, phase) keys are independent.

struct ExpKey {
    std::vector<mpq_class> alpha, beta;
    mpq_class cg, cp, cpp;
    bool operator<(const ExpKey& o) const;
};

class ExpFunction {
public:
    explicit ExpFunction(int g = 0) : g_(g) {}
    static ExpFunction exponential(const std::vector<mpq_class>& alpha, const std::vector<mpq_class>& beta = {});

    int vars() const { return g_; }
    const std::map<ExpKey, mpq_class>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    void add(ExpKey k, const mpq_class& c);

    ExpFunction operator+(const ExpFunction& o) const;
    ExpFunction operator-(const ExpFunction& o) const;
    ExpFunction times_phase(const mpq_class& cg, const mpq_class& cp, const mpq_class& cpp) const;
    ExpFunction scaled(const mpq_class& c) const;
    bool operator==(const ExpFunction& o) const { return (*this - o).is_zero(); }

    cplx eval(const std::vector<cplx>& zeta, double gamma) const;
    std::string str() const;

private:
    int g_;
    std::map<ExpKey, mpq_class> t_;
};

enum class SepOp { z, w, Z, W };
std::string sep_op_name(SepOp op);

// z_j: multiply by e^{2 zeta_j}; w_j: shift zeta_j by i*gamma;
// Z_j: multiply by e^{2 pi zeta_j / gamma}; W_j: shift zeta_j by i*pi
ExpFunction apply_op(SepOp op, int j, const ExpFunction& G);
// word applied right to left, as written: ops[0] is applied last
ExpFunction apply_word(const std::vector<std::pair<SepOp, int>>& ops, const ExpFunction& G);

struct SepIdentity {
    std::string name;
    bool holds = false;
    std::string residual;
};
// w z - q^2 z w, W z - z W, w Z - Z w on G for every j
std::vector<SepIdentity> check_separated_identities(const ExpFunction& G);

// sum over sigma, tau of sgn(sigma) sgn(tau) prod_j f_{sigma(j)}(z_j,w_j) f_{tau(j)}(Z_j,W_j),
// each entry applying the shift power before the multiplier power
ExpFunction measure_kernel_apply(const std::vector<IndexEntry>& table, const ExpFunction& G);
std::vector<cplx> measure_kernel_sample(const std::vector<IndexEntry>& table, const ExpFunction& G, double gamma,
                                        const std::vector<std::vector<cplx>>& grid);

}  // namespace qsep
