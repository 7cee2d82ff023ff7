#pragma once

#include "qsep/rtt.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qsep {

// Generators l^{(a)}_{ij} = coefficient of z^a in l_ij(z).  Shape: diagonal
// entries have z^0..z^n, strictly upper z^0..z^{n-1}, strictly lower z^1..z^n.
struct ClassicalGen {
    int a, i, j;  // 1-based i, j
};

// Classical: the shape above.  Quantum: all entries for a < n plus a
// lower-triangular leading coefficient (the alphabet of the quantum model,
// with l^{(n)}_{11} kept).
enum class LaxShape { Classical, Quantum };

struct ClassicalModel {
    int N = 0, n = 0;
    LaxShape shape = LaxShape::Classical;
    std::vector<ClassicalGen> gens;
    std::shared_ptr<const VarList> vars;  // "l{a}_{i}{j}" per generator
    std::map<std::pair<int, int>, CPoly> table;  // {g, h} for g < h (generator indices)
    bool has(int a, int i, int j) const;
    int index(int a, int i, int j) const;  // -1 if structurally absent
    CPoly gen_poly(int a, int i, int j) const;  // zero when absent
    CPoly bracket_gen(int g, int h) const;
};

// Brackets from (z - z'){l(z) (x), l(z')} = [(z - z') r(z,z'), l(z) (x) l(z')].
ClassicalModel build_bracket_table(int N, int n, LaxShape shape = LaxShape::Classical);

CPoly poisson_bracket(const CPoly& f, const CPoly& g, const ClassicalModel& m);

// t_k^{(j)}: det(wI + l(z)) = sum_k w^{N-k} t_k(z), t_k(z) = sum_j t_k^{(j)} z^{nk-j}.
std::map<std::pair<int, int>, CPoly> char_coefficients(const ClassicalModel& m);

struct BracketCheck {
    std::string name;
    size_t checked = 0, failures = 0;
    std::vector<std::string> failing;  // first few
    bool pass() const { return failures == 0; }
};

BracketCheck check_antisymmetry_jacobi(const ClassicalModel& m, size_t max_triples = 0);
BracketCheck check_involution(const ClassicalModel& m);
// {t_N^{(j)}, l} = 0 and {t_k(0), l} = 0 for all generators, plus the
// sanity probe that t_1^{(1)} is not central (reported in `failing` when it is).
struct CenterReport {
    // t_N^{(j)} for all j and t_k^{(kn)} = t_k(0) for all k
    BracketCheck central;
    // split of the above: t_N^{(j)} alone, and t_k(0) for k < N
    BracketCheck det_coefficients, constant_terms;
    // l^{(0)}_{ii} l^{(n)}_{ii}, which do Poisson-commute with everything
    BracketCheck diagonal_products;
    bool noncentral_witness = false;
    std::string witness;
};
CenterReport check_center(const ClassicalModel& m);
// Replays every table entry through the defining identity.
BracketCheck check_definition(const ClassicalModel& m);

struct DimensionReport {
    int N, n;
    long dim_M, genus, two_g_plus, invariants, generators, central;
    bool identity_ok, half_ok, count_ok;
};
DimensionReport dimension_report(int N, int n);

// Exact rational Lax sample with the classical shape.  impose_reduced sets
// l^{(n)}_{11} = 0 and solves for nu_1 so that (nu p(mu))_1 = 0, p(x) = prod_{i>=2}(x - mu_ii).
struct NumericLax {
    int N = 0, n = 0;
    std::vector<std::vector<std::vector<mpq_class>>> coef;  // coef[a][i][j], 0-based
};
NumericLax random_lax(int N, int n, std::mt19937_64& rng, bool impose_reduced = true, int range = 9);

struct ReduceResult {
    bool ok = false;
    bool singular = false;
    std::vector<std::string> violations;
    std::vector<std::vector<mpq_class>> d0;
    std::vector<std::vector<std::vector<mpq_class>>> m;  // m[a][i][j]
};
ReduceResult classical_reduce(const NumericLax& lax);
ReduceResult classical_reduce_float(const NumericLax& lax, double tol = 1e-9);

struct ReduceBatch {
    int N, n, samples, violations, singular;
    std::uint64_t seed;
};
ReduceBatch classical_reduce_batch(int N, int n, int samples, std::uint64_t seed, bool impose_reduced = true);

// Quantum RTT relations expanded to first order at q = e^{i gamma}:
// d/dq (commutative image) + kappa/2 sum c_w(1) {w1, w2} = 0, with
// l^{(n)}_{11} = 0 imposed on the classical side.
struct BridgeReport {
    bool pass = false;
    mpq_class kappa;
    size_t relations = 0, failures = 0;
    std::string first_failure;
    // brackets of generators common to both shapes agree (others set to 0)
    size_t common_pairs = 0, common_mismatch = 0;
};
BridgeReport classical_limit_bridge(int N, int n);

}  // namespace qsep
