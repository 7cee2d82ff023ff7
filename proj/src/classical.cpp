#include "qsep/classical.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace qsep {

static std::string gname(int a, int i, int j) {
    return "l" + std::to_string(a) + "_" + std::to_string(i) + std::to_string(j);
}

static bool in_shape(LaxShape shape, int n, int a, int i, int j) {
    if (a < 0 || a > n) return false;
    if (shape == LaxShape::Quantum) return a < n || i >= j;
    if (i == j) return true;
    if (i < j) return a <= n - 1;
    return a >= 1;
}

bool ClassicalModel::has(int a, int i, int j) const { return index(a, i, j) >= 0; }

int ClassicalModel::index(int a, int i, int j) const {
    if (!in_shape(shape, n, a, i, j)) return -1;
    int k = vars->index_of(gname(a, i, j));
    return k < 0 ? -1 : k - 3;
}

CPoly ClassicalModel::gen_poly(int a, int i, int j) const {
    int k = index(a, i, j);
    return k < 0 ? CPoly(vars) : CPoly::var(vars, static_cast<size_t>(k + 3));
}

CPoly ClassicalModel::bracket_gen(int g, int h) const {
    auto it = table.find({g, h});
    return it == table.end() ? CPoly(vars) : it->second;
}

static CPoly cdet(const std::vector<std::vector<CPoly>>& a, const CPoly& zero) {
    size_t n = a.size();
    if (n == 1) return a[0][0];
    CPoly r = zero;
    for (size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        std::vector<std::vector<CPoly>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<CPoly> row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[i][j]);
            minor.push_back(std::move(row));
        }
        CPoly t = a[0][c] * cdet(minor, zero);
        r = c % 2 ? r - t : r + t;
    }
    return r;
}

// l(z) with entries over the model variables, in spectral variable `zv`
static std::vector<std::vector<CPoly>> lax_matrix(const ClassicalModel& m, const std::string& zv) {
    std::vector<std::vector<CPoly>> l(m.N, std::vector<CPoly>(m.N, CPoly(m.vars)));
    for (int i = 1; i <= m.N; ++i)
        for (int j = 1; j <= m.N; ++j)
            for (int a = 0; a <= m.n; ++a)
                if (m.has(a, i, j)) l[i - 1][j - 1] += m.gen_poly(a, i, j) * CPoly::var(m.vars, zv, a);
    return l;
}

// [(z - z') r, l(z) (x) l(z')] as a Tensor2 matrix
static CMatrix commutator_rhs(const ClassicalModel& m) {
    const int N = m.N, NN = N * N;
    CMatrix num = classical_r(N).numerator.rebased(m.vars);
    auto lz = lax_matrix(m, "z"), lzp = lax_matrix(m, "zp");
    CMatrix LL(NN, NN, m.vars, SpaceTag::Tensor2, N);
    for (int p = 0; p < N; ++p)
        for (int r = 0; r < N; ++r)
            for (int s = 0; s < N; ++s)
                for (int t = 0; t < N; ++t) LL(p * N + r, s * N + t) = lz[p][s] * lzp[r][t];
    return num * LL - LL * num;
}

ClassicalModel build_bracket_table(int N, int n, LaxShape shape) {
    if (N < 2 || n < 1) throw std::invalid_argument("build_bracket_table: need N >= 2, n >= 1");
    ClassicalModel m;
    m.N = N;
    m.n = n;
    m.shape = shape;
    std::vector<std::string> names{"z", "zp", "w"};
    for (int a = 0; a <= n; ++a)
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j)
                if (in_shape(shape, n, a, i, j)) {
                    m.gens.push_back({a, i, j});
                    names.push_back(gname(a, i, j));
                }
    m.vars = make_vars(names);
    CMatrix rhs = commutator_rhs(m);
    CPoly zz = CPoly::var(m.vars, "z") - CPoly::var(m.vars, "zp");
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            for (int k = 1; k <= N; ++k)
                for (int l = 1; l <= N; ++l) {
                    const CPoly& e = rhs((i - 1) * N + (k - 1), (j - 1) * N + (l - 1));
                    if (e.is_zero()) continue;
                    CPoly quo;
                    if (!zz.divides_into(e, &quo))
                        throw std::logic_error("bracket system inconsistent: entry not divisible by z - z'");
                    for (auto& [ex, c] : quo.terms()) {
                        int a = ex[0], b = ex[1];
                        int g = m.index(a, i, j), h = m.index(b, k, l);
                        if (g < 0 || h < 0)
                            throw std::logic_error("bracket system inconsistent: term outside the Lax shape at " +
                                                   gname(a, i, j) + ", " + gname(b, k, l));
                        Exponents rest = ex;
                        rest[0] = rest[1] = 0;
                        auto& slot = m.table[{g, h}];
                        if (slot.vars() == nullptr) slot = CPoly(m.vars);
                        slot.add_term(rest, c);
                    }
                }
    for (auto it = m.table.begin(); it != m.table.end();) {
        if (it->second.is_zero()) it = m.table.erase(it);
        else ++it;
    }
    return m;
}

CPoly poisson_bracket(const CPoly& f, const CPoly& g, const ClassicalModel& m) {
    CPoly r(m.vars);
    if (f.is_zero() || g.is_zero()) return r;
    const size_t G = m.gens.size();
    std::vector<CPoly> df(G), dg(G);
    std::vector<bool> hf(G), hg(G);
    for (size_t k = 0; k < G; ++k) {
        if (f.degree_in(k + 3) > 0) {
            df[k] = f.derivative(k + 3);
            hf[k] = true;
        }
        if (g.degree_in(k + 3) > 0) {
            dg[k] = g.derivative(k + 3);
            hg[k] = true;
        }
    }
    for (auto& [gh, b] : m.table) {
        auto [x, y] = gh;
        if (hf[x] && hg[y]) r += df[x] * dg[y] * b;
    }
    return r;
}

std::map<std::pair<int, int>, CPoly> char_coefficients(const ClassicalModel& m) {
    const int N = m.N;
    auto l = lax_matrix(m, "z");
    CPoly w = CPoly::var(m.vars, "w");
    for (int i = 0; i < N; ++i) l[i][i] += w;
    CPoly det = cdet(l, CPoly(m.vars));
    size_t wi = m.vars->index_of("w"), zi = m.vars->index_of("z");
    std::map<std::pair<int, int>, CPoly> out;
    for (int k = 1; k <= N; ++k) {
        CPoly tk = det.coefficient_of(wi, N - k);
        for (int j = 0; j <= k * m.n; ++j) out[{k, j}] = tk.coefficient_of(zi, m.n * k - j);
    }
    return out;
}

static void note(BracketCheck& c, const std::string& what) {
    ++c.failures;
    if (c.failing.size() < 8) c.failing.push_back(what);
}

BracketCheck check_antisymmetry_jacobi(const ClassicalModel& m, size_t max_triples) {
    BracketCheck c{"antisymmetry+jacobi"};
    const int G = static_cast<int>(m.gens.size());
    auto gn = [&](int g) { return gname(m.gens[g].a, m.gens[g].i, m.gens[g].j); };
    for (int g = 0; g < G; ++g)
        for (int h = g; h < G; ++h) {
            ++c.checked;
            if (!(m.bracket_gen(g, h) + m.bracket_gen(h, g)).is_zero()) note(c, "antisymmetry " + gn(g) + "," + gn(h));
        }
    size_t triples = 0;
    for (int a = 0; a < G; ++a)
        for (int b = a + 1; b < G; ++b)
            for (int d = b + 1; d < G; ++d) {
                if (max_triples && triples >= max_triples) return c;
                ++triples;
                ++c.checked;
                CPoly x = m.gen_poly(m.gens[a].a, m.gens[a].i, m.gens[a].j);
                CPoly y = m.gen_poly(m.gens[b].a, m.gens[b].i, m.gens[b].j);
                CPoly z = m.gen_poly(m.gens[d].a, m.gens[d].i, m.gens[d].j);
                CPoly j = poisson_bracket(m.bracket_gen(a, b), z, m) + poisson_bracket(m.bracket_gen(b, d), x, m) +
                          poisson_bracket(m.bracket_gen(d, a), y, m);
                if (!j.is_zero()) note(c, "jacobi " + gn(a) + "," + gn(b) + "," + gn(d));
            }
    return c;
}

static std::string tlabel(int k, int j) { return "t" + std::to_string(k) + "^(" + std::to_string(j) + ")"; }

BracketCheck check_involution(const ClassicalModel& m) {
    BracketCheck c{"involution"};
    auto t = char_coefficients(m);
    std::vector<std::pair<std::pair<int, int>, CPoly>> v(t.begin(), t.end());
    for (size_t a = 0; a < v.size(); ++a)
        for (size_t b = a; b < v.size(); ++b) {
            ++c.checked;
            if (!poisson_bracket(v[a].second, v[b].second, m).is_zero())
                note(c, tlabel(v[a].first.first, v[a].first.second) + "," + tlabel(v[b].first.first, v[b].first.second));
        }
    return c;
}

CenterReport check_center(const ClassicalModel& m) {
    CenterReport rep;
    rep.central.name = "center";
    rep.det_coefficients.name = "center: t_N^(j)";
    rep.constant_terms.name = "center: t_k(0), k < N";
    rep.diagonal_products.name = "center: l0_ii * ln_ii";
    auto t = char_coefficients(m);
    auto against_all = [&](BracketCheck& c, const std::string& name, const CPoly& p) {
        for (size_t g = 0; g < m.gens.size(); ++g) {
            ++c.checked;
            CPoly x = m.gen_poly(m.gens[g].a, m.gens[g].i, m.gens[g].j);
            if (!poisson_bracket(p, x, m).is_zero()) note(c, name + " vs " + (*m.vars)[g + 3]);
        }
    };
    for (int j = 0; j <= m.N * m.n; ++j) against_all(rep.det_coefficients, tlabel(m.N, j), t[{m.N, j}]);
    for (int k = 1; k < m.N; ++k) against_all(rep.constant_terms, tlabel(k, k * m.n), t[{k, k * m.n}]);
    for (int i = 1; i <= m.N; ++i)
        against_all(rep.diagonal_products, "l0_" + std::to_string(i) + std::to_string(i) + "*l" + std::to_string(m.n) + "_" +
                                               std::to_string(i) + std::to_string(i),
                    m.gen_poly(0, i, i) * m.gen_poly(m.n, i, i));
    for (auto* part : {&rep.det_coefficients, &rep.constant_terms}) {
        rep.central.checked += part->checked;
        rep.central.failures += part->failures;
        for (auto& f : part->failing)
            if (rep.central.failing.size() < 8) rep.central.failing.push_back(f);
    }
    const CPoly& t11 = t[{1, 1}];
    for (size_t g = 0; g < m.gens.size() && !rep.noncentral_witness; ++g) {
        CPoly x = m.gen_poly(m.gens[g].a, m.gens[g].i, m.gens[g].j);
        CPoly b = poisson_bracket(t11, x, m);
        if (!b.is_zero()) {
            rep.noncentral_witness = true;
            rep.witness = "{t1^(1), " + (*m.vars)[g + 3] + "} = " + b.str();
        }
    }
    return rep;
}

BracketCheck check_definition(const ClassicalModel& m) {
    BracketCheck c{"definition replay"};
    const int N = m.N;
    CMatrix rhs = commutator_rhs(m);
    CPoly zz = CPoly::var(m.vars, "z") - CPoly::var(m.vars, "zp");
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j)
            for (int k = 1; k <= N; ++k)
                for (int l = 1; l <= N; ++l) {
                    CPoly lhs(m.vars);
                    for (int a = 0; a <= m.n; ++a)
                        for (int b = 0; b <= m.n; ++b) {
                            int g = m.index(a, i, j), h = m.index(b, k, l);
                            if (g < 0 || h < 0) continue;
                            lhs += m.bracket_gen(g, h) * CPoly::var(m.vars, "z", a) * CPoly::var(m.vars, "zp", b);
                        }
                    ++c.checked;
                    if (lhs * zz != rhs((i - 1) * N + k - 1, (j - 1) * N + l - 1))
                        note(c, "(" + std::to_string(i) + std::to_string(j) + "),(" + std::to_string(k) + std::to_string(l) + ")");
                }
    return c;
}

DimensionReport dimension_report(int N, int n) {
    DimensionReport r{N, n};
    r.dim_M = static_cast<long>(n) * N * (N - 1);
    // g = (N-1)(Nn-2)/2; the product is always even
    r.genus = static_cast<long>(N - 1) * (static_cast<long>(N) * n - 2) / 2;
    r.two_g_plus = 2 * r.genus + 2 * (N - 1);
    // diagonal: n+1 coefficients, off-diagonal: n
    r.generators = static_cast<long>(N) * (n + 1) + static_cast<long>(N) * (N - 1) * n;
    // t_N^{(j)}, j = 0..Nn, and t_k(0), k < N
    r.central = static_cast<long>(N) * n + 1 + (N - 1);
    long total = 0;
    for (int k = 1; k <= N; ++k) total += static_cast<long>(k) * n + 1;
    r.invariants = total - r.central;
    r.identity_ok = r.dim_M == r.two_g_plus;
    r.half_ok = 2 * r.invariants == r.dim_M;
    r.count_ok = r.generators - r.central == r.dim_M;
    return r;
}

// ---------------------------------------------------------------------------
// classical reduction

static mpq_class random_rational(std::mt19937_64& rng, int range) {
    std::uniform_int_distribution<int> num(-range, range), den(1, 3);
    mpq_class r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

NumericLax random_lax(int N, int n, std::mt19937_64& rng, bool impose_reduced, int range) {
    NumericLax lax;
    lax.N = N;
    lax.n = n;
    lax.coef.assign(n + 1, std::vector<std::vector<mpq_class>>(N, std::vector<mpq_class>(N, 0)));
    for (int a = 0; a <= n; ++a)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j)
                if (in_shape(LaxShape::Classical, n, a, i + 1, j + 1)) {
                    mpq_class v = random_rational(rng, range);
                    // diagonal leading terms must be nonzero for the reduction to exist
                    while (a == n && i == j && v == 0) v = random_rational(rng, range);
                    lax.coef[a][i][j] = v;
                }
    if (!impose_reduced) return lax;
    auto& mu = lax.coef[n];
    mu[0][0] = 0;
    // p(mu) = prod_{i>=2} (mu - mu_ii)
    std::vector<std::vector<mpq_class>> p(N, std::vector<mpq_class>(N, 0));
    for (int i = 0; i < N; ++i) p[i][i] = 1;
    for (int i = 1; i < N; ++i) {
        std::vector<std::vector<mpq_class>> f = mu, r(N, std::vector<mpq_class>(N, 0));
        for (int k = 0; k < N; ++k) f[k][k] -= mu[i][i];
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b)
                for (int k = 0; k < N; ++k) r[a][b] += p[a][k] * f[k][b];
        p = r;
    }
    auto& nu = lax.coef[n - 1][0];
    mpq_class rest = 0;
    for (int k = 1; k < N; ++k) rest += nu[k] * p[k][0];
    if (p[0][0] == 0) throw std::logic_error("random_lax: cannot solve for nu_1");
    nu[0] = -rest / p[0][0];
    return lax;
}

namespace {

template <class T>
struct Num;
template <>
struct Num<mpq_class> {
    static bool zero(const mpq_class& x) { return x == 0; }
    static bool eq(const mpq_class& a, const mpq_class& b) { return a == b; }
    static mpq_class from(const mpq_class& x) { return x; }
    static mpq_class to_q(const mpq_class& x) { return x; }
};
struct FloatTol {
    static inline double tol = 1e-9;
};
template <>
struct Num<double> {
    static bool zero(double x) { return std::fabs(x) <= FloatTol::tol; }
    static bool eq(double a, double b) { return std::fabs(a - b) <= FloatTol::tol * std::max(1.0, std::max(std::fabs(a), std::fabs(b))); }
    static double from(const mpq_class& x) { return x.get_d(); }
    static mpq_class to_q(double x) { return mpq_class(x); }
};

template <class T>
using Mat = std::vector<std::vector<T>>;

template <class T>
Mat<T> mul(const Mat<T>& a, const Mat<T>& b) {
    size_t n = a.size(), k = b.size(), m = b[0].size();
    Mat<T> r(n, std::vector<T>(m, T(0)));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l)
            for (size_t j = 0; j < m; ++j) r[i][j] += a[i][l] * b[l][j];
    return r;
}

template <class T>
bool invert(Mat<T> a, Mat<T>& inv) {
    size_t n = a.size();
    inv.assign(n, std::vector<T>(n, T(0)));
    for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        for (size_t r = c; r < n; ++r)
            if (!Num<T>::zero(a[r][c]) && (Num<T>::zero(a[p][c]) || std::is_same_v<T, double>)) {
                if constexpr (std::is_same_v<T, double>) {
                    if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
                } else {
                    p = r;
                    break;
                }
            }
        if (Num<T>::zero(a[p][c])) return false;
        std::swap(a[c], a[p]);
        std::swap(inv[c], inv[p]);
        T d = a[c][c];
        for (size_t j = 0; j < n; ++j) {
            a[c][j] /= d;
            inv[c][j] /= d;
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == c || Num<T>::zero(a[r][c])) continue;
            T f = a[r][c];
            for (size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[c][j];
                inv[r][j] -= f * inv[c][j];
            }
        }
    }
    return true;
}

template <class T>
ReduceResult reduce_impl(const NumericLax& lax) {
    const int N = lax.N, n = lax.n;
    ReduceResult res;
    std::vector<Mat<T>> l(n + 1, Mat<T>(N, std::vector<T>(N)));
    for (int a = 0; a <= n; ++a)
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) l[a][i][j] = Num<T>::from(lax.coef[a][i][j]);
    const Mat<T>& mu = l[n];
    Mat<T> nu(1, l[n - 1][0]);
    Mat<T> s(N, std::vector<T>(N, T(0)));
    s[0][0] = 1;
    for (int i = 1; i < N; ++i) {
        Mat<T> r = nu;
        for (int k = 0; k < N - 1 - i; ++k) r = mul(r, mu);
        s[i] = r[0];
    }
    Mat<T> si;
    if (!invert(s, si)) {
        res.singular = true;
        res.violations.push_back("s is singular; resample the Lax matrix");
        return res;
    }
    std::vector<Mat<T>> m(n + 1);
    for (int a = 0; a <= n; ++a) m[a] = mul(mul(s, l[a]), si);
    auto bad = [&](const std::string& what, int a, int i, int j) {
        res.violations.push_back(what + " at z^" + std::to_string(a) + " (" + std::to_string(i + 1) + "," +
                                 std::to_string(j + 1) + ")");
    };
    // a(z): degree n-2
    for (int a = std::max(0, n - 1); a <= n; ++a)
        if (!Num<T>::zero(m[a][0][0])) bad("deg a > n-2", a, 0, 0);
    // c(z): degree n-1
    for (int i = 1; i < N; ++i)
        if (!Num<T>::zero(m[n][i][0])) bad("deg c > n-1", n, i, 0);
    // b(z) = z^{n-1} e_{N-1} + degree n-2
    for (int j = 1; j < N; ++j) {
        if (!Num<T>::zero(m[n][0][j])) bad("deg b > n-1", n, 0, j);
        if (!Num<T>::eq(m[n - 1][0][j], T(j == N - 1 ? 1 : 0))) bad("b leading term is not e_{N-1}", n - 1, 0, j);
    }
    // d_0 against the companion matrix of prod_{i>=2} (x - mu_ii)
    std::vector<T> t{T(1)};
    for (int i = 1; i < N; ++i) {
        std::vector<T> next(t.size() + 1, T(0));
        for (size_t k = 0; k < t.size(); ++k) {
            next[k] += t[k];
            next[k + 1] -= t[k] * mu[i][i];
        }
        t = next;
    }
    res.d0.assign(N - 1, std::vector<mpq_class>(N - 1));
    for (int i = 1; i < N; ++i)
        for (int j = 1; j < N; ++j) {
            res.d0[i - 1][j - 1] = Num<T>::to_q(m[n][i][j]);
            T expect = i == 1 ? T(-t[j]) : T(j == i - 1 ? 1 : 0);
            if (!Num<T>::eq(m[n][i][j], expect)) bad("d0 differs from the companion matrix", n, i, j);
        }
    res.m.resize(n + 1);
    for (int a = 0; a <= n; ++a) {
        res.m[a].assign(N, std::vector<mpq_class>(N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) res.m[a][i][j] = Num<T>::to_q(m[a][i][j]);
    }
    res.ok = res.violations.empty();
    return res;
}

}  // namespace

ReduceResult classical_reduce(const NumericLax& lax) { return reduce_impl<mpq_class>(lax); }

ReduceResult classical_reduce_float(const NumericLax& lax, double tol) {
    FloatTol::tol = tol;
    return reduce_impl<double>(lax);
}

ReduceBatch classical_reduce_batch(int N, int n, int samples, std::uint64_t seed, bool impose_reduced) {
    ReduceBatch b{N, n, samples, 0, 0, seed};
    std::mt19937_64 rng(seed);
    for (int k = 0; k < samples; ++k) {
        ReduceResult r;
        do {
            r = classical_reduce(random_lax(N, n, rng, impose_reduced));
            if (r.singular) ++b.singular;
        } while (r.singular);
        if (!r.ok) ++b.violations;
    }
    return b;
}

// ---------------------------------------------------------------------------

// multiplicity of s = 1 as a root
static int order_at_one(UPoly p) {
    UPoly d;
    d.c = {mpq_class(-1), mpq_class(1)};
    int k = 0;
    while (!p.is_zero()) {
        UPoly quo, rem;
        p.divmod(d, quo, rem);
        if (!rem.is_zero()) break;
        p = quo;
        ++k;
    }
    return k;
}

static int order_at_one(const ScalarQ& c) { return order_at_one(c.num()) - order_at_one(c.den()); }

BridgeReport classical_limit_bridge(int N, int n) {
    BridgeReport rep;
    QuantumModel qm = build_model(N, n);
    ClassicalModel cm = build_bracket_table(N, n, LaxShape::Quantum);
    const Alphabet& A = *qm.alphabet;
    // quantum letter -> classical variable index
    std::vector<size_t> vidx(A.size());
    std::vector<int> gidx(A.size());
    for (size_t g = 0; g < A.size(); ++g) {
        const GenId& id = A.gen(g);
        int a = id.kind == GenKind::Mu ? n : id.a;
        gidx[g] = cm.index(a, id.i, id.j);
        if (gidx[g] < 0) throw std::logic_error("bridge: quantum generator outside the quantum Lax shape");
        vidx[g] = static_cast<size_t>(gidx[g] + 3);
    }
    int m11 = cm.index(n, 1, 1);
    auto drop_m11 = [&](const CPoly& p) {
        CPoly r(cm.vars);
        for (auto& [e, c] : p.terms())
            if (e[m11 + 3] == 0) r.add_term(e, c);
        return r;
    };
    bool have_kappa = false;
    UPoly sm1;
    sm1.c = {mpq_class(-1), mpq_class(1)};
    for (auto& raw : qm.rels.rels) {
        ++rep.relations;
        // rescale by a power of (s - 1) so the coefficients are regular and
        // not all vanishing at s = 1
        int v = std::numeric_limits<int>::max();
        for (auto& [w, c] : raw.terms()) v = std::min(v, order_at_one(c));
        ScalarQ f(1);
        for (int k = 0; k < std::abs(v); ++k) f *= ScalarQ(sm1, UPoly(mpq_class(1)), 0);
        NCPoly rel = v > 0 ? raw.scaled(f.inverse()) : v < 0 ? raw.scaled(f) : raw;
        CPoly zeroth(cm.vars), d(cm.vars), br(cm.vars);
        for (auto& [w, c] : rel.terms()) {
            CPoly mono(cm.vars, ScalarQ(1));
            for (char16_t g : w) mono = mono * CPoly::var(cm.vars, vidx[g]);
            // d/dq at q = 1 equals (1/2) d/ds at s = 1
            zeroth += mono.scaled(ScalarQ(c.eval_s(1)));
            d += mono.scaled(ScalarQ(mpq_class(c.d_ds().eval_s(1) / 2)));
            if (w.size() == 2) br += cm.bracket_gen(gidx[w[0]], gidx[w[1]]).scaled(ScalarQ(c.eval_s(1)));
        }
        if (!drop_m11(zeroth).is_zero()) {
            ++rep.failures;
            if (rep.first_failure.empty()) rep.first_failure = "order 0: " + zeroth.str();
            continue;
        }
        d = drop_m11(d);
        br = drop_m11(br).scaled(ScalarQ(mpq_class(1, 2)));
        if (!have_kappa && !br.is_zero()) {
            // d + kappa * br = 0 on the leading monomial of br
            auto it = br.terms().rbegin();
            rep.kappa = -(d.coeff(it->first).rational() / it->second.rational());
            have_kappa = true;
        }
        CPoly e = d + br.scaled(ScalarQ(rep.kappa));
        if (!e.is_zero()) {
            ++rep.failures;
            if (rep.first_failure.empty()) rep.first_failure = e.str();
        }
    }
    // common generators of the two shapes
    ClassicalModel cl = build_bracket_table(N, n, LaxShape::Classical);
    std::set<std::string> common;
    for (auto& g : cl.gens)
        if (cm.has(g.a, g.i, g.j)) common.insert(gname(g.a, g.i, g.j));
    auto restrict_to = [&](const CPoly& p, const ClassicalModel& src) {
        std::vector<std::string> names{"z", "zp", "w"};
        names.insert(names.end(), common.begin(), common.end());
        auto vars = make_vars(names);
        CPoly r(vars);
        for (auto& [e, c] : p.terms()) {
            Exponents f(vars->size(), 0);
            bool keep = true;
            for (size_t k = 3; k < e.size() && keep; ++k) {
                if (!e[k]) continue;
                int t = vars->index_of((*src.vars)[k]);
                if (t < 0) keep = false;
                else f[t] = e[k];
            }
            if (keep) r.add_term(f, c);
        }
        return r;
    };
    for (auto& x : common)
        for (auto& y : common) {
            if (!(x < y)) continue;
            auto pick = [&](const ClassicalModel& src) {
                int gx = src.vars->index_of(x) - 3, gy = src.vars->index_of(y) - 3;
                return restrict_to(src.bracket_gen(gx, gy), src);
            };
            ++rep.common_pairs;
            if (pick(cm) != pick(cl)) ++rep.common_mismatch;
        }
    rep.pass = have_kappa && rep.failures == 0 && rep.common_mismatch == 0;
    return rep;
}

}  // namespace qsep
