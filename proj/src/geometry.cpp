#include "qsep/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qsep/ncalg.hpp"

namespace qsep {

long genus(int N, int n) { return static_cast<long>(N - 1) * (static_cast<long>(N) * n - 2) / 2; }

std::vector<IndexEntry> index_map(int N, int n) {
    std::vector<IndexEntry> out;
    long g = genus(N, n);
    for (long i = 1; i <= g; ++i) {
        // twice the bounds, to stay in integers
        for (int k = 1; k < N; ++k) {
            long lo2 = static_cast<long>(k - 1) * (static_cast<long>(k) * n - 2);
            long hi2 = static_cast<long>(k) * (static_cast<long>(k + 1) * n - 2);
            if (lo2 < 2 * i && 2 * i <= hi2) {
                out.push_back({static_cast<int>(i), k, static_cast<int>(i - lo2 / 2)});
                break;
            }
        }
    }
    return out;
}

static mpq_class qpow(const mpq_class& x, int e) {
    mpq_class r = 1;
    for (int k = 0; k < e; ++k) r *= x;
    return r;
}

cplx CurveData::r(cplx w, cplx z) const {
    cplx s = 0;
    for (int k = 0; k <= N; ++k) {
        cplx tk = 0;
        for (size_t p = t[k].size(); p-- > 0;) tk = tk * z + t[k][p].get_d();
        s += std::pow(w, N - k) * tk;
    }
    return s;
}

cplx CurveData::dr_dw(cplx w, cplx z) const {
    cplx s = 0;
    for (int k = 0; k < N; ++k) {
        cplx tk = 0;
        for (size_t p = t[k].size(); p-- > 0;) tk = tk * z + t[k][p].get_d();
        s += static_cast<double>(N - k) * std::pow(w, N - k - 1) * tk;
    }
    return s;
}

mpq_class CurveData::r(const mpq_class& w, const mpq_class& z) const {
    mpq_class s = 0;
    for (int k = 0; k <= N; ++k) {
        mpq_class tk = 0;
        for (size_t p = t[k].size(); p-- > 0;) tk = tk * z + t[k][p];
        s += qpow(w, N - k) * tk;
    }
    return s;
}

std::vector<cplx> CurveData::w_roots(cplx z) const {
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(N, N);
    for (int k = 1; k <= N; ++k) {
        cplx tk = 0;
        for (size_t p = t[k].size(); p-- > 0;) tk = tk * z + t[k][p].get_d();
        comp(0, k - 1) = -tk;
    }
    for (int i = 1; i < N; ++i) comp(i, i - 1) = 1;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    std::vector<cplx> out(es.eigenvalues().data(), es.eigenvalues().data() + N);
    return out;
}

CurveData curve_from_lax(const NumericLax& lax) {
    const int N = lax.N, n = lax.n;
    auto vars = make_vars({"w", "z"});
    std::vector<std::vector<CPoly>> a(N, std::vector<CPoly>(N, CPoly(vars)));
    CPoly w = CPoly::var(vars, "w");
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            for (int p = 0; p <= n; ++p)
                if (lax.coef[p][i][j] != 0) a[i][j] += CPoly::var(vars, "z", p).scaled(ScalarQ(lax.coef[p][i][j]));
            if (i == j) a[i][j] += w;
        }
    std::function<CPoly(const std::vector<std::vector<CPoly>>&)> det = [&](const std::vector<std::vector<CPoly>>& m) {
        size_t sz = m.size();
        if (sz == 1) return m[0][0];
        CPoly r(vars);
        for (size_t c = 0; c < sz; ++c) {
            if (m[0][c].is_zero()) continue;
            std::vector<std::vector<CPoly>> minor;
            for (size_t i = 1; i < sz; ++i) {
                std::vector<CPoly> row;
                for (size_t j = 0; j < sz; ++j)
                    if (j != c) row.push_back(m[i][j]);
                minor.push_back(std::move(row));
            }
            CPoly term = m[0][c] * det(minor);
            r = c % 2 ? r - term : r + term;
        }
        return r;
    };
    CPoly d = det(a);
    CurveData c;
    c.N = N;
    c.n = n;
    c.t.assign(N + 1, {});
    for (auto& [e, coef] : d.terms()) {
        int k = N - e[0], p = e[1];
        if (p > k * n) throw std::logic_error("curve_from_lax: deg t_k exceeds kn");
        if (static_cast<int>(c.t[k].size()) <= p) c.t[k].resize(p + 1, 0);
        c.t[k][p] = coef.rational();
    }
    c.g = genus(N, n);
    c.index_table = index_map(N, n);
    return c;
}

DivisorPoint make_point(const CurveData& c, cplx z, cplx w) { return {z, w, std::abs(c.r(w, z))}; }

cplx f_value(const IndexEntry& e, cplx z, cplx w) { return std::pow(w, e.k - 1) * std::pow(z, e.l - 1); }

mpq_class f_value(const IndexEntry& e, const mpq_class& z, const mpq_class& w) {
    return qpow(w, e.k - 1) * qpow(z, e.l - 1);
}

cplx holomorphic_differential(const CurveData& c, int i, const DivisorPoint& p, double tol) {
    if (i < 1 || i > static_cast<int>(c.index_table.size())) throw GeometryError("holomorphic_differential: index out of range");
    double scale = 1 + std::abs(p.w) + std::abs(p.z);
    if (std::abs(c.r(p.w, p.z)) > tol * std::pow(scale, c.N * (c.n + 1)))
        throw GeometryError("holomorphic_differential: point is not on the curve");
    cplx d = c.dr_dw(p.w, p.z);
    if (std::abs(d) <= tol * std::pow(scale, c.N * (c.n + 1) - 1))
        throw GeometryError("holomorphic_differential: branch point (dr/dw = 0)");
    return f_value(c.index_table[i - 1], p.z, p.w) / d;
}

cplx divisor_determinant(const CurveData& c, const std::vector<DivisorPoint>& pts, double tol) {
    const size_t g = c.index_table.size();
    if (pts.size() != g) throw GeometryError("divisor_determinant: need exactly g points");
    for (size_t a = 0; a < g; ++a)
        for (size_t b = a + 1; b < g; ++b)
            if (std::abs(pts[a].z - pts[b].z) + std::abs(pts[a].w - pts[b].w) <= tol)
                throw GeometryError("divisor_determinant: coinciding points; the definition needs changes for this case");
    if (g == 0) return 1;
    Eigen::MatrixXcd m(g, g);
    for (size_t i = 0; i < g; ++i)
        for (size_t j = 0; j < g; ++j) m(i, j) = f_value(c.index_table[i], pts[j].z, pts[j].w);
    return m.determinant();
}

mpq_class divisor_matrix_det(const std::vector<IndexEntry>& table, const std::vector<std::pair<mpq_class, mpq_class>>& pts) {
    const size_t g = table.size();
    if (pts.size() != g) throw GeometryError("divisor_determinant: need exactly g points");
    std::vector<std::vector<mpq_class>> m(g, std::vector<mpq_class>(g));
    for (size_t i = 0; i < g; ++i)
        for (size_t j = 0; j < g; ++j) m[i][j] = f_value(table[i], pts[j].first, pts[j].second);
    mpq_class det = 1;
    for (size_t c = 0; c < g; ++c) {
        size_t p = c;
        while (p < g && m[p][c] == 0) ++p;
        if (p == g) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (size_t r = c + 1; r < g; ++r) {
            if (m[r][c] == 0) continue;
            mpq_class f = m[r][c] / m[c][c];
            for (size_t j = c; j < g; ++j) m[r][j] -= f * m[c][j];
        }
    }
    return det;
}

mpq_class divisor_determinant_exact(const CurveData& c, const std::vector<std::pair<mpq_class, mpq_class>>& pts) {
    for (size_t a = 0; a < pts.size(); ++a)
        for (size_t b = a + 1; b < pts.size(); ++b)
            if (pts[a] == pts[b])
                throw GeometryError("divisor_determinant: coinciding points; the definition needs changes for this case");
    return divisor_matrix_det(c.index_table, pts);
}

// ---------------------------------------------------------------------------

bool ExpKey::operator<(const ExpKey& o) const {
    if (alpha != o.alpha) return alpha < o.alpha;
    if (beta != o.beta) return beta < o.beta;
    if (cg != o.cg) return cg < o.cg;
    if (cp != o.cp) return cp < o.cp;
    return cpp < o.cpp;
}

static void normalize_pi(mpq_class& cp) {
    // e^{i pi cp} depends on cp mod 2
    mpz_class fl;
    mpz_class twice_den = 2 * cp.get_den();
    mpz_fdiv_q(fl.get_mpz_t(), cp.get_num_mpz_t(), twice_den.get_mpz_t());
    cp -= 2 * mpq_class(fl);
}

ExpFunction ExpFunction::exponential(const std::vector<mpq_class>& alpha, const std::vector<mpq_class>& beta) {
    ExpFunction f(static_cast<int>(alpha.size()));
    ExpKey k{alpha, beta.empty() ? std::vector<mpq_class>(alpha.size(), 0) : beta, 0, 0, 0};
    f.add(k, 1);
    return f;
}

void ExpFunction::add(ExpKey k, const mpq_class& c) {
    if (c == 0) return;
    normalize_pi(k.cp);
    auto it = t_.find(k);
    if (it == t_.end()) {
        t_.emplace(std::move(k), c);
        return;
    }
    it->second += c;
    if (it->second == 0) t_.erase(it);
}

ExpFunction ExpFunction::operator+(const ExpFunction& o) const {
    ExpFunction r = *this;
    r.g_ = std::max(g_, o.g_);
    for (auto& [k, c] : o.t_) r.add(k, c);
    return r;
}

ExpFunction ExpFunction::operator-(const ExpFunction& o) const { return *this + o.scaled(-1); }

ExpFunction ExpFunction::scaled(const mpq_class& c) const {
    ExpFunction r(g_);
    for (auto& [k, v] : t_) r.add(k, v * c);
    return r;
}

ExpFunction ExpFunction::times_phase(const mpq_class& cg, const mpq_class& cp, const mpq_class& cpp) const {
    ExpFunction r(g_);
    for (auto& [key, v] : t_) {
        ExpKey k = key;
        k.cg += cg;
        k.cp += cp;
        k.cpp += cpp;
        r.add(k, v);
    }
    return r;
}

cplx ExpFunction::eval(const std::vector<cplx>& zeta, double gamma) const {
    const double pi = std::acos(-1.0);
    cplx s = 0;
    for (auto& [k, c] : t_) {
        cplx e = cplx(0, 1) * (k.cg.get_d() * gamma + k.cp.get_d() * pi + k.cpp.get_d() * pi * pi / gamma);
        for (size_t j = 0; j < k.alpha.size(); ++j) e += (k.alpha[j].get_d() + k.beta[j].get_d() * pi / gamma) * zeta[j];
        s += c.get_d() * std::exp(e);
    }
    return s;
}

std::string ExpFunction::str() const {
    if (t_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [k, c] : t_) {
        if (!first) os << " + ";
        first = false;
        os << c << "*exp(i*(" << k.cg << "*gamma + " << k.cp << "*pi + " << k.cpp << "*pi^2/gamma))*exp(";
        for (size_t j = 0; j < k.alpha.size(); ++j)
            os << (j ? " + " : "") << "(" << k.alpha[j] << " + " << k.beta[j] << "*pi/gamma)*zeta" << j + 1;
        os << ")";
    }
    return os.str();
}

std::string sep_op_name(SepOp op) {
    switch (op) {
        case SepOp::z: return "z";
        case SepOp::w: return "w";
        case SepOp::Z: return "Z";
        case SepOp::W: return "W";
    }
    return "?";
}

ExpFunction apply_op(SepOp op, int j, const ExpFunction& G) {
    if (j < 0 || j >= G.vars()) throw std::out_of_range("apply_op: variable index");
    ExpFunction r(G.vars());
    for (auto& [key, c] : G.terms()) {
        ExpKey k = key;
        switch (op) {
            case SepOp::z: k.alpha[j] += 2; break;
            case SepOp::Z: k.beta[j] += 2; break;
            // exp(a (zeta + i gamma)): phase i gamma alpha + i pi beta
            case SepOp::w:
                k.cg += k.alpha[j];
                k.cp += k.beta[j];
                break;
            // exp(a (zeta + i pi)): phase i pi alpha + i pi^2/gamma beta
            case SepOp::W:
                k.cp += k.alpha[j];
                k.cpp += k.beta[j];
                break;
        }
        r.add(k, c);
    }
    return r;
}

ExpFunction apply_word(const std::vector<std::pair<SepOp, int>>& ops, const ExpFunction& G) {
    ExpFunction r = G;
    for (size_t k = ops.size(); k-- > 0;) r = apply_op(ops[k].first, ops[k].second, r);
    return r;
}

std::vector<SepIdentity> check_separated_identities(const ExpFunction& G) {
    std::vector<SepIdentity> out;
    for (int j = 0; j < G.vars(); ++j) {
        std::string sj = std::to_string(j + 1);
        auto wz = apply_word({{SepOp::w, j}, {SepOp::z, j}}, G), zw = apply_word({{SepOp::z, j}, {SepOp::w, j}}, G);
        ExpFunction r1 = wz - zw.times_phase(2, 0, 0);  // q^2 = e^{2 i gamma}
        auto Wz = apply_word({{SepOp::W, j}, {SepOp::z, j}}, G), zW = apply_word({{SepOp::z, j}, {SepOp::W, j}}, G);
        ExpFunction r2 = Wz - zW;
        auto wZ = apply_word({{SepOp::w, j}, {SepOp::Z, j}}, G), Zw = apply_word({{SepOp::Z, j}, {SepOp::w, j}}, G);
        ExpFunction r3 = wZ - Zw;
        out.push_back({"w" + sj + " z" + sj + " = q^2 z" + sj + " w" + sj, r1.is_zero(), r1.str()});
        out.push_back({"W" + sj + " z" + sj + " = z" + sj + " W" + sj, r2.is_zero(), r2.str()});
        out.push_back({"w" + sj + " Z" + sj + " = Z" + sj + " w" + sj, r3.is_zero(), r3.str()});
    }
    return out;
}

static int perm_sign(const std::vector<int>& p) {
    int s = 1;
    for (size_t a = 0; a < p.size(); ++a)
        for (size_t b = a + 1; b < p.size(); ++b)
            if (p[a] > p[b]) s = -s;
    return s;
}

ExpFunction measure_kernel_apply(const std::vector<IndexEntry>& table, const ExpFunction& G) {
    const int g = static_cast<int>(table.size());
    if (g > 3) throw BudgetError("measure_kernel_apply: g > 3 is outside the desk-scale budget");
    if (G.vars() != g) throw std::invalid_argument("measure_kernel_apply: test function must have g variables");
    std::vector<int> sigma(g);
    std::iota(sigma.begin(), sigma.end(), 0);
    ExpFunction out(g);
    do {
        std::vector<int> tau(g);
        std::iota(tau.begin(), tau.end(), 0);
        do {
            ExpFunction r = G;
            for (int j = 0; j < g; ++j) {
                const IndexEntry& dual = table[tau[j]];
                const IndexEntry& e = table[sigma[j]];
                // shifts first, multipliers after
                for (int p = 0; p < dual.k - 1; ++p) r = apply_op(SepOp::W, j, r);
                for (int p = 0; p < dual.l - 1; ++p) r = apply_op(SepOp::Z, j, r);
                for (int p = 0; p < e.k - 1; ++p) r = apply_op(SepOp::w, j, r);
                for (int p = 0; p < e.l - 1; ++p) r = apply_op(SepOp::z, j, r);
            }
            out = out + r.scaled(perm_sign(sigma) * perm_sign(tau));
        } while (std::next_permutation(tau.begin(), tau.end()));
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

std::vector<cplx> measure_kernel_sample(const std::vector<IndexEntry>& table, const ExpFunction& G, double gamma,
                                        const std::vector<std::vector<cplx>>& grid) {
    ExpFunction k = measure_kernel_apply(table, G);
    std::vector<cplx> out;
    out.reserve(grid.size());
    for (auto& pt : grid) out.push_back(k.eval(pt, gamma));
    return out;
}

}  // namespace qsep
