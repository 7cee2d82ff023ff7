#include "qsep/reduction.hpp"

#include <stdexcept>

namespace qsep {

const char* shat_name(ShatReading r) {
    switch (r) {
        case ShatReading::QInvE11: return "qE11(x)q^-E11";
        case ShatReading::ScalarQE: return "qE11(x)q^E11";
        case ShatReading::QEQE: return "q^E11(x)q^E11";
    }
    return "?";
}

ShatReading parse_shat(const std::string& s) {
    if (s == "qE11(x)q^-E11" || s == "qinv") return ShatReading::QInvE11;
    if (s == "qE11(x)q^E11" || s == "scalar") return ShatReading::ScalarQE;
    if (s == "q^E11(x)q^E11" || s == "qeqe") return ShatReading::QEQE;
    throw std::invalid_argument("unknown Shat reading '" + s + "' (qinv|scalar|qeqe)");
}

static NCMatrix row_of(const std::vector<NCPoly>& v) {
    NCMatrix r(1, static_cast<int>(v.size()));
    for (size_t j = 0; j < v.size(); ++j) r(0, static_cast<int>(j)) = v[j];
    return r;
}

static NCMatrix constant_diag(const std::vector<ScalarQ>& d) {
    NCMatrix r(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (size_t i = 0; i < d.size(); ++i) r(static_cast<int>(i), static_cast<int>(i)) = NCPoly(d[i]);
    return r;
}

ReductionData build_reduction(const QuantumModel& m, ShatReading reading) {
    if (m.n < 1) throw std::invalid_argument("build_reduction: n must be >= 1");
    const int N = m.N, n = m.n, NN = N * N;
    const ScalarQ q = ScalarQ::q(), qi = ScalarQ::qinv();
    ReductionData d;
    d.N = N;
    d.n = n;
    d.shat_reading = reading;
    const NCMatrix& mu = m.mu();
    for (int j = 0; j < N; ++j) d.nu.push_back(m.Lc[n - 1](0, j));

    d.S = NCMatrix(N, N);
    d.S(0, 0) = NCPoly(ScalarQ(1));
    for (int i = 1; i < N; ++i) {
        NCMatrix r = row_of(d.nu);
        for (int k = 0; k < N - 1 - i; ++k) r = r * mu;
        for (int j = 0; j < N; ++j) d.S(i, j) = r(0, j);
    }

    // prod_{i=2}^{N} (x - q^{-1} mu_ii), multiplied out left to right
    d.t = {NCPoly(ScalarQ(1))};
    for (int i = 1; i < N; ++i) {
        NCPoly f = -mu(i, i).scaled(qi);
        std::vector<NCPoly> next(d.t.size() + 1);
        for (size_t k = 0; k < d.t.size(); ++k) {
            next[k] += d.t[k];
            next[k + 1] += d.t[k] * f;
        }
        d.t = std::move(next);
    }
    d.U = NCMatrix(N, N);
    for (int c = 1; c < N; ++c) d.U(1, c) = -d.t[c];
    for (int i = 2; i < N; ++i) d.U(i, i - 1) = NCPoly(ScalarQ(1));

    // Shat12
    d.Shat12 = NCMatrix(NN, NN);
    for (int j = 0; j < N; ++j) {
        ScalarQ v;
        switch (reading) {
            case ShatReading::QInvE11: v = j == 0 ? ScalarQ(1) : q; break;
            case ShatReading::ScalarQE: v = j == 0 ? q * q : q; break;
            case ShatReading::QEQE: v = j == 0 ? q * q : q; break;
        }
        d.Shat12(j, j) = NCPoly(v);
    }
    if (reading == ShatReading::QEQE)
        for (int a = 1; a < N; ++a)
            for (int j = 0; j < N; ++j) d.Shat12(a * N + j, a * N + j) = NCPoly(j == 0 ? q : ScalarQ(1));
    NCMatrix nuI(N, NN);
    for (int j = 0; j < N; ++j)
        for (int k = 0; k < N; ++k) nuI(j, k * N + j) = d.nu[k];
    NCMatrix Rmu = m.R12 * tensor_left(mu, N);
    for (int i = 1; i < N; ++i) {
        NCMatrix X = nuI;
        for (int k = 0; k < N - 1 - i; ++k) X = X * Rmu;
        for (int j = 0; j < N; ++j)
            for (int c = 0; c < NN; ++c) d.Shat12(i * N + j, c) += X(j, c);
    }

    // C12 = (I - E11) (x) I + sum_{j=1}^{N-2} V^j (x) U^j
    NCMatrix I = NCMatrix::identity(N), I2 = NCMatrix::identity(NN);
    NCMatrix V(N, N);
    for (int i = 1; i + 1 < N; ++i) V(i, i + 1) = NCPoly(ScalarQ(1));
    NCMatrix IE = I;
    IE(0, 0) = NCPoly();
    d.C12 = tensor_left(IE, N);
    NCMatrix Vj = I, Uj = I;
    for (int j = 1; j <= N - 2; ++j) {
        Vj = Vj * V;
        Uj = Uj * d.U;
        for (int a = 0; a < N; ++a)
            for (int b = 0; b < N; ++b) {
                if (Vj(a, b).is_zero()) continue;
                const ScalarQ v = Vj(a, b).coeff(Word());
                for (int c = 0; c < N; ++c)
                    for (int e = 0; e < N; ++e) d.C12(a * N + c, b * N + e) += Uj(c, e).scaled(v);
            }
    }
    NCMatrix P(NN, NN);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) P(i * N + j, j * N + i) = NCPoly(ScalarQ(1));
    NCMatrix proj = d.C12 * (I2 - P);
    const ScalarQ h = q - qi;
    d.Y12 = I2.scaled(q) - proj.scaled(h);
    d.Y12inv = I2.scaled(qi) + proj.scaled(h);
    NCMatrix EN1(N, N);
    EN1(N - 1, 0) = NCPoly(ScalarQ(1));
    d.Zt = tensor_right(d.U, N) * d.C12 * tensor_left(EN1, N);
    return d;
}

RelationSet localized_relations(const QuantumModel& m, const ReductionData& red) {
    return enable_localization(m.rels, red.S);
}

// ---------------------------------------------------------------------------
// q = 1 images

static CPoly cdet(const std::vector<std::vector<CPoly>>& a, const CPoly& one) {
    size_t n = a.size();
    if (n == 0) return one;
    if (n == 1) return a[0][0];
    CPoly r = one - one;
    for (size_t c = 0; c < n; ++c) {
        if (a[0][c].is_zero()) continue;
        std::vector<std::vector<CPoly>> minor;
        for (size_t i = 1; i < n; ++i) {
            std::vector<CPoly> row;
            for (size_t j = 0; j < n; ++j)
                if (j != c) row.push_back(a[i][j]);
            minor.push_back(row);
        }
        CPoly t = a[0][c] * cdet(minor, one);
        r = c % 2 ? r - t : r + t;
    }
    return r;
}

static CPoly image_of(const NCPoly& p, const std::vector<CPoly>& img, const CPoly& one) {
    CPoly r = one - one;
    for (auto& [w, c] : p.terms()) {
        CPoly t = one.scaled(ScalarQ(c.specialize_q(1)));
        for (char16_t g : w) t = t * img[g];
        r = r + t;
    }
    return r;
}

Q1Context make_q1_context(const Alphabet& A, const ReductionData* red, const CPoly* modulus) {
    Q1Context ctx;
    std::vector<std::string> names;
    for (size_t g = 0; g < A.size(); ++g)
        if (A.gen(g).kind != GenKind::SigmaInv) names.push_back(A.name(g));
    ctx.vars = make_vars(names);
    CPoly one(ctx.vars, ScalarQ(1));
    ctx.letter_image.resize(A.size());
    ctx.is_sigma.resize(A.size());
    for (size_t g = 0; g < A.size(); ++g)
        if (A.gen(g).kind != GenKind::SigmaInv) ctx.letter_image[g] = CPoly::var(ctx.vars, A.name(g));
    ctx.det = one;
    if (A.localized()) {
        if (!red) throw std::invalid_argument("q=1 image of sigma needs the reduction data");
        const int N = A.N();
        std::vector<std::vector<CPoly>> s(N, std::vector<CPoly>(N));
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) s[i][j] = image_of(red->S(i, j), ctx.letter_image, one);
        ctx.det = cdet(s, one);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                // adj(S)_{ij} = (-1)^{i+j} det(minor without row j, column i)
                std::vector<std::vector<CPoly>> minor;
                for (int r = 0; r < N; ++r) {
                    if (r == j) continue;
                    std::vector<CPoly> row;
                    for (int c = 0; c < N; ++c)
                        if (c != i) row.push_back(s[r][c]);
                    minor.push_back(row);
                }
                CPoly v = cdet(minor, one);
                size_t g = A.letter({GenKind::SigmaInv, 0, i + 1, j + 1});
                ctx.letter_image[g] = (i + j) % 2 ? -v : v;
                ctx.is_sigma[g] = true;
            }
    }
    ctx.modulus = modulus ? modulus->substitute(
                                [&] {
                                    std::vector<CPoly> vals;
                                    for (size_t k = 0; k < modulus->vars()->size(); ++k)
                                        vals.push_back(CPoly::var(ctx.vars, (*modulus->vars())[k]));
                                    return vals;
                                }(),
                                ctx.vars)
                          : CPoly(ctx.vars);
    return ctx;
}

bool q1_holds(const NCPoly& target, const Q1Context& ctx) {
    CPoly one(ctx.vars, ScalarQ(1));
    int k = 0;
    for (auto& [w, c] : target.terms()) {
        int m = 0;
        for (char16_t g : w) m += ctx.is_sigma[g];
        k = std::max(k, m);
    }
    CPoly r(ctx.vars);
    for (auto& [w, c] : target.terms()) {
        CPoly t = one.scaled(ScalarQ(c.specialize_q(1)));
        int m = 0;
        for (char16_t g : w) {
            t = t * ctx.letter_image[g];
            m += ctx.is_sigma[g];
        }
        for (int p = m; p < k; ++p) t = t * ctx.det;
        r = r + t;
    }
    if (r.is_zero()) return true;
    if (ctx.modulus.is_zero()) return false;
    return ctx.modulus.divides_into(r);
}

CPoly center_residual_q1(const QuantumModel& m) {
    BiFamily Q = qdet(m, false, QdetShift::Doubled);
    auto it = Q.find({0, m.N * m.n - 1});
    if (it == Q.end()) throw std::logic_error("q-det coefficient z^{Nn-1} vanishes");
    return commutative_image(it->second, *m.alphabet, commutative_vars(*m.alphabet));
}

// ---------------------------------------------------------------------------

namespace {

std::string pos(int r, int c, int N) {
    if (N <= 0) return "(" + std::to_string(r + 1) + "," + std::to_string(c + 1) + ")";
    return "(" + std::to_string(r / N + 1) + std::to_string(r % N + 1) + "," + std::to_string(c / N + 1) +
           std::to_string(c % N + 1) + ")";
}

std::string grade_label(const Grade& g) {
    if (g.empty()) return "";
    if (g.size() == 1) return "z^" + std::to_string(g[0]) + " ";
    return "z1^" + std::to_string(g[0]) + " z2^" + std::to_string(g[1]) + " ";
}

struct Ctx {
    CheckReport& rep;
    Prover& prover;
    const Q1Context& q1;
    const ReductionOptions& opt;

    void add(const std::string& check, const std::string& anchor, const std::string& entry, const NCPoly& target) {
        CheckRecord r = record_from(check, anchor, entry, target, prover, opt.sink, false);
        r.q1_ok = q1_holds(target, q1);
        rep.records.push_back(std::move(r));
    }
    void add_matrix(const std::string& check, const std::string& anchor, const NCMatrix& diff, int tensorN,
                    const std::string& prefix = "") {
        for (int i = 0; i < diff.rows(); ++i)
            for (int j = 0; j < diff.cols(); ++j) add(check, anchor, prefix + pos(i, j, tensorN), diff(i, j));
    }
    void add_graded(const std::string& check, const std::string& anchor, const GMatrix& diff, int tensorN) {
        for (auto& [g, X] : diff) add_matrix(check, anchor, X, tensorN, grade_label(g));
    }
};

GMatrix graded_L(const std::vector<NCMatrix>& Lc, int slots, int which, const std::function<NCMatrix(const NCMatrix&)>& f) {
    GMatrix r;
    for (size_t a = 0; a < Lc.size(); ++a) {
        Grade g(slots, 0);
        g[which] = static_cast<int>(a);
        r.emplace(g, f(Lc[a]));
    }
    return r;
}

// I - (q - q^{-1}) scale z Zt in slot `which` of `slots` spectral variables
GMatrix graded_Z(const ReductionData& red, const ScalarQ& scale, int slots, int which) {
    const int NN = red.N * red.N;
    Grade g0(slots, 0), g1(slots, 0);
    g1[which] = 1;
    ScalarQ h = ScalarQ::q() - ScalarQ::qinv();
    return {{g0, NCMatrix::identity(NN)}, {g1, red.Zt.scaled(-(h * scale))}};
}

CPoly modulus_for(const QuantumModel& m) { return m.center_fix ? center_residual_q1(m) : CPoly(); }

std::string base_stats(Prover& p) { return p.stats(); }

}  // namespace

CheckReport check_char_identity(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt) {
    CheckReport rep{"char-identity", m.N, m.n, reading_name(m.reading)};
    Prover prover(m.rels, opt.degree_bound, opt.budget);
    CPoly mod = modulus_for(m);
    Q1Context q1 = make_q1_context(*m.alphabet, &red, m.center_fix ? &mod : nullptr);
    Ctx ctx{rep, prover, q1, opt};
    const int N = m.N;
    NCMatrix sum(1, N);
    for (int k = 0; k < N; ++k) {
        NCMatrix r = row_of(red.nu);
        for (int p = 0; p < N - 1 - k; ++p) r = r * m.mu();
        for (int j = 0; j < N; ++j) sum(0, j) += red.t[k] * r(0, j);
    }
    for (int j = 0; j < N; ++j)
        ctx.add("ch", "sum_k t_k nu mu^{N-1-k} = 0", "component " + std::to_string(j + 1), sum(0, j));
    ctx.add_matrix("S-mu-US", "S mu = U S", red.S * m.mu() - red.U * red.S, 0);
    rep.engine_stats = base_stats(prover);
    return rep;
}

CheckReport check_aux_relations(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt) {
    CheckReport rep{"aux", m.N, m.n, reading_name(m.reading)};
    Prover prover(m.rels, opt.degree_bound, opt.budget);
    CPoly mod = modulus_for(m);
    Q1Context q1 = make_q1_context(*m.alphabet, &red, m.center_fix ? &mod : nullptr);
    Ctx ctx{rep, prover, q1, opt};
    const int N = m.N;
    NCMatrix Shat21 = flip21(red.Shat12, N);
    NCMatrix W = tensor_left(red.S, N) * Shat21;
    NCMatrix R21 = flip21(m.R12, N);

    ctx.add_matrix("au1", "Y12 (S(x)I) Shat21 = (I(x)S) Shat12 R12", red.Y12 * W - tensor_right(red.S, N) * red.Shat12 * m.R12,
                   N);

    auto au2 = [&](const std::string& name, const std::string& anchor, const NCMatrix& D, const ScalarQ& zscale) {
        GMatrix lhs = gmul(gconst(W, 1), graded_L(m.Lc, 1, 0, [&](const NCMatrix& X) { return tensor_left(D * X, N); }));
        GMatrix SL = graded_L(m.Lc, 1, 0, [&](const NCMatrix& X) { return tensor_left(red.S * X, N); });
        GMatrix rhs = gmul(gmul(graded_Z(red, zscale, 1, 0), SL), gconst(Shat21 * R21, 1));
        ctx.add_graded(name, anchor, gadd(lhs, rhs, ScalarQ(-1)), N);
    };
    au2("au2", "(S(x)I) Shat21 (L(z)(x)I) = Z12(z) (S L(z) (x) I) Shat21 R21", NCMatrix::identity(N), ScalarQ(1));
    std::vector<ScalarQ> dq(N, ScalarQ(1));
    dq[0] = ScalarQ::q();
    au2("au2-corrected", "(S(x)I) Shat21 (q^{E11} L(z) (x) I) = Z12(q^-1 z) (S L(z) (x) I) Shat21 R21", constant_diag(dq),
        ScalarQ::qinv());
    rep.engine_stats = base_stats(prover);
    return rep;
}

CheckReport check_M_structure(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt) {
    CheckReport rep{"m-structure", m.N, m.n, reading_name(m.reading)};
    RelationSet loc = localized_relations(m, red);
    Prover prover(loc, opt.localized_degree, opt.budget);
    CPoly mod = modulus_for(m);
    Q1Context q1 = make_q1_context(*loc.alphabet, &red, m.center_fix ? &mod : nullptr);
    Ctx ctx{rep, prover, q1, opt};
    const int N = m.N, n = m.n;
    NCMatrix sg = sigma_matrix(*loc.alphabet);
    NCMatrix Mn = red.S * m.Lc[n] * sg;
    NCMatrix Mn1 = red.S * m.Lc[n - 1] * sg;
    auto block = [&](int i, int j) -> std::string {
        if (i == 0 && j == 0) return "a";
        if (i == 0) return "b";
        if (j == 0) return "c";
        return "d";
    };
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            ctx.add("M-lead", "z^n coefficient of M(z) equals U", "block " + block(i, j) + " " + pos(i, j, 0),
                    Mn(i, j) - red.U(i, j));
    for (int j = 0; j < N; ++j)
        ctx.add("M-row1", "row 1 of the z^{n-1} coefficient of M(z) is e_N", "block " + block(0, j) + " " + pos(0, j, 0),
                Mn1(0, j) - NCPoly(ScalarQ(j == N - 1 ? 1 : 0)));
    rep.engine_stats = base_stats(prover);
    return rep;
}

CheckReport check_tj_commute(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt) {
    CheckReport rep{"tj-commute", m.N, m.n, reading_name(m.reading)};
    const int N = m.N, n = m.n;
    {
        Prover prover(m.rels, opt.degree_bound, opt.budget);
        CPoly mod = modulus_for(m);
        Q1Context q1 = make_q1_context(*m.alphabet, &red, m.center_fix ? &mod : nullptr);
        Ctx ctx{rep, prover, q1, opt};
        for (int j = 1; j < N; ++j) {
            std::string tj = "t" + std::to_string(j) + " ";
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b) ctx.add("tj-S", "[t_j, S] = 0", tj + pos(a, b, 0), commutator(red.t[j], red.S(a, b)));
            for (int k = 0; k <= n; ++k) {
                NCMatrix SL = red.S * m.Lc[k];
                for (int a = 0; a < N; ++a)
                    for (int b = 0; b < N; ++b)
                        ctx.add("tj-SL", "[t_j, S L(z)] = 0", tj + "z^" + std::to_string(k) + " " + pos(a, b, 0),
                                commutator(red.t[j], SL(a, b)));
            }
        }
        rep.engine_stats = base_stats(prover);
    }
    RelationSet loc = localized_relations(m, red);
    Prover lp(loc, opt.localized_degree, opt.budget);
    CPoly mod = modulus_for(m);
    Q1Context q1 = make_q1_context(*loc.alphabet, &red, m.center_fix ? &mod : nullptr);
    Ctx ctx{rep, lp, q1, opt};
    NCMatrix sg = sigma_matrix(*loc.alphabet);
    for (int j = 1; j < N; ++j)
        for (int k = 0; k <= n; ++k) {
            NCMatrix M = red.S * m.Lc[k] * sg;
            for (int a = 0; a < N; ++a)
                for (int b = 0; b < N; ++b)
                    ctx.add("tj-M", "[t_j, M(z)] = 0 (localized)",
                            "t" + std::to_string(j) + " z^" + std::to_string(k) + " " + pos(a, b, 0),
                            commutator(red.t[j], M(a, b)));
        }
    rep.engine_stats += " | localized: " + lp.stats();
    return rep;
}

CheckReport check_closed_relation(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt,
                                  bool printed, bool derived) {
    CheckReport rep{"closed", m.N, m.n, reading_name(m.reading)};
    RelationSet loc = localized_relations(m, red);
    Prover prover(loc, opt.localized_degree, opt.budget);
    CPoly mod = modulus_for(m);
    Q1Context q1 = make_q1_context(*loc.alphabet, &red, m.center_fix ? &mod : nullptr);
    Ctx ctx{rep, prover, q1, opt};
    const int N = m.N;
    NCMatrix sg = sigma_matrix(*loc.alphabet);
    auto f21 = [&](const NCMatrix& X) { return flip21(X, N); };
    NCMatrix Shat21 = flip21(red.Shat12, N);
    NCMatrix W = tensor_left(red.S, N) * Shat21;
    NCMatrix Lft = tensor_right(red.S, N) * red.Shat12;
    NCMatrix Y21 = f21(red.Y12), Y21inv = f21(red.Y12inv);
    NCMatrix R21inv = m.R21inv;

    GMatrix Rt{{{1, 0}, red.Y12}, {{0, 1}, Y21inv.scaled(ScalarQ(-1))}};
    GMatrix M1 = graded_L(m.Lc, 2, 0, [&](const NCMatrix& X) { return tensor_left(red.S * X * sg, N); });
    GMatrix M2 = graded_L(m.Lc, 2, 1, [&](const NCMatrix& X) { return tensor_right(red.S * X * sg, N); });

    if (printed) {
        GMatrix Rz{{{1, 0}, m.R12}, {{0, 1}, R21inv.scaled(ScalarQ(-1))}};
        GMatrix L1 = graded_L(m.Lc, 2, 0, [&](const NCMatrix& X) { return tensor_left(X, N); });
        GMatrix L2 = graded_L(m.Lc, 2, 1, [&](const NCMatrix& X) { return tensor_right(X, N); });
        GMatrix K1 = gmul(gconst(red.Y12inv, 2), graded_Z(red, ScalarQ(1), 2, 0));
        GMatrix K2 = gapply(gmul(gconst(red.Y12inv, 2), graded_Z(red, ScalarQ(1), 2, 1)), f21);
        GMatrix Wg = gconst(W, 2), Lg = gconst(Lft, 2);
        GMatrix Al = gmul(gmul(gmul(gmul(gmul(Rt, K1), M1), K2), M2), Wg);
        GMatrix Ar = gmul(gmul(gmul(Lg, Rz), L1), L2);
        ctx.add_graded("closed-A", "R~ K12(z1) M1(z1) K21(z2) M2(z2) (S(x)I) Shat21 = (I(x)S) Shat12 R(z1,z2) L1(z1) L2(z2)",
                       gadd(Al, Ar, ScalarQ(-1)), N);
        GMatrix Bl = gmul(gmul(gmul(gmul(gmul(K2, M2), K1), M1), Rt), Wg);
        GMatrix Br = gmul(gmul(gmul(Lg, L2), L1), Rz);
        ctx.add_graded("closed-B", "K21(z2) M2(z2) K12(z1) M1(z1) R~ (S(x)I) Shat21 = (I(x)S) Shat12 L2(z2) L1(z1) R(z1,z2)",
                       gadd(Bl, Br, ScalarQ(-1)), N);
    }
    if (derived) {
        GMatrix Z1 = graded_Z(red, ScalarQ::qinv(), 2, 0);
        GMatrix Z2 = gapply(graded_Z(red, ScalarQ::qinv(), 2, 1), f21);
        GMatrix Mc1 = gmul(gmul(Z1, M1), gconst(Y21, 2));
        GMatrix Mc2 = gmul(gmul(Z2, M2), gconst(red.Y12, 2));
        GMatrix l = gmul(gmul(Rt, Mc1), Mc2);
        GMatrix r = gmul(gmul(Mc2, Mc1), Rt);
        ctx.add_graded("closed-derived", "R~ Mc1(z1) Mc2(z2) = Mc2(z2) Mc1(z1) R~", gadd(l, r, ScalarQ(-1)), N);
    }
    rep.engine_stats = base_stats(prover);
    return rep;
}

}  // namespace qsep
