#include "qsep/ncalg.hpp"

#include <json.hpp>

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace qsep {

using json = nlohmann::json;

bool GenId::operator<(const GenId& o) const {
    return std::tie(kind, a, i, j) < std::tie(o.kind, o.a, o.i, o.j);
}
bool GenId::operator==(const GenId& o) const {
    return kind == o.kind && a == o.a && i == o.i && j == o.j;
}

Alphabet::Alphabet(int N, int n) : N_(N), n_(n) {
    if (N < 2 || n < 1) throw std::invalid_argument("Alphabet: need N >= 2, n >= 1");
    // leading coefficient mu: lower triangular, mu_11 = 0
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= i; ++j)
            if (!(i == 1 && j == 1)) add({GenKind::Mu, 0, i, j});
    for (int a = 0; a < n; ++a)
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j) add({GenKind::Lcoef, a, i, j});
}

void Alphabet::add(const GenId& g) {
    if (gens_.size() >= 0xFFFF) throw std::length_error("alphabet too large");
    index_[g] = gens_.size();
    gens_.push_back(g);
    by_name_[name(gens_.size() - 1)] = gens_.size() - 1;
}

void Alphabet::add_sigma() {
    if (localized_) throw std::logic_error("localization already enabled");
    for (int i = 1; i <= N_; ++i)
        for (int j = 1; j <= N_; ++j) add({GenKind::SigmaInv, 0, i, j});
    localized_ = true;
}

char16_t Alphabet::letter(const GenId& g) const {
    auto it = index_.find(g);
    if (it == index_.end()) throw std::out_of_range("generator not in alphabet");
    return static_cast<char16_t>(it->second);
}

std::string Alphabet::name(size_t k) const {
    const GenId& g = gens_.at(k);
    std::string ij = std::to_string(g.i) + std::to_string(g.j);
    if (N_ >= 10) ij = std::to_string(g.i) + "." + std::to_string(g.j);
    switch (g.kind) {
        case GenKind::Mu: return "m" + ij;
        case GenKind::Lcoef: return "L" + std::to_string(g.a) + "_" + ij;
        case GenKind::SigmaInv: return "s" + ij;
    }
    return "?";
}

std::vector<std::string> Alphabet::names() const {
    std::vector<std::string> r;
    for (size_t k = 0; k < gens_.size(); ++k) r.push_back(name(k));
    return r;
}

std::string Alphabet::word_str(const Word& w) const {
    if (w.empty()) return "1";
    std::string s;
    for (size_t k = 0; k < w.size(); ++k) {
        if (k) s += "*";
        s += name(w[k]);
    }
    return s;
}

Word Alphabet::parse_word(const std::string& s) const {
    Word w;
    if (s == "1" || s.empty()) return w;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, '*')) {
        auto it = by_name_.find(item);
        if (it == by_name_.end()) throw std::invalid_argument("unknown generator '" + item + "'");
        w.push_back(static_cast<char16_t>(it->second));
    }
    return w;
}

// ---------------------------------------------------------------------------

NCPoly::NCPoly(const ScalarQ& c) {
    if (!c.is_zero()) t_.emplace(Word(), c);
}

NCPoly NCPoly::letter(char16_t g) { return word(Word(1, g)); }

NCPoly NCPoly::word(const Word& w, const ScalarQ& c) {
    NCPoly p;
    if (!c.is_zero()) p.t_.emplace(w, c);
    return p;
}

ScalarQ NCPoly::coeff(const Word& w) const {
    auto it = t_.find(w);
    return it == t_.end() ? ScalarQ() : it->second;
}

NCPoly NCPoly::component(int deg) const {
    NCPoly r;
    for (auto& [w, c] : t_)
        if (static_cast<int>(w.size()) == deg) r.t_.emplace(w, c);
    return r;
}

void NCPoly::add_term(const Word& w, const ScalarQ& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.try_emplace(w, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
}

void NCPoly::add_product(const ScalarQ& c, const Word& l, const NCPoly& p, const Word& r) {
    if (c.is_zero()) return;
    Word w;
    for (auto& [pw, pc] : p.t_) {
        w.clear();
        w.reserve(l.size() + pw.size() + r.size());
        w += l;
        w += pw;
        w += r;
        add_term(w, c * pc);
    }
}

NCPoly& NCPoly::operator+=(const NCPoly& o) {
    for (auto& [w, c] : o.t_) add_term(w, c);
    return *this;
}

NCPoly& NCPoly::operator-=(const NCPoly& o) {
    for (auto& [w, c] : o.t_) add_term(w, -c);
    return *this;
}

NCPoly NCPoly::operator+(const NCPoly& o) const {
    NCPoly r = *this;
    r += o;
    return r;
}

NCPoly NCPoly::operator-(const NCPoly& o) const {
    NCPoly r = *this;
    r -= o;
    return r;
}

NCPoly NCPoly::operator-() const {
    NCPoly r = *this;
    for (auto& [w, c] : r.t_) c = -c;
    return r;
}

NCPoly NCPoly::operator*(const NCPoly& o) const {
    NCPoly r;
    for (auto& [w, c] : t_) r.add_product(c, w, o, Word());
    return r;
}

NCPoly NCPoly::scaled(const ScalarQ& k) const {
    NCPoly r;
    if (k.is_zero()) return r;
    for (auto& [w, c] : t_) r.t_.emplace(w, c * k);
    return r;
}

std::string NCPoly::str(const Alphabet& A) const {
    if (t_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        std::string c = it->second.str();
        bool compound = c.find_first_of("+-/", 1) != std::string::npos;
        if (compound) c = "(" + c + ")";
        std::string term;
        if (it->first.empty()) term = c;
        else if (c == "1") term = A.word_str(it->first);
        else if (c == "-1") term = "-" + A.word_str(it->first);
        else term = c + "*" + A.word_str(it->first);
        if (!first) out += " + ";
        out += term;
        first = false;
    }
    return out;
}

NCPoly commutator(const NCPoly& a, const NCPoly& b) { return a * b - b * a; }

// ---------------------------------------------------------------------------

NCMatrix NCMatrix::identity(int n) {
    NCMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = NCPoly(ScalarQ(1));
    return m;
}

NCMatrix NCMatrix::operator+(const NCMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("NCMatrix: shape mismatch");
    NCMatrix r = *this;
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
    return r;
}

NCMatrix NCMatrix::operator-(const NCMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("NCMatrix: shape mismatch");
    NCMatrix r = *this;
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
    return r;
}

NCMatrix NCMatrix::operator*(const NCMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("NCMatrix: shape mismatch in product");
    NCMatrix r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const NCPoly& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const NCPoly& b = o(k, j);
                if (b.is_zero()) continue;
                // entry order follows row-by-column: a_ik b_kj
                for (auto& [w, c] : a.terms()) r(i, j).add_product(c, w, b, Word());
            }
        }
    return r;
}

NCMatrix NCMatrix::scaled(const ScalarQ& k) const {
    NCMatrix r = *this;
    for (auto& x : r.e_) x = x.scaled(k);
    return r;
}

bool NCMatrix::is_zero() const {
    for (auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

NCMatrix tensor_left(const NCMatrix& x, int N) {
    NCMatrix r(x.rows() * N, x.cols() * N);
    for (int i = 0; i < x.rows(); ++i)
        for (int k = 0; k < x.cols(); ++k)
            for (int j = 0; j < N; ++j) r(i * N + j, k * N + j) = x(i, k);
    return r;
}

NCMatrix tensor_right(const NCMatrix& x, int N) {
    NCMatrix r(N * x.rows(), N * x.cols());
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < x.rows(); ++j)
            for (int l = 0; l < x.cols(); ++l) r(i * x.rows() + j, i * x.cols() + l) = x(j, l);
    return r;
}

NCMatrix flip21(const NCMatrix& x, int N) {
    NCMatrix r(x.rows(), x.cols());
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) r(j * N + i, l * N + k) = x(i * N + j, k * N + l);
    return r;
}

NCMatrix from_constant(const CMatrix& m) {
    NCMatrix r(m.rows(), m.cols());
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            if (!m(i, j).is_constant()) throw std::invalid_argument("from_constant: entry depends on variables");
            r(i, j) = NCPoly(m(i, j).constant_term());
        }
    return r;
}

GMatrix gmul(const GMatrix& a, const GMatrix& b) {
    GMatrix r;
    for (auto& [ga, A] : a)
        for (auto& [gb, B] : b) {
            Grade g(ga.size());
            for (size_t k = 0; k < g.size(); ++k) g[k] = ga[k] + gb[k];
            NCMatrix P = A * B;
            auto it = r.find(g);
            if (it == r.end()) r.emplace(g, std::move(P));
            else it->second = it->second + P;
        }
    return r;
}

GMatrix gadd(const GMatrix& a, const GMatrix& b, const ScalarQ& cb) {
    GMatrix r = a;
    for (auto& [g, B] : b) {
        NCMatrix X = cb.is_one() ? B : B.scaled(cb);
        auto it = r.find(g);
        if (it == r.end()) r.emplace(g, std::move(X));
        else it->second = it->second + X;
    }
    return r;
}

GMatrix gconst(const NCMatrix& m, size_t nvars) { return {{Grade(nvars, 0), m}}; }

GMatrix gapply(const GMatrix& a, const std::function<NCMatrix(const NCMatrix&)>& f) {
    GMatrix r;
    for (auto& [g, A] : a) r.emplace(g, f(A));
    return r;
}

GMatrix to_graded(const CMatrix& m, const std::vector<std::string>& grade_vars,
                  const std::map<std::string, NCPoly>& subst) {
    const auto& vars = *m.vars();
    std::vector<int> gidx;
    for (auto& v : grade_vars) {
        int k = vars.index_of(v);
        if (k < 0) throw std::invalid_argument("to_graded: unknown variable " + v);
        gidx.push_back(k);
    }
    std::vector<const NCPoly*> sub(vars.size(), nullptr);
    for (size_t k = 0; k < vars.size(); ++k) {
        auto it = subst.find(vars[k]);
        if (it != subst.end()) sub[k] = &it->second;
    }
    GMatrix r;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
            for (auto& [e, c] : m(i, j).terms()) {
                Grade g;
                for (int k : gidx) g.push_back(e[k]);
                NCPoly val(c);
                for (size_t k = 0; k < e.size(); ++k) {
                    if (!e[k] || std::find(gidx.begin(), gidx.end(), static_cast<int>(k)) != gidx.end()) continue;
                    if (!sub[k]) throw std::invalid_argument("to_graded: no substitution for " + vars[k]);
                    for (int p = 0; p < e[k]; ++p) val = val * *sub[k];
                }
                auto it = r.find(g);
                if (it == r.end()) it = r.emplace(g, NCMatrix(m.rows(), m.cols())).first;
                it->second(i, j) += val;
            }
    return r;
}

// ---------------------------------------------------------------------------

void RelationSet::add(NCPoly p, std::string prov) {
    if (p.is_zero()) return;
    if (!p.homogeneous()) homogeneous = false;
    rels.push_back(std::move(p));
    provenance.push_back(std::move(prov));
}

NCMatrix sigma_matrix(const Alphabet& A) {
    if (!A.localized()) throw std::logic_error("sigma_matrix: localization not enabled");
    int N = A.N();
    NCMatrix s(N, N);
    for (int i = 1; i <= N; ++i)
        for (int j = 1; j <= N; ++j) s(i - 1, j - 1) = NCPoly::letter(A.letter({GenKind::SigmaInv, 0, i, j}));
    return s;
}

RelationSet enable_localization(const RelationSet& rels, const NCMatrix& S) {
    if (rels.alphabet->localized()) throw std::logic_error("localization already enabled");
    RelationSet r = rels;
    r.alphabet = std::make_shared<Alphabet>(*rels.alphabet);
    r.alphabet->add_sigma();
    NCMatrix sg = sigma_matrix(*r.alphabet);
    int N = S.rows();
    NCMatrix A = S * sg, B = sg * S;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            NCPoly d(ScalarQ(i == j ? 1 : 0));
            r.rels.push_back(A(i, j) - d);
            r.provenance.push_back("loc S*sigma (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            NCPoly d(ScalarQ(i == j ? 1 : 0));
            r.rels.push_back(B(i, j) - d);
            r.provenance.push_back("loc sigma*S (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
        }
    r.homogeneous = false;
    return r;
}

// ---------------------------------------------------------------------------
// certificates

static json poly_json(const NCPoly& p, const Alphabet& A) {
    json arr = json::array();
    for (auto& [w, c] : p.terms()) arr.push_back(json::array({A.word_str(w), c.raw()}));
    return arr;
}

static NCPoly poly_from_json(const json& j, const Alphabet& A) {
    NCPoly p;
    for (auto& t : j) p.add_term(A.parse_word(t.at(0).get<std::string>()), ScalarQ::from_raw(t.at(1).get<std::string>()));
    return p;
}

static std::string rel_ref(int r) { return r >= 0 ? "B" + std::to_string(r) : "D" + std::to_string(-r - 1); }

static int parse_ref(const std::string& s) {
    if (s.size() < 2 || (s[0] != 'B' && s[0] != 'D')) throw std::invalid_argument("bad relation id " + s);
    int k = std::stoi(s.substr(1));
    return s[0] == 'B' ? k : -(k + 1);
}

static json terms_json(const std::vector<CertTerm>& terms, const Alphabet& A) {
    json arr = json::array();
    for (auto& t : terms) arr.push_back(json::array({A.word_str(t.left), rel_ref(t.rel), A.word_str(t.right), t.coef.raw()}));
    return arr;
}

static std::vector<CertTerm> terms_from_json(const json& j, const Alphabet& A) {
    std::vector<CertTerm> out;
    for (auto& t : j)
        out.push_back({A.parse_word(t.at(0).get<std::string>()), parse_ref(t.at(1).get<std::string>()),
                       A.parse_word(t.at(2).get<std::string>()), ScalarQ::from_raw(t.at(3).get<std::string>())});
    return out;
}

std::string Certificate::serialize() const {
    const Alphabet& A = *alphabet;
    json j;
    j["format"] = "qsep-certificate/1";
    j["alphabet"] = {{"N", A.N()}, {"n", A.n()}, {"localized", A.localized()}};
    j["context"] = context;
    json b = json::object();
    for (auto& [id, p] : base) b[rel_ref(id)] = poly_json(p, A);
    j["base"] = b;
    json ls = json::array();
    for (auto& l : lemmas)
        ls.push_back({{"id", rel_ref(-(l.id + 1))}, {"poly", poly_json(l.poly, A)}, {"terms", terms_json(l.terms, A)}});
    j["lemmas"] = ls;
    j["target"] = poly_json(target, A);
    j["terms"] = terms_json(terms, A);
    return j.dump(1);
}

Certificate Certificate::parse(const std::string& text, std::shared_ptr<Alphabet> alphabet) {
    json j = json::parse(text);
    if (j.at("format") != "qsep-certificate/1") throw std::invalid_argument("unknown certificate format");
    Certificate c;
    if (!alphabet) {
        auto& a = j.at("alphabet");
        alphabet = std::make_shared<Alphabet>(a.at("N").get<int>(), a.at("n").get<int>());
        if (a.at("localized").get<bool>()) alphabet->add_sigma();
    }
    c.alphabet = alphabet;
    const Alphabet& A = *alphabet;
    for (auto& [k, v] : j.at("context").items()) c.context[k] = v.get<std::string>();
    for (auto& [k, v] : j.at("base").items()) c.base[parse_ref(k)] = poly_from_json(v, A);
    for (auto& l : j.at("lemmas")) {
        int r = parse_ref(l.at("id").get<std::string>());
        c.lemmas.push_back({-r - 1, poly_from_json(l.at("poly"), A), terms_from_json(l.at("terms"), A)});
    }
    c.target = poly_from_json(j.at("target"), A);
    c.terms = terms_from_json(j.at("terms"), A);
    return c;
}

size_t Certificate::total_terms() const {
    size_t n = terms.size();
    for (auto& l : lemmas) n += l.terms.size();
    return n;
}

ReplayResult replay(const Certificate& c, const RelationSet* rels) {
    std::map<int, const NCPoly*> known;
    for (auto& [id, p] : c.base) {
        if (rels) {
            if (id < 0 || id >= static_cast<int>(rels->rels.size()))
                return {false, "base relation " + rel_ref(id) + " not in relation set"};
            if (!(rels->rels[id] == p)) return {false, "base relation " + rel_ref(id) + " differs from the relation set"};
        }
        known[id] = &p;
    }
    auto expand = [&](const std::vector<CertTerm>& terms, NCPoly& out, std::string& err) {
        for (auto& t : terms) {
            auto it = known.find(t.rel);
            if (it == known.end()) {
                err = "reference to unknown or later relation " + rel_ref(t.rel);
                return false;
            }
            out.add_product(t.coef, t.left, *it->second, t.right);
        }
        return true;
    };
    for (auto& l : c.lemmas) {
        NCPoly acc;
        std::string err;
        if (!expand(l.terms, acc, err)) return {false, err};
        if (!(acc == l.poly)) return {false, "lemma " + rel_ref(-(l.id + 1)) + " does not expand to its stated polynomial"};
        known[-(l.id + 1)] = &l.poly;
    }
    NCPoly acc;
    std::string err;
    if (!expand(c.terms, acc, err)) return {false, err};
    if (!(acc == c.target)) return {false, "combination does not reproduce the target"};
    return {true, "ok: " + std::to_string(c.lemmas.size()) + " lemmas, " + std::to_string(c.total_terms()) + " terms"};
}

// ---------------------------------------------------------------------------

const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Member: return "member";
        case Verdict::Inconclusive: return "inconclusive";
        case Verdict::Refuted: return "refuted";
    }
    return "?";
}

static void for_each_word(size_t G, int len, const std::function<void(const Word&)>& f) {
    Word w(len, 0);
    if (len == 0) {
        f(w);
        return;
    }
    for (;;) {
        f(w);
        int k = len - 1;
        while (k >= 0 && w[k] + 1u == G) w[k--] = 0;
        if (k < 0) return;
        ++w[k];
    }
}

MembershipResult ideal_membership(const NCPoly& target, const RelationSet& rels, int degree_bound, const Budget& budget) {
    MembershipResult res;
    res.engine = "span";
    if (target.is_zero()) {
        res.verdict = Verdict::Member;
        Certificate c;
        c.alphabet = rels.alphabet;
        res.certificate = c;
        return res;
    }
    if (target.degree() > degree_bound) throw std::invalid_argument("ideal_membership: degree bound below target degree");
    const size_t G = rels.alphabet->size();
    auto t0 = std::chrono::steady_clock::now();

    struct Row {
        NCPoly p;
        std::map<size_t, ScalarQ> combo;
    };
    struct Src {
        Word x;
        int r;
        Word y;
    };
    std::vector<Src> src;
    std::map<Word, Row, WordLess> basis;

    auto insert_row = [&](NCPoly p, size_t id) {
        std::map<size_t, ScalarQ> combo{{id, ScalarQ(1)}};
        while (!p.is_zero()) {
            auto it = basis.find(p.lead_word());
            if (it == basis.end()) break;
            ScalarQ f = p.lead_coeff() / it->second.p.lead_coeff();
            p.add_product(-f, Word(), it->second.p, Word());
            for (auto& [k, c] : it->second.combo) {
                auto& slot = combo[k];
                slot -= f * c;
                if (slot.is_zero()) combo.erase(k);
            }
        }
        if (!p.is_zero()) {
            Word lw = p.lead_word();
            basis.emplace(lw, Row{std::move(p), std::move(combo)});
        }
    };

    std::vector<int> degs;
    if (rels.homogeneous) {
        for (auto& [w, c] : target.terms()) degs.push_back(static_cast<int>(w.size()));
        degs.erase(std::unique(degs.begin(), degs.end()), degs.end());
    }
    for (size_t r = 0; r < rels.rels.size(); ++r) {
        const NCPoly& rel = rels.rels[r];
        int dr = rel.degree();
        for (int m = 0; m + dr <= degree_bound; ++m) {
            if (rels.homogeneous && std::find(degs.begin(), degs.end(), m + dr) == degs.end()) continue;
            for (int lx = 0; lx <= m; ++lx) {
                for_each_word(G, lx, [&](const Word& x) {
                    for_each_word(G, m - lx, [&](const Word& y) {
                        if (src.size() >= budget.max_rows)
                            throw BudgetError("span engine: row budget exceeded (" + std::to_string(src.size()) +
                                              " rows, " + std::to_string(basis.size()) + " pivots)");
                        src.push_back({x, static_cast<int>(r), y});
                        NCPoly p;
                        p.add_product(ScalarQ(1), x, rel, y);
                        insert_row(std::move(p), src.size() - 1);
                    });
                });
            }
        }
    }
    // reduce the target
    NCPoly t = target;
    std::map<size_t, ScalarQ> combo;
    while (!t.is_zero()) {
        auto it = basis.find(t.lead_word());
        if (it == basis.end()) break;
        ScalarQ f = t.lead_coeff() / it->second.p.lead_coeff();
        t.add_product(-f, Word(), it->second.p, Word());
        for (auto& [k, c] : it->second.combo) {
            auto& slot = combo[k];
            slot += f * c;
            if (slot.is_zero()) combo.erase(k);
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.stats = "rows=" + std::to_string(src.size()) + " pivots=" + std::to_string(basis.size()) +
                " seconds=" + std::to_string(secs);
    res.residue = t;
    if (!t.is_zero()) {
        res.verdict = Verdict::Inconclusive;
        return res;
    }
    Certificate c;
    c.alphabet = rels.alphabet;
    c.target = target;
    for (auto& [k, coef] : combo) {
        c.terms.push_back({src[k].x, src[k].r, src[k].y, coef});
        c.base[src[k].r] = rels.rels[src[k].r];
    }
    res.verdict = Verdict::Member;
    res.certificate = std::move(c);
    return res;
}

NormalFormResult normal_form(const NCPoly& target, const RelationSet& rels, size_t max_steps) {
    std::unordered_map<Word, int> lead;
    size_t lo = 1000, hi = 0;
    for (size_t r = 0; r < rels.rels.size(); ++r) {
        const Word& w = rels.rels[r].lead_word();
        if (lead.emplace(w, static_cast<int>(r)).second) {
            lo = std::min(lo, w.size());
            hi = std::max(hi, w.size());
        }
    }
    NormalFormResult out;
    NCPoly work = target;
    size_t steps = 0;
    while (!work.is_zero()) {
        Word w = work.lead_word();
        ScalarQ c = work.lead_coeff();
        int hit = -1;
        size_t at = 0, len = 0;
        for (size_t s = 0; s < w.size() && hit < 0; ++s)
            for (size_t l = lo; l <= hi && s + l <= w.size(); ++l) {
                auto it = lead.find(w.substr(s, l));
                if (it != lead.end()) {
                    hit = it->second;
                    at = s;
                    len = l;
                    break;
                }
            }
        if (hit < 0) {
            out.remainder.add_term(w, c);
            work.add_term(w, -c);
            continue;
        }
        if (++steps > max_steps) {
            out.exhausted = true;
            out.remainder += work;
            return out;
        }
        const NCPoly& g = rels.rels[hit];
        ScalarQ f = c / g.lead_coeff();
        Word l = w.substr(0, at), r = w.substr(at + len);
        work.add_product(-f, l, g, r);
        out.terms.push_back({l, hit, r, f});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Groebner

bool Groebner::Pair::operator>(const Pair& o) const {
    return std::tie(degree, a, b, k) > std::tie(o.degree, o.a, o.b, o.k);
}

Groebner::Groebner(const RelationSet& rels, int max_degree, const Budget& budget)
    : rels_(rels), max_degree_(max_degree), budget_(budget) {
    start_ = std::chrono::steady_clock::now();
    run();
}

void Groebner::check_budget() const {
    if (active_count_ > budget_.max_elements) throw BudgetError("element budget exceeded");
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    if (secs > budget_.max_seconds) throw BudgetError("time budget exceeded");
}

void Groebner::reduce_tracked(NCPoly& p, std::vector<CertTerm>& out) const {
    NCPoly result;
    while (!p.is_zero()) {
        const Word w = p.lead_word();
        const ScalarQ c = p.lead_coeff();
        int hit = -1;
        size_t at = 0, len = 0;
        for (size_t s = 0; s < w.size() && hit < 0; ++s)
            for (size_t l = min_lead_; l <= max_lead_ && s + l <= w.size(); ++l) {
                auto it = lead_.find(w.substr(s, l));
                if (it != lead_.end()) {
                    hit = it->second;
                    at = s;
                    len = l;
                    break;
                }
            }
        if (hit < 0) {
            result.add_term(w, c);
            p.add_term(w, -c);
            continue;
        }
        Word l = w.substr(0, at), r = w.substr(at + len);
        p.add_product(-c, l, elems_[hit].p, r);
        out.push_back({l, -(hit + 1), r, c});
    }
    p = std::move(result);
}

int Groebner::insert(NCPoly p, std::vector<CertTerm> deriv) {
    std::vector<CertTerm> red;
    reduce_tracked(p, red);
    if (p.is_zero()) {
        ++zero_reductions_;
        return -1;
    }
    for (auto& t : red) deriv.push_back({t.left, t.rel, t.right, -t.coef});
    ScalarQ inv = p.lead_coeff().inverse();
    if (!inv.is_one()) {
        p = p.scaled(inv);
        for (auto& t : deriv) t.coef = t.coef * inv;
    }
    int id = static_cast<int>(elems_.size());
    const Word lw = p.lead_word();
    elems_.push_back({std::move(p), std::move(deriv), true});
    // older elements whose leading word contains the new one get re-reduced
    std::vector<int> redo;
    for (auto it = lead_.begin(); it != lead_.end();) {
        if (it->first.size() > lw.size() && it->first.find(lw) != Word::npos) {
            redo.push_back(it->second);
            elems_[it->second].active = false;
            --active_count_;
            it = lead_.erase(it);
        } else {
            ++it;
        }
    }
    lead_[lw] = id;
    min_lead_ = std::min(min_lead_, lw.size());
    max_lead_ = std::max(max_lead_, lw.size());
    ++active_count_;
    add_pairs(id);
    std::sort(redo.begin(), redo.end());
    for (int e : redo) insert(elems_[e].p, {{Word(), -(e + 1), Word(), ScalarQ(1)}});
    check_budget();
    return id;
}

void Groebner::add_pairs(int e) {
    const Word& le = elems_[e].p.lead_word();
    for (auto& [lf, f] : lead_) {
        for (int pass = 0; pass < (f == e ? 1 : 2); ++pass) {
            const Word& u = pass ? lf : le;
            const Word& v = pass ? le : lf;
            int a = pass ? f : e, b = pass ? e : f;
            size_t m = std::min(u.size(), v.size());
            for (size_t k = 1; k < m || (a == b && k < u.size() && k < m); ++k) {
                if (u.compare(u.size() - k, k, v, 0, k) != 0) continue;
                int deg = static_cast<int>(u.size() + v.size() - k);
                if (deg > max_degree_) {
                    ++dropped_pairs_;
                    continue;
                }
                heap_.push_back({deg, a, b, static_cast<int>(k)});
                std::push_heap(heap_.begin(), heap_.end(), std::greater<Pair>());
            }
        }
    }
}

void Groebner::run() {
    std::vector<int> order(rels_.rels.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        return WordLess()(rels_.rels[x].lead_word(), rels_.rels[y].lead_word());
    });
    try {
        for (int r : order) {
            if (rels_.rels[r].is_zero()) continue;
            insert(rels_.rels[r], {{Word(), r, Word(), ScalarQ(1)}});
        }
        while (!heap_.empty()) {
            std::pop_heap(heap_.begin(), heap_.end(), std::greater<Pair>());
            Pair pr = heap_.back();
            heap_.pop_back();
            if (!elems_[pr.a].active || !elems_[pr.b].active) continue;
            ++spairs_;
            const NCPoly& ga = elems_[pr.a].p;
            const NCPoly& gb = elems_[pr.b].p;
            const Word& u = ga.lead_word();
            const Word& v = gb.lead_word();
            Word vr = v.substr(pr.k), ul = u.substr(0, u.size() - pr.k);
            NCPoly s;
            s.add_product(ScalarQ(1), Word(), ga, vr);
            s.add_product(ScalarQ(-1), ul, gb, Word());
            insert(std::move(s), {{Word(), -(pr.a + 1), vr, ScalarQ(1)}, {ul, -(pr.b + 1), Word(), ScalarQ(-1)}});
        }
        complete_ = true;
    } catch (const BudgetError&) {
        complete_ = false;
    }
}

std::string Groebner::stats() const {
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    std::ostringstream os;
    os << "basis=" << active_count_ << " derived=" << elems_.size() << " spairs=" << spairs_
       << " zero_reductions=" << zero_reductions_ << " max_degree=" << max_degree_
       << " complete=" << (complete_ ? "yes" : "no") << " full_basis=" << (full_basis() ? "yes" : "no")
       << " seconds=" << secs;
    return os.str();
}

NormalFormResult Groebner::reduce(const NCPoly& target) const {
    NormalFormResult r;
    NCPoly p = target;
    reduce_tracked(p, r.terms);
    r.remainder = std::move(p);
    return r;
}

Certificate Groebner::make_certificate(const NCPoly& target, const std::vector<CertTerm>& terms) const {
    Certificate c;
    c.alphabet = rels_.alphabet;
    c.target = target;
    c.terms = terms;
    std::vector<char> need(elems_.size(), 0);
    std::vector<int> stack;
    auto visit = [&](const std::vector<CertTerm>& ts) {
        for (auto& t : ts) {
            if (t.rel >= 0) {
                c.base[t.rel] = rels_.rels[t.rel];
            } else {
                int k = -t.rel - 1;
                if (!need[k]) {
                    need[k] = 1;
                    stack.push_back(k);
                }
            }
        }
    };
    visit(terms);
    while (!stack.empty()) {
        int k = stack.back();
        stack.pop_back();
        visit(elems_[k].deriv);
    }
    for (size_t k = 0; k < elems_.size(); ++k)
        if (need[k]) c.lemmas.push_back({static_cast<int>(k), elems_[k].p, elems_[k].deriv});
    return c;
}

MembershipResult Groebner::decide(const NCPoly& target) const {
    MembershipResult res;
    res.engine = "groebner";
    NormalFormResult nf = reduce(target);
    res.residue = nf.remainder;
    res.stats = stats();
    if (nf.remainder.is_zero()) {
        res.verdict = Verdict::Member;
        res.certificate = make_certificate(target, nf.terms);
    } else if ((rels_.homogeneous && complete_ && target.degree() <= max_degree_) || full_basis()) {
        res.verdict = Verdict::Refuted;
    } else {
        res.verdict = Verdict::Inconclusive;
    }
    return res;
}

// ---------------------------------------------------------------------------

std::shared_ptr<const VarList> commutative_vars(const Alphabet& A) { return make_vars(A.names()); }

CPoly commutative_image(const NCPoly& p, const Alphabet&, std::shared_ptr<const VarList> vars) {
    CPoly r(vars);
    Exponents e(vars->size());
    for (auto& [w, c] : p.terms()) {
        std::fill(e.begin(), e.end(), 0);
        for (char16_t g : w) ++e[g];
        r.add_term(e, ScalarQ(c.specialize_q(1)));
    }
    return r;
}

}  // namespace qsep
