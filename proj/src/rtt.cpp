#include "qsep/rtt.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qsep {

using json = nlohmann::json;

const char* shift_name(QdetShift s) { return s == QdetShift::Printed ? "printed" : "doubled"; }

QdetShift parse_shift(const std::string& s) {
    if (s == "printed") return QdetShift::Printed;
    if (s == "doubled") return QdetShift::Doubled;
    throw std::invalid_argument("unknown q-det shift '" + s + "' (printed|doubled)");
}

GMatrix QuantumModel::L() const {
    GMatrix g;
    for (int a = 0; a <= n; ++a) g.emplace(Grade{a}, Lc[a]);
    return g;
}

static std::string ij(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

// canonical key: the relation scaled to be monic
static NCPoly monic(const NCPoly& p) { return p.scaled(p.lead_coeff().inverse()); }

static std::string poly_key(const NCPoly& p) {
    std::string k;
    for (auto& [w, c] : p.terms()) {
        for (char16_t g : w) k += std::to_string(g) + ".";
        k += ":" + c.raw() + ";";
    }
    return k;
}

QuantumModel build_model(int N, int n, RReading reading, bool center_fix) {
    QuantumModel m;
    m.N = N;
    m.n = n;
    m.reading = reading;
    m.alphabet = std::make_shared<Alphabet>(N, n);
    m.rels.alphabet = m.alphabet;
    const Alphabet& A = *m.alphabet;
    for (int a = 0; a <= n; ++a) {
        NCMatrix X(N, N);
        for (int i = 1; i <= N; ++i)
            for (int j = 1; j <= N; ++j) {
                if (a < n) X(i - 1, j - 1) = NCPoly::letter(A.letter({GenKind::Lcoef, a, i, j}));
                else if (i >= j && !(i == 1 && j == 1)) X(i - 1, j - 1) = NCPoly::letter(A.letter({GenKind::Mu, 0, i, j}));
            }
        m.Lc.push_back(std::move(X));
    }
    CMatrix R = constant_R(N, reading);
    m.R12 = from_constant(R);
    m.R21inv = from_constant(flip21(R).inverse_constant());

    // (A (x) I)(I (x) B) and (I (x) B)(A (x) I)
    std::vector<NCMatrix> L1, L2;
    for (auto& X : m.Lc) {
        L1.push_back(tensor_left(X, N));
        L2.push_back(tensor_right(X, N));
    }
    std::set<std::string> seen;
    const int NN = N * N;
    for (int a = 0; a <= n + 1; ++a)
        for (int b = 0; b <= n + 1; ++b) {
            NCMatrix acc(NN, NN);
            if (a >= 1 && b <= n) {
                acc = acc + m.R12 * (L1[a - 1] * L2[b]);
                acc = acc - (L2[b] * L1[a - 1]) * m.R12;
            }
            if (b >= 1 && a <= n) {
                acc = acc - m.R21inv * (L1[a] * L2[b - 1]);
                acc = acc + (L2[b - 1] * L1[a]) * m.R21inv;
            }
            for (int r = 0; r < NN; ++r)
                for (int c = 0; c < NN; ++c) {
                    const NCPoly& e = acc(r, c);
                    if (e.is_zero()) continue;
                    if (!e.homogeneous() || e.degree() != 2)
                        throw std::logic_error("RTT relation is not homogeneous quadratic");
                    NCPoly key = monic(e);
                    if (!seen.insert(poly_key(key)).second) continue;
                    m.rels.add(key, "RTT z1^" + std::to_string(a) + " z2^" + std::to_string(b) + " entry " +
                                        ij(r / N + 1, r % N + 1) + "x" + ij(c / N + 1, c % N + 1));
                }
        }
    if (center_fix) {
        BiFamily Q = qdet(m, false, QdetShift::Doubled);
        auto it = Q.find({0, N * n - 1});
        if (it == Q.end() || it->second.is_zero()) throw std::logic_error("center fix: q-det coefficient vanishes");
        m.rels.add(monic(it->second), "q-det coefficient z^" + std::to_string(N * n - 1) + " = 0");
        m.center_fix = true;
    }
    return m;
}

int permutation_length(const std::vector<int>& p) {
    int l = 0;
    for (size_t i = 0; i < p.size(); ++i)
        for (size_t j = i + 1; j < p.size(); ++j)
            if (p[i] > p[j]) ++l;
    return l;
}

BiFamily qdet(const QuantumModel& m, bool offset_w, QdetShift shift) {
    const int N = m.N, n = m.n;
    const int mult = shift == QdetShift::Doubled ? 2 : 1;
    std::vector<int> perm(N);
    std::iota(perm.begin(), perm.end(), 0);
    BiFamily out;
    do {
        int l = permutation_length(perm);
        ScalarQ sign = ScalarQ(l % 2 ? -1 : 1) * ScalarQ::q_pow(l);
        BiFamily acc{{{0, 0}, NCPoly(sign)}};
        for (int i = 0; i < N; ++i) {
            // row i+1 evaluated at z q^{mult (N+1-2(i+1))/2}
            int sh = mult * (N - 1 - 2 * i);
            BiFamily next;
            for (auto& [wz, p] : acc) {
                for (int a = 0; a <= n; ++a) {
                    const NCPoly& e = m.Lc[a](i, perm[i]);
                    if (e.is_zero()) continue;
                    auto& slot = next[{wz.first, wz.second + a}];
                    slot += p * e.scaled(ScalarQ::s_pow(a * sh));
                }
                if (offset_w && perm[i] == i) next[{wz.first + 1, wz.second}] += p;
            }
            acc = std::move(next);
        }
        for (auto& [k, v] : acc) out[k] += v;
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero()) it = out.erase(it);
        else ++it;
    }
    return out;
}

// ---------------------------------------------------------------------------

Prover::Prover(RelationSet rels, int degree, Budget budget)
    : rels_(std::move(rels)), degree_(degree), budget_(budget) {}

const Groebner& Prover::groebner() {
    if (!gb_) gb_ = std::make_unique<Groebner>(rels_, degree_, budget_);
    return *gb_;
}

std::string Prover::stats() { return groebner().stats(); }

MembershipResult Prover::decide(const NCPoly& target) {
    if (target.is_zero()) {
        MembershipResult r;
        r.verdict = Verdict::Member;
        r.engine = "trivial";
        Certificate c;
        c.alphabet = rels_.alphabet;
        r.certificate = std::move(c);
        return r;
    }
    MembershipResult r = groebner().decide(target);
    if (r.verdict == Verdict::Inconclusive && target.degree() <= 3) {
        // small targets: exact span search as a second opinion
        try {
            Budget b = budget_;
            b.max_rows = std::min<size_t>(b.max_rows, 20000);
            MembershipResult s = ideal_membership(target, rels_, std::max(target.degree(), 3), b);
            if (s.verdict == Verdict::Member) return s;
        } catch (const BudgetError&) {
        }
    }
    return r;
}

size_t CheckReport::count(const std::string& status) const {
    return std::count_if(records.begin(), records.end(), [&](const CheckRecord& r) { return r.status == status; });
}

std::string CertificateSink::write(const Certificate& c, const std::string& stem) const {
    if (directory.empty()) return "";
    std::filesystem::create_directories(directory);
    std::string name = stem;
    for (char& ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
    std::string path = (std::filesystem::path(directory) / (name + ".cert.json")).string();
    std::ofstream(path) << c.serialize();
    return path;
}

CheckRecord record_from(const std::string& check, const std::string& anchor, const std::string& entry,
                        const NCPoly& target, Prover& prover, const CertificateSink* sink, bool check_q1) {
    CheckRecord rec{check, anchor, entry};
    auto t0 = std::chrono::steady_clock::now();
    if (check_q1) {
        const Alphabet& A = *prover.relations().alphabet;
        rec.q1_ok = commutative_image(target, A, commutative_vars(A)).is_zero();
    }
    MembershipResult r = prover.decide(target);
    rec.status = verdict_name(r.verdict);
    rec.detail = r.engine;
    if (r.verdict == Verdict::Member && r.certificate) {
        ReplayResult rp = replay(*r.certificate, &prover.relations());
        if (!rp.ok) {
            rec.status = "error";
            rec.detail = "certificate replay failed: " + rp.message;
        } else if (sink) {
            Certificate c = *r.certificate;
            c.context["check"] = check;
            c.context["entry"] = entry;
            rec.certificate_ref = sink->write(c, check + "_" + entry);
        }
    } else if (r.verdict != Verdict::Member) {
        rec.detail += "; normal form has " + std::to_string(r.residue.size()) + " terms";
        if (r.verdict == Verdict::Refuted)
            rec.detail += prover.groebner().full_basis() ? "; full Groebner basis" : "; degree-complete homogeneous basis";
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rec;
}

static std::string tname(int k, int j) { return "t" + std::to_string(k) + "^(" + std::to_string(j) + ")"; }

CheckReport check_integrals_commute(const QuantumModel& m, int degree_bound, QdetShift shift, bool with_generators,
                                    const CertificateSink* sink) {
    CheckReport rep{"integrals-commute", m.N, m.n, reading_name(m.reading)};
    BiFamily Q = qdet(m, true, shift);
    std::vector<std::pair<std::string, NCPoly>> ts;
    for (auto& [wz, p] : Q) {
        if (wz.first == m.N) continue;  // the constant w^N term
        ts.push_back({tname(m.N - wz.first, wz.second), p});
    }
    Prover prover(m.rels, degree_bound);
    const std::string anchor = "coefficients of q-det(wI+L(z)) commute";
    for (size_t a = 0; a < ts.size(); ++a)
        for (size_t b = a + 1; b < ts.size(); ++b)
            rep.records.push_back(record_from("integrals", anchor, ts[a].first + "," + ts[b].first,
                                              commutator(ts[a].second, ts[b].second), prover, sink));
    if (with_generators) {
        const Alphabet& A = *m.alphabet;
        for (auto& [name, t] : ts)
            for (size_t g = 0; g < A.size(); ++g)
                rep.records.push_back(record_from("center", "q-det coefficient commutes with generator",
                                                  name + "," + A.name(g), commutator(t, NCPoly::letter(g)), prover, sink));
    }
    rep.engine_stats = prover.stats();
    return rep;
}

CheckRecord check_integral_pair(const QuantumModel& m, int k1, int j1, int k2, int j2, int degree_bound,
                                QdetShift shift) {
    BiFamily Q = qdet(m, true, shift);
    auto get = [&](int k, int j) {
        auto it = Q.find({m.N - k, j});
        return it == Q.end() ? NCPoly() : it->second;
    };
    Prover prover(m.rels, degree_bound);
    return record_from("integrals", "coefficients of q-det(wI+L(z)) commute", tname(k1, j1) + "," + tname(k2, j2),
                       commutator(get(k1, j1), get(k2, j2)), prover);
}

CheckReport check_xx_relations(const QuantumModel& m, int degree_bound, const CertificateSink* sink) {
    CheckReport rep{"xx", m.N, m.n, reading_name(m.reading)};
    Prover prover(m.rels, degree_bound);
    const NCMatrix& mu = m.mu();
    const int N = m.N;
    const ScalarQ q = ScalarQ::q();
    auto qd = [&](bool on) { return on ? q : ScalarQ(1); };
    for (int j = 2; j <= N; ++j) {
        const NCPoly& mjj = mu(j - 1, j - 1);
        for (int a = 1; a <= N; ++a)
            for (int b = 1; b <= N; ++b) {
                const NCPoly& mab = mu(a - 1, b - 1);
                NCPoly t = (mjj * mab).scaled(qd(a == j)) - (mab * mjj).scaled(qd(b == j));
                rep.records.push_back(record_from("xx1", "mu_jj q^{E^jj} mu = mu q^{E^jj} mu_jj",
                                                  "j=" + std::to_string(j) + " " + ij(a, b), t, prover, sink));
            }
    }
    for (int j = 2; j <= N; ++j) {
        const NCPoly& mjj = mu(j - 1, j - 1);
        for (int b = 1; b <= N; ++b) {
            NCPoly nub = m.Lc[m.n - 1](0, b - 1);
            std::string e = "j=" + std::to_string(j) + " b=" + std::to_string(b);
            rep.records.push_back(record_from("xx2", "nu mu_jj = mu_jj nu", e, nub * mjj - mjj * nub, prover, sink));
            rep.records.push_back(record_from("xx2-twisted", "nu q^{E^jj} mu_jj = mu_jj nu", e,
                                              (nub * mjj).scaled(qd(b == j)) - mjj * nub, prover, sink));
        }
    }
    rep.engine_stats = prover.stats();
    return rep;
}

std::string report_json(const CheckReport& r) {
    json j;
    j["check"] = r.name;
    j["N"] = r.N;
    j["n"] = r.n;
    j["reading"] = r.reading;
    j["engine"] = r.engine_stats;
    json recs = json::array();
    for (auto& x : r.records)
        recs.push_back({{"check", x.check},
                        {"anchor", x.anchor},
                        {"entry", x.entry},
                        {"status", x.status},
                        {"detail", x.detail},
                        {"certificate_ref", x.certificate_ref},
                        {"q1_ok", x.q1_ok},
                        {"wall_time", x.wall_time}});
    j["records"] = recs;
    std::map<std::string, int> summary;
    for (auto& x : r.records) ++summary[x.status];
    j["summary"] = summary;
    return j.dump(2);
}

}  // namespace qsep
