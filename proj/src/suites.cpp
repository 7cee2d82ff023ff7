#include "qsep/suites.hpp"

#include <chrono>
#include <cstdlib>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "qsep/classical.hpp"
#include "qsep/geometry.hpp"
#include "qsep/reduction.hpp"
#include "qsep/rmatrix.hpp"
#include "qsep/rtt.hpp"

namespace qsep {

using json = nlohmann::ordered_json;

IntRange parse_range(const std::string& s) {
    auto dots = s.find("..");
    try {
        if (dots == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        IntRange r{std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
        if (r.lo > r.hi) throw std::invalid_argument("empty range");
        return r;
    } catch (const std::logic_error&) {
        throw std::invalid_argument("bad range '" + s + "' (expected K or A..B)");
    }
}

void apply_budget_env(Budget& b) {
    if (const char* v = std::getenv("QSEP_MAX_SECONDS")) b.max_seconds = std::stod(v);
    if (const char* v = std::getenv("QSEP_MAX_ELEMENTS")) b.max_elements = std::stoul(v);
    if (const char* v = std::getenv("QSEP_MAX_ROWS")) b.max_rows = std::stoul(v);
}

size_t ReportDoc::count(const std::string& status) const {
    size_t c = 0;
    for (auto& r : records) c += r.status == status;
    return c;
}

int ReportDoc::exit_code(bool allow_inconclusive) const {
    if (count("fail") || count("error")) return 1;
    if (count("inconclusive") && !allow_inconclusive) return 2;
    return 0;
}

std::string ReportDoc::to_json() const {
    json j;
    j["tool"] = "qsep";
    j["version"] = tool_version;
    const RunConfig& c = config;
    j["config"] = {{"suite", c.suite},
                   {"N", std::to_string(c.N.lo) + ".." + std::to_string(c.N.hi)},
                   {"n", std::to_string(c.n.lo) + ".." + std::to_string(c.n.hi)},
                   {"degree", c.degree},
                   {"localized_degree", c.localized_degree},
                   {"budget",
                    {{"max_elements", c.budget.max_elements},
                     {"max_rows", c.budget.max_rows},
                     {"max_seconds", c.budget.max_seconds}}},
                   {"reading", c.reading},
                   {"shat", c.shat},
                   {"center_fix", c.center_fix},
                   {"seed", c.seed},
                   {"samples", c.samples},
                   {"backend", c.backend},
                   {"gamma", c.gamma}};
    json recs = json::array();
    for (auto& r : records) {
        json x = {{"id", r.id},        {"check", r.check},   {"anchor", r.anchor},
                  {"entry", r.entry},  {"status", r.status}, {"detail", r.detail},
                  {"certificate_ref", r.certificate_ref.empty() ? json(nullptr) : json(r.certificate_ref)},
                  {"wall_time", c.deterministic ? 0.0 : r.wall_time}};
        recs.push_back(std::move(x));
    }
    j["records"] = std::move(recs);
    json summary;
    for (const char* s : {"pass", "member", "inconclusive", "fail", "error"}) summary[s] = count(s);
    summary["total"] = records.size();
    j["summary"] = summary;
    if (!c.deterministic) j["engine_stats"] = engine_stats;
    return j.dump(2);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"ybe", "classical", "quantum-core", "reduction", "closed", "geometry", "all"};
    return names;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string inst(int N, int n) { return std::to_string(N) + "," + std::to_string(n); }

struct Runner {
    const RunConfig& cfg;
    ReportDoc& doc;
    CertificateSink sink;

    void add(const std::string& suite, const std::string& instance, std::string check, std::string anchor,
             std::string entry, bool ok, std::string detail, double t) {
        ReportRecord r;
        r.id = suite + "/" + check + "/" + instance + (entry.empty() ? "" : "/" + entry);
        r.check = std::move(check);
        r.anchor = std::move(anchor);
        r.entry = std::move(entry);
        r.status = ok ? "pass" : "fail";
        r.detail = std::move(detail);
        r.wall_time = t;
        doc.records.push_back(std::move(r));
    }

    void add(const std::string& suite, const CheckReport& rep) {
        std::string instance = inst(rep.N, rep.n);
        for (auto& x : rep.records) {
            ReportRecord r;
            r.id = suite + "/" + x.check + "/" + instance + "/" + x.entry;
            r.check = x.check;
            r.anchor = x.anchor;
            r.entry = x.entry;
            r.detail = x.detail;
            r.certificate_ref = x.certificate_ref;
            r.wall_time = x.wall_time;
            if (x.status == "refuted") {
                r.status = "fail";
                r.detail = "refuted: " + r.detail;
            } else {
                r.status = x.status;
            }
            if (!x.q1_ok) {
                r.detail += (r.detail.empty() ? "" : "; ") + std::string("q=1 commutative image does not vanish");
                if (r.status == "member" || r.status == "pass") r.status = "error";
            }
            doc.records.push_back(std::move(r));
        }
        doc.engine_stats.push_back(suite + " " + instance + ": " + rep.engine_stats);
    }

    QuantumModel model(int N, int n) const { return build_model(N, n, parse_reading(cfg.reading), cfg.center_fix); }

    ReductionOptions options() const {
        ReductionOptions o;
        o.degree_bound = cfg.degree;
        o.localized_degree = cfg.localized_degree;
        o.budget = cfg.budget;
        o.sink = cfg.cert_dir.empty() ? nullptr : &sink;
        return o;
    }

    template <class F>
    void each_instance(int maxN, int maxn, F f) {
        if (cfg.N.lo < 2 || cfg.N.hi > maxN || cfg.n.lo < 1 || cfg.n.hi > maxn)
            throw std::invalid_argument("instance range outside desk scale (N in 2.." + std::to_string(maxN) +
                                        ", n in 1.." + std::to_string(maxn) + ")");
        for (int N = cfg.N.lo; N <= cfg.N.hi; ++N)
            for (int n = cfg.n.lo; n <= cfg.n.hi; ++n) f(N, n);
    }

    void ybe() {
        if (cfg.N.lo < 2 || cfg.N.hi > 5) throw std::invalid_argument("ybe: N must be in 2..5");
        for (int N = cfg.N.lo; N <= cfg.N.hi; ++N) {
            auto t0 = Clock::now();
            YbeReport y = check_ybe(N, parse_reading(cfg.reading));
            add("ybe", std::to_string(N), "ybe", "R12 R13 R23 = R23 R13 R12 for R(z,z') = z R12 - z' R21^{-1}", "", y.pass,
                y.pass ? std::string("exact polynomial identity") : y.first_offending, seconds_since(t0));
            t0 = Clock::now();
            ClassicalLimitReport c = classical_limit_check(N);
            add("ybe", std::to_string(N), "classical-limit", "R(z,z') = (z - z')(1 + c gamma r(z,z')) + O(gamma^2)", "",
                c.pass, c.pass ? "c = " + c.c_imag.get_str() + " i" : c.residual, seconds_since(t0));
        }
    }

    void projector(int N) {
        auto t0 = Clock::now();
        ProjectorReport p = check_projector_inverse(N);
        double t = seconds_since(t0);
        add("quantum-core", std::to_string(N), "projector", "(C12 (I - P))^2 = C12 (I - P)", "", p.projector, "", t);
        add("quantum-core", std::to_string(N), "inverse", "Y12 Y12^{-1} = I", "", p.inverse && p.inverse_left,
            p.inverse_left ? "" : "left inverse fails", t);
    }

    void quantum_core() {
        int lastN = 0;
        each_instance(4, 3, [&](int N, int n) {
            if (N != lastN) projector(N);
            lastN = N;
            auto t0 = Clock::now();
            QuantumModel m = model(N, n);
            add("quantum-core", inst(N, n), "model", "R(z1,z2) L1(z1) L2(z2) = L2(z2) L1(z1) R(z1,z2)", "", true,
                std::to_string(m.rels.rels.size()) + " relations over " + std::to_string(m.alphabet->size()) +
                    " generators",
                seconds_since(t0));
            add("quantum-core", check_integrals_commute(m, cfg.degree, QdetShift::Doubled, N == 2));
            add("quantum-core", check_xx_relations(m, cfg.degree, cfg.cert_dir.empty() ? nullptr : &sink));
        });
    }

    void reduction() {
        each_instance(4, 3, [&](int N, int n) {
            QuantumModel m = model(N, n);
            ReductionData red = build_reduction(m, parse_shat(cfg.shat));
            ReductionOptions o = options();
            add("reduction", check_char_identity(m, red, o));
            add("reduction", check_aux_relations(m, red, o));
            add("reduction", check_M_structure(m, red, o));
            add("reduction", check_tj_commute(m, red, o));
        });
    }

    void closed() {
        each_instance(4, 3, [&](int N, int n) {
            QuantumModel m = model(N, n);
            ReductionData red = build_reduction(m, parse_shat(cfg.shat));
            add("closed", check_closed_relation(m, red, options()));
        });
    }

    void bracket_check(const std::string& instance, const BracketCheck& c, const std::string& check,
                       const std::string& anchor, double t) {
        std::string detail = std::to_string(c.checked) + " checked, " + std::to_string(c.failures) + " failing";
        for (auto& f : c.failing) detail += "; " + f;
        add("classical", instance, check, anchor, "", c.pass(), detail, t);
    }

    void classical() {
        if (cfg.N.lo < 2 || cfg.N.hi > 6 || cfg.n.lo < 1 || cfg.n.hi > 6)
            throw std::invalid_argument("classical: N in 2..6, n in 1..6");
        for (int N = cfg.N.lo; N <= cfg.N.hi; ++N)
            for (int n = cfg.n.lo; n <= cfg.n.hi; ++n) {
                std::string in = inst(N, n);
                DimensionReport d = dimension_report(N, n);
                add("classical", in, "dimensions", "dim M = nN(N-1) = 2g + 2(N-1), #integrals = dim M / 2", "",
                    d.identity_ok && d.half_ok && d.count_ok,
                    "dim M = " + std::to_string(d.dim_M) + ", g = " + std::to_string(d.genus) +
                        ", invariants = " + std::to_string(d.invariants),
                    0);
                // bracket computations stay at desk scale
                if (N > 4 || n > 3) continue;
                auto t0 = Clock::now();
                ClassicalModel m = build_bracket_table(N, n);
                double tb = seconds_since(t0);
                add("classical", in, "bracket-table", "{l(z) (x) l(z')} = [r(z,z'), l(z) (x) l(z')]", "", true,
                    std::to_string(m.gens.size()) + " generators, " + std::to_string(m.table.size()) + " nonzero brackets",
                    tb);
                t0 = Clock::now();
                bracket_check(in, check_definition(m), "definition", "bracket table reproduces [r, l (x) l]", seconds_since(t0));
                if (N * n <= 6) {
                    t0 = Clock::now();
                    bracket_check(in, check_antisymmetry_jacobi(m), "jacobi", "antisymmetry and Jacobi identity",
                                  seconds_since(t0));
                }
                t0 = Clock::now();
                bracket_check(in, check_involution(m), "involution", "{t_k^{(i)}, t_m^{(j)}} = 0", seconds_since(t0));
                t0 = Clock::now();
                CenterReport c = check_center(m);
                double tc = seconds_since(t0);
                bracket_check(in, c.det_coefficients, "center-tN", "{t_N^{(j)}, l} = 0", tc);
                bracket_check(in, c.constant_terms, "center-tk0", "{t_k^{(kn)}, l} = 0, t_k^{(kn)} = t_k(0)", tc);
                bracket_check(in, c.diagonal_products, "center-diag-products", "{l^{(0)}_ii l^{(n)}_ii, l} = 0", tc);
                add("classical", in, "center-proper", "t_1^{(1)} is not central", "", c.noncentral_witness, c.witness, tc);
                t0 = Clock::now();
                if (cfg.backend == "float") {
                    std::mt19937_64 rng(cfg.seed);
                    int bad = 0;
                    for (int s = 0; s < cfg.samples; ++s) {
                        ReduceResult r;
                        do r = classical_reduce_float(random_lax(N, n, rng), 1e-8);
                        while (r.singular);
                        bad += !r.ok;
                    }
                    add("classical", in, "reduce", "m(z) = s l(z) s^{-1} block degrees", "", bad == 0,
                        std::to_string(cfg.samples) + " float samples, seed " + std::to_string(cfg.seed) + ", " +
                            std::to_string(bad) + " violations",
                        seconds_since(t0));
                } else {
                    ReduceBatch b = classical_reduce_batch(N, n, cfg.samples, cfg.seed);
                    add("classical", in, "reduce", "m(z) = s l(z) s^{-1} block degrees", "", b.violations == 0,
                        std::to_string(b.samples) + " exact samples, seed " + std::to_string(b.seed) + ", " +
                            std::to_string(b.violations) + " violations, " + std::to_string(b.singular) +
                            " singular draws resampled",
                        seconds_since(t0));
                }
                t0 = Clock::now();
                BridgeReport br = classical_limit_bridge(N, n);
                add("classical", in, "bridge", "first order in q - 1 of the RTT relations = kappa {,}", "", br.pass,
                    "kappa = " + br.kappa.get_str() + ", " + std::to_string(br.relations) + " relations, " +
                        std::to_string(br.failures) + " failing, " + std::to_string(br.common_pairs) +
                        " common bracket pairs, " + std::to_string(br.common_mismatch) + " mismatched" +
                        (br.first_failure.empty() ? "" : "; " + br.first_failure),
                    seconds_since(t0));
            }
    }

    void geometry() {
        if (cfg.N.lo < 2 || cfg.N.hi > 8 || cfg.n.lo < 1 || cfg.n.hi > 8)
            throw std::invalid_argument("geometry: N in 2..8, n in 1..8");
        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<int> num(-20, 20), den(1, 5);
        auto rq = [&] {
            mpq_class v(num(rng), den(rng));
            v.canonicalize();
            return v;
        };
        for (int N = cfg.N.lo; N <= cfg.N.hi; ++N)
            for (int n = cfg.n.lo; n <= cfg.n.hi; ++n) {
                std::string in = inst(N, n);
                auto t0 = Clock::now();
                auto table = index_map(N, n);
                long g = genus(N, n);
                bool ok = static_cast<long>(table.size()) == std::max(0L, g);
                for (auto& e : table) ok = ok && e.k >= 1 && e.k <= N - 1 && e.l >= 1;
                add("geometry", in, "index-map", "i -> (k, l), (k-1)(kn-2)/2 < i <= k((k+1)n-2)/2", "", ok,
                    "g = " + std::to_string(g) + ", table length " + std::to_string(table.size()), seconds_since(t0));
                if (g >= 2 && g <= 8) {
                    t0 = Clock::now();
                    std::vector<std::pair<mpq_class, mpq_class>> pts;
                    for (long j = 0; j < g; ++j) pts.push_back({rq(), rq()});
                    mpq_class d = divisor_matrix_det(table, pts);
                    auto sw = pts;
                    std::swap(sw[0], sw[1]);
                    mpq_class ds = divisor_matrix_det(table, sw);
                    auto dup = pts;
                    dup[1] = dup[0];
                    mpq_class dd = divisor_matrix_det(table, dup);
                    add("geometry", in, "divisor-alternating", "det(f_i(z_j, w_j)) alternating in the points", "",
                        ds == -d && dd == 0, "det = " + d.get_str() + ", seed " + std::to_string(cfg.seed),
                        seconds_since(t0));
                }
                if (g >= 1) {
                    t0 = Clock::now();
                    int gv = static_cast<int>(std::min(g, 3L));
                    std::vector<mpq_class> alpha, beta;
                    for (int j = 0; j < gv; ++j) {
                        alpha.push_back(rq());
                        beta.push_back(mpq_class(num(rng) % 3));
                    }
                    ExpFunction G = ExpFunction::exponential(alpha, beta);
                    bool all = true;
                    std::string bad;
                    for (auto& s : check_separated_identities(G))
                        if (!s.holds) {
                            all = false;
                            bad = s.name + ": " + s.residual;
                        }
                    add("geometry", in, "separated-variables", "w z = q^2 z w, [W, z] = 0, [w, Z] = 0", "", all,
                        all ? "exact on exponential test functions" : bad, seconds_since(t0));
                }
            }
        auto t0 = Clock::now();
        // g = 1 kernel has f_1 = 1 and must act as the identity
        auto t1 = index_map(2, 3);
        t1.resize(1);
        ExpFunction G = ExpFunction::exponential({mpq_class(1, 2)});
        add("geometry", "g1", "kernel-identity", "kernel with f_1 = 1 is the identity", "", measure_kernel_apply(t1, G) == G,
            "", seconds_since(t0));
    }
};

}  // namespace

ReportDoc run_suite(const RunConfig& cfg) {
    ReportDoc doc;
    doc.tool_version = "0.1.0";
    doc.config = cfg;
    Runner r{cfg, doc, CertificateSink{cfg.cert_dir}};
    const std::string& s = cfg.suite;
    bool all = s == "all";
    bool known = false;
    for (auto& name : suite_names()) known = known || name == s;
    if (!known) throw std::invalid_argument("unknown suite '" + s + "'");
    if (all || s == "ybe") r.ybe();
    if (all || s == "classical") r.classical();
    if (all || s == "quantum-core") r.quantum_core();
    if (all || s == "reduction") r.reduction();
    if (all || s == "closed") r.closed();
    if (all || s == "geometry") r.geometry();
    return doc;
}

}  // namespace qsep
