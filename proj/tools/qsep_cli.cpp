#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "qsep/classical.hpp"
#include "qsep/geometry.hpp"
#include "qsep/reduction.hpp"
#include "qsep/rtt.hpp"
#include "qsep/suites.hpp"

using namespace qsep;
using json = nlohmann::ordered_json;

namespace {

struct Common {
    std::string N = "2", n = "1";
    std::string out;
    bool allow_inconclusive = false;
};

void add_instance_flags(CLI::App* app, Common& c) {
    app->add_option("--N", c.N, "matrix size, K or A..B");
    app->add_option("--n", c.n, "degree in the spectral parameter, K or A..B");
}

void add_run_flags(CLI::App* app, RunConfig& cfg, Common& c) {
    app->add_option("--degree", cfg.degree, "degree bound for ideal membership");
    app->add_option("--localized-degree", cfg.localized_degree, "degree bound in the localized algebra");
    app->add_option("--max-seconds", cfg.budget.max_seconds, "wall-time budget per completion");
    app->add_option("--max-elements", cfg.budget.max_elements, "basis size budget");
    app->add_option("--max-rows", cfg.budget.max_rows, "span engine row budget");
    app->add_option("--reading", cfg.reading, "constant R reading: interpreted|literal");
    app->add_option("--shat", cfg.shat, "first term of Shat12: qinv|scalar|qeqe");
    app->add_flag("--center-fix", cfg.center_fix, "add the z^{Nn-1} q-det coefficient to the relations");
    app->add_option("--seed", cfg.seed, "seed for all sampling");
    app->add_option("--samples", cfg.samples, "classical reduction samples");
    app->add_option("--backend", cfg.backend, "classical reduction backend: exact|float")
        ->check(CLI::IsMember({"exact", "float"}));
    app->add_option("--gamma", cfg.gamma, "q = exp(i gamma) for numeric evaluation");
    app->add_option("--cert-dir", cfg.cert_dir, "directory for membership certificates");
    app->add_flag("--deterministic", cfg.deterministic, "omit timings so reports are byte-stable");
    app->add_option("--out", c.out, "write the JSON report here instead of stdout");
    app->add_flag("--allow-inconclusive", c.allow_inconclusive, "exit 0 when only budget-limited entries remain");
}

int emit(const ReportDoc& doc, const Common& c) {
    std::string text = doc.to_json();
    if (c.out.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream f(c.out);
        if (!f) throw std::runtime_error("cannot write " + c.out);
        f << text << "\n";
        std::cerr << "report: " << c.out << " (" << doc.records.size() << " records, " << doc.count("fail")
                  << " fail, " << doc.count("error") << " error, " << doc.count("inconclusive") << " inconclusive)\n";
    }
    return doc.exit_code(c.allow_inconclusive);
}

void finish_config(RunConfig& cfg, const Common& c) {
    cfg.N = parse_range(c.N);
    cfg.n = parse_range(c.n);
}

// Converts one CheckReport into a report document via the shared record mapping.
ReportDoc doc_from(const RunConfig& cfg, const std::string& suite, const std::vector<CheckReport>& reps) {
    ReportDoc doc;
    doc.tool_version = "0.1.0";
    doc.config = cfg;
    for (auto& rep : reps) {
        for (auto& x : rep.records) {
            ReportRecord r;
            r.id = suite + "/" + x.check + "/" + std::to_string(rep.N) + "," + std::to_string(rep.n) + "/" + x.entry;
            r.check = x.check;
            r.anchor = x.anchor;
            r.entry = x.entry;
            r.detail = x.detail;
            r.certificate_ref = x.certificate_ref;
            r.wall_time = x.wall_time;
            r.status = x.status == "refuted" ? "fail" : x.status;
            if (x.status == "refuted") r.detail = "refuted: " + r.detail;
            if (!x.q1_ok) {
                r.detail += "; q=1 commutative image does not vanish";
                if (r.status == "member") r.status = "error";
            }
            doc.records.push_back(std::move(r));
        }
        doc.engine_stats.push_back(rep.engine_stats);
    }
    return doc;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<double>> read_numbers(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::vector<double> row;
        double x;
        while (is >> x) row.push_back(x);
        if (!row.empty()) rows.push_back(row);
    }
    return rows;
}

json check_json(const BracketCheck& c) {
    return {{"name", c.name}, {"checked", c.checked}, {"failures", c.failures}, {"failing", c.failing},
            {"status", c.pass() ? "pass" : "fail"}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact verification of the quantum and classical separated-variable constructions"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file with the same keys as the flags");

    RunConfig cfg;
    apply_budget_env(cfg.budget);
    Common common;

    // run <suite>
    auto* run = app.add_subcommand("run", "run a verification suite");
    std::string suite;
    run->add_option("suite", suite, "ybe|classical|quantum-core|reduction|closed|geometry|all")->required();
    add_instance_flags(run, common);
    add_run_flags(run, cfg, common);

    // verify <what> | verify --replay <path>
    auto* verify = app.add_subcommand("verify", "check one identity family, or replay a certificate");
    std::string what, replay_path;
    verify->add_option("what", what, "char-identity|aux|m-structure|tj-commute|closed|xx|integrals")
        ->check(CLI::IsMember({"char-identity", "aux", "m-structure", "tj-commute", "closed", "xx", "integrals"}));
    verify->add_option("--replay", replay_path, "certificate file to replay");
    bool with_generators = false;
    verify->add_flag("--with-generators", with_generators, "integrals: also commute with every generator");
    add_instance_flags(verify, common);
    add_run_flags(verify, cfg, common);

    // model dump
    auto* model = app.add_subcommand("model", "inspect the quantum model");
    auto* dump = model->add_subcommand("dump", "print generators and relations as JSON");
    model->require_subcommand(1);
    add_instance_flags(dump, common);
    dump->add_option("--reading", cfg.reading);
    dump->add_flag("--center-fix", cfg.center_fix);

    // classical ...
    auto* cl = app.add_subcommand("classical", "classical r-matrix model");
    cl->require_subcommand(1);
    std::vector<CLI::App*> cl_cmds;
    const std::vector<std::pair<const char*, const char*>> cl_names{
        {"involution", "spectral invariants Poisson-commute"},
        {"center", "Casimir checks for q-det coefficients and diagonal products"},
        {"dims", "phase-space dimension and genus bookkeeping"},
        {"reduce", "random exact (or float) reductions to the block form"},
        {"bridge", "first-order q-expansion of the RTT relations against the bracket"},
        {"jacobi", "antisymmetry and Jacobi identity of the bracket table"},
        {"table", "print the bracket table as JSON"}};
    for (auto [name, help] : cl_names) {
        auto* c = cl->add_subcommand(name, help);
        add_instance_flags(c, common);
        c->add_option("--samples", cfg.samples);
        c->add_option("--seed", cfg.seed);
        c->add_option("--backend", cfg.backend)->check(CLI::IsMember({"exact", "float"}));
        cl_cmds.push_back(c);
    }

    // geometry ...
    auto* geo = app.add_subcommand("geometry", "spectral curve and separated variables");
    geo->require_subcommand(1);
    std::string points_file;
    std::vector<std::string> alpha_text;
    std::vector<CLI::App*> geo_cmds;
    const std::vector<std::pair<const char*, const char*>> geo_names{
        {"genus", "genus of the spectral curve"},
        {"index-map", "i -> (k, l) table of holomorphic differentials"},
        {"divisor-det", "det f_i(z_j, w_j) for points on a random curve"},
        {"kernel", "apply the measure kernel to an exponential test function"}};
    for (auto [name, help] : geo_names) {
        auto* c = geo->add_subcommand(name, help);
        add_instance_flags(c, common);
        c->add_option("--gamma", cfg.gamma);
        c->add_option("--points-file", points_file,
                      "divisor-det: lines 're_z im_z re_w im_w'; kernel: lines of g pairs 're im' for zeta_1..zeta_g");
        c->add_option("--alpha", alpha_text, "kernel: exponents of the test function exp(sum a_j zeta_j)");
        geo_cmds.push_back(c);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            cfg.suite = suite;
            finish_config(cfg, common);
            return emit(run_suite(cfg), common);
        }

        if (verify->parsed()) {
            if (!replay_path.empty()) {
                Certificate c = Certificate::parse(read_file(replay_path));
                ReplayResult r = replay(c);
                json j = {{"certificate", replay_path}, {"status", r.ok ? "pass" : "fail"}, {"message", r.message},
                          {"terms", c.total_terms()}};
                std::cout << j.dump(2) << "\n";
                return r.ok ? 0 : 1;
            }
            if (what.empty()) throw std::invalid_argument("verify: name an identity family or pass --replay");
            finish_config(cfg, common);
            CertificateSink sink{cfg.cert_dir};
            ReductionOptions o;
            o.degree_bound = cfg.degree;
            o.localized_degree = cfg.localized_degree;
            o.budget = cfg.budget;
            o.sink = cfg.cert_dir.empty() ? nullptr : &sink;
            std::vector<CheckReport> reps;
            for (int N = cfg.N.lo; N <= cfg.N.hi; ++N)
                for (int n = cfg.n.lo; n <= cfg.n.hi; ++n) {
                    if (N < 2 || N > 4 || n < 1 || n > 3) throw std::invalid_argument("verify: N in 2..4, n in 1..3");
                    QuantumModel m = build_model(N, n, parse_reading(cfg.reading), cfg.center_fix);
                    if (what == "xx") {
                        reps.push_back(check_xx_relations(m, cfg.degree, o.sink));
                        continue;
                    }
                    if (what == "integrals") {
                        reps.push_back(check_integrals_commute(m, cfg.degree, QdetShift::Doubled, with_generators, o.sink));
                        continue;
                    }
                    ReductionData red = build_reduction(m, parse_shat(cfg.shat));
                    if (what == "char-identity") reps.push_back(check_char_identity(m, red, o));
                    else if (what == "aux") reps.push_back(check_aux_relations(m, red, o));
                    else if (what == "m-structure") reps.push_back(check_M_structure(m, red, o));
                    else if (what == "tj-commute") reps.push_back(check_tj_commute(m, red, o));
                    else if (what == "closed") reps.push_back(check_closed_relation(m, red, o));
                }
            cfg.suite = "verify " + what;
            return emit(doc_from(cfg, "verify", reps), common);
        }

        if (dump->parsed()) {
            finish_config(cfg, common);
            QuantumModel m = build_model(cfg.N.lo, cfg.n.lo, parse_reading(cfg.reading), cfg.center_fix);
            json j;
            j["N"] = m.N;
            j["n"] = m.n;
            j["reading"] = cfg.reading;
            j["center_fix"] = m.center_fix;
            json gens = json::array();
            for (size_t g = 0; g < m.alphabet->size(); ++g) gens.push_back(m.alphabet->name(static_cast<char16_t>(g)));
            j["generators"] = gens;
            json rels = json::array();
            for (size_t k = 0; k < m.rels.rels.size(); ++k)
                rels.push_back({{"relation", m.rels.rels[k].str(*m.alphabet)}, {"origin", m.rels.provenance[k]}});
            j["relations"] = rels;
            std::cout << j.dump(2) << "\n";
            return 0;
        }

        for (auto* c : cl_cmds) {
            if (!c->parsed()) continue;
            finish_config(cfg, common);
            std::string name = c->get_name();
            json out = json::array();
            bool ok = true;
            for (int N = cfg.N.lo; N <= cfg.N.hi; ++N)
                for (int n = cfg.n.lo; n <= cfg.n.hi; ++n) {
                    json j = {{"N", N}, {"n", n}};
                    if (name == "dims") {
                        DimensionReport d = dimension_report(N, n);
                        j.update({{"dim_M", d.dim_M},
                                  {"genus", d.genus},
                                  {"two_g_plus_2(N-1)", d.two_g_plus},
                                  {"invariants", d.invariants},
                                  {"generators", d.generators},
                                  {"central", d.central},
                                  {"status", d.identity_ok && d.half_ok && d.count_ok ? "pass" : "fail"}});
                        ok = ok && d.identity_ok && d.half_ok && d.count_ok;
                    } else if (name == "reduce") {
                        std::mt19937_64 rng(cfg.seed);
                        int bad = 0, singular = 0;
                        for (int s = 0; s < cfg.samples; ++s) {
                            ReduceResult r;
                            do {
                                NumericLax lax = random_lax(N, n, rng);
                                r = cfg.backend == "float" ? classical_reduce_float(lax, 1e-8) : classical_reduce(lax);
                                singular += r.singular;
                            } while (r.singular);
                            bad += !r.ok;
                        }
                        j.update({{"samples", cfg.samples}, {"seed", cfg.seed}, {"backend", cfg.backend},
                                  {"violations", bad}, {"singular_resampled", singular},
                                  {"status", bad == 0 ? "pass" : "fail"}});
                        ok = ok && bad == 0;
                    } else if (name == "bridge") {
                        BridgeReport b = classical_limit_bridge(N, n);
                        j.update({{"kappa", b.kappa.get_str()}, {"relations", b.relations}, {"failures", b.failures},
                                  {"common_pairs", b.common_pairs}, {"common_mismatch", b.common_mismatch},
                                  {"first_failure", b.first_failure}, {"status", b.pass ? "pass" : "fail"}});
                        ok = ok && b.pass;
                    } else {
                        ClassicalModel m = build_bracket_table(N, n);
                        if (name == "table") {
                            json t = json::object();
                            for (auto& [gh, b] : m.table)
                                t[(*m.vars)[gh.first + 3] + "," + (*m.vars)[gh.second + 3]] = b.str();
                            j["brackets"] = t;
                        } else if (name == "involution") {
                            BracketCheck r = check_involution(m);
                            j["check"] = check_json(r);
                            ok = ok && r.pass();
                        } else if (name == "jacobi") {
                            BracketCheck r = check_antisymmetry_jacobi(m);
                            j["check"] = check_json(r);
                            ok = ok && r.pass();
                        } else {
                            CenterReport r = check_center(m);
                            j["t_N"] = check_json(r.det_coefficients);
                            j["t_k(0)"] = check_json(r.constant_terms);
                            j["diagonal_products"] = check_json(r.diagonal_products);
                            j["noncentral_witness"] = r.witness;
                            ok = ok && r.central.pass() && r.noncentral_witness;
                        }
                    }
                    out.push_back(j);
                }
            std::cout << out.dump(2) << "\n";
            return ok ? 0 : 1;
        }

        for (auto* c : geo_cmds) {
            if (!c->parsed()) continue;
            finish_config(cfg, common);
            std::string name = c->get_name();
            int N = cfg.N.lo, n = cfg.n.lo;
            json j = {{"N", N}, {"n", n}, {"genus", genus(N, n)}};
            if (name == "index-map") {
                json t = json::array();
                for (auto& e : index_map(N, n))
                    t.push_back({{"i", e.i}, {"k", e.k}, {"l", e.l}, {"f", "w^" + std::to_string(e.k - 1) + " z^" + std::to_string(e.l - 1)}});
                j["index_table"] = t;
            } else if (name == "divisor-det") {
                if (points_file.empty()) throw std::invalid_argument("divisor-det needs --points-file");
                CurveData cd;
                cd.N = N;
                cd.n = n;
                cd.g = genus(N, n);
                cd.index_table = index_map(N, n);
                std::vector<DivisorPoint> pts;
                for (auto& row : read_numbers(points_file)) {
                    if (row.size() != 4) throw std::invalid_argument("points file: expected 're_z im_z re_w im_w'");
                    pts.push_back({cplx(row[0], row[1]), cplx(row[2], row[3]), 0});
                }
                cplx d = divisor_determinant(cd, pts);
                j["determinant"] = {d.real(), d.imag()};
            } else if (name == "kernel") {
                auto table = index_map(N, n);
                int g = static_cast<int>(table.size());
                std::vector<mpq_class> alpha;
                for (auto& a : alpha_text) alpha.emplace_back(a);
                for (auto& a : alpha) a.canonicalize();
                if (alpha.empty()) alpha.assign(g, mpq_class(1, 2));
                if (static_cast<int>(alpha.size()) != g) throw std::invalid_argument("--alpha needs g values");
                ExpFunction G = ExpFunction::exponential(alpha);
                ExpFunction K = measure_kernel_apply(table, G);
                j["kernel_of_G"] = K.str();
                if (!points_file.empty()) {
                    std::vector<std::vector<cplx>> grid;
                    for (auto& row : read_numbers(points_file)) {
                        if (static_cast<int>(row.size()) != 2 * g) throw std::invalid_argument("kernel grid: expected g complex numbers per line");
                        std::vector<cplx> pt;
                        for (int k = 0; k < g; ++k) pt.emplace_back(row[2 * k], row[2 * k + 1]);
                        grid.push_back(pt);
                    }
                    json vals = json::array();
                    for (auto& v : measure_kernel_sample(table, G, cfg.gamma, grid)) vals.push_back({v.real(), v.imag()});
                    j["samples"] = vals;
                    j["gamma"] = cfg.gamma;
                }
            }
            std::cout << j.dump(2) << "\n";
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
