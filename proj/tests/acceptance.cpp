// Acceptance run: one PASS/FAIL line per criterion.  The verdict is the strict
// reading of the criterion; where it fails, the line also reports the check
// that does hold (center fix, corrected identity, ...).  Exit status is 0 when
// every criterion was evaluated, whatever the verdicts.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qsep/classical.hpp"
#include "qsep/geometry.hpp"
#include "qsep/reduction.hpp"
#include "qsep/suites.hpp"

using namespace qsep;

namespace {

using Inst = std::pair<int, int>;
const std::vector<Inst> kMain{{2, 1}, {2, 2}, {3, 1}};

struct Tally {
    size_t total = 0, member = 0, refuted = 0, inconclusive = 0, q1_bad = 0;
    void add(const CheckReport& r, const std::vector<std::string>& checks) {
        for (auto& x : r.records) {
            if (!checks.empty() && std::find(checks.begin(), checks.end(), x.check) == checks.end()) continue;
            ++total;
            member += x.status == "member";
            refuted += x.status == "refuted";
            inconclusive += x.status == "inconclusive";
            q1_bad += !x.q1_ok;
        }
    }
    bool all_member() const { return total > 0 && member == total; }
    std::string str() const {
        std::ostringstream o;
        o << member << "/" << total << " member";
        if (refuted) o << ", " << refuted << " refuted";
        if (inconclusive) o << ", " << inconclusive << " inconclusive";
        return o.str();
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void verdict(int k, bool pass, const std::string& detail) {
    std::cout << "CRITERION " << k << ": " << (pass ? "PASS" : "FAIL") << "  " << detail << std::endl;
}

std::string inst(const Inst& i) { return "(" + std::to_string(i.first) + "," + std::to_string(i.second) + ")"; }

// Replays every archived certificate below `dir`.
std::pair<size_t, size_t> replay_dir(const std::string& dir) {
    size_t ok = 0, total = 0;
    if (!std::filesystem::exists(dir)) return {0, 0};
    for (auto& e : std::filesystem::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream f(e.path());
        std::stringstream ss;
        ss << f.rdbuf();
        ++total;
        ok += replay(Certificate::parse(ss.str())).ok;
    }
    return {ok, total};
}

struct Models {
    QuantumModel m;
    ReductionData red;
    Models(int N, int n, bool cf) : m(build_model(N, n, RReading::Interpreted, cf)), red(build_reduction(m)) {}
};

}  // namespace

int main() {
    auto start = std::chrono::steady_clock::now();
    std::string tmp = (std::filesystem::temp_directory_path() / "qsep_acceptance_certs").string();
    std::filesystem::remove_all(tmp);

    // q = 1 images of every identity in criteria 5-8, bare and center-fixed
    Tally q1_bare, q1_fixed;

    {
        bool ok = true;
        for (int N = 2; N <= 4; ++N) ok = ok && check_ybe(N, RReading::Interpreted).pass;
        verdict(1, ok, "YBE exact for N=2..4 (interpreted constant R)");
    }
    {
        bool ok = true;
        for (int N = 2; N <= 5; ++N) {
            auto r = check_projector_inverse(N);
            ok = ok && r.projector && r.inverse && r.inverse_left;
        }
        verdict(2, ok, "projector and two-sided inverse for N=2..5");
    }
    {
        bool strict = true, alt = true;
        std::string notes;
        for (auto& i : kMain) {
            ClassicalModel m = build_bracket_table(i.first, i.second);
            CenterReport c = check_center(m);
            bool inv = check_involution(m).pass();
            strict = strict && inv && c.central.pass();
            alt = alt && inv && c.det_coefficients.pass() && c.diagonal_products.pass();
            if (!c.constant_terms.pass()) notes += " " + inst(i) + ":t_k(0) not central";
        }
        verdict(3, strict,
                std::string("involution + center;") + notes + "; alternative (t_N coefficients and l0_ii*ln_ii central): " +
                    (alt ? "PASS" : "FAIL"));
    }
    {
        bool ok = true;
        for (int N = 2; N <= 6; ++N)
            for (int n = 1; n <= 6; ++n) {
                auto d = dimension_report(N, n);
                ok = ok && d.identity_ok && d.half_ok && d.count_ok;
            }
        verdict(4, ok, "dimension/genus identities for N=2..6, n=1..6");
    }

    ReductionOptions opt;
    // criterion 5
    {
        Tally bare, fixed;
        for (auto& i : kMain) {
            CertificateSink sink{tmp + "/c5/" + std::to_string(i.first) + "_" + std::to_string(i.second)};
            Models a(i.first, i.second, false), b(i.first, i.second, true);
            ReductionOptions o = opt;
            CheckReport rb = check_char_identity(a.m, a.red, o);
            bare.add(rb, {});
            q1_bare.add(rb, {});
            o.sink = &sink;
            CheckReport rf = check_char_identity(b.m, b.red, o);
            fixed.add(rf, {});
            q1_fixed.add(rf, {});
        }
        auto [ok, total] = replay_dir(tmp + "/c5");
        verdict(5, bare.all_member(),
                "ch + S mu = U S, bare RTT: " + bare.str() + "; alternative (with center relation): " + fixed.str() +
                    ", certificates replayed " + std::to_string(ok) + "/" + std::to_string(total) +
                    (fixed.all_member() && ok == total ? " PASS" : " FAIL"));
    }
    // criterion 6
    {
        Tally strict, alt, tjm31;
        for (auto& i : kMain) {
            Models a(i.first, i.second, false), b(i.first, i.second, true);
            ReductionOptions o = opt;
            CheckReport xa = check_xx_relations(a.m, o.degree_bound);
            strict.add(xa, {"xx1", "xx2"});
            CheckReport xb = check_xx_relations(b.m, o.degree_bound);
            alt.add(xb, {"xx1", "xx2-twisted"});
            // [t_j, M(z)] needs the localized algebra; (3,1) is budgeted
            o.localized_degree = i == Inst{2, 1} ? 9 : 8;
            if (i == Inst{3, 1}) {
                o.localized_degree = 6;
                o.budget.max_seconds = 300;
            }
            // only [t_j, S] and [t_j, S L] are read from the bare run
            ReductionOptions oa = opt;
            oa.localized_degree = 4;
            CheckReport ta = check_tj_commute(a.m, a.red, oa);
            strict.add(ta, {"tj-S", "tj-SL"});
            q1_bare.add(ta, {"tj-S", "tj-SL"});
            CheckReport tb = check_tj_commute(b.m, b.red, o);
            if (i == Inst{3, 1})
                tjm31.add(tb, {"tj-M"});
            else
                alt.add(tb, {"tj-M"});
            q1_fixed.add(tb, {"tj-M"});
        }
        verdict(6, strict.all_member(),
                "xx1, xx2, [t_j,S], [t_j,S L]: " + strict.str() +
                    "; alternative (xx1, twisted xx2, [t_j,M(z)] localized, center relation) at (2,1),(2,2): " +
                    alt.str() + (alt.all_member() ? " PASS" : " FAIL") + "; [t_j,M(z)] at (3,1) within budget: " +
                    tjm31.str());
    }
    // criterion 7
    {
        Tally strict, alt;
        for (auto& i : std::vector<Inst>{{2, 1}, {3, 1}}) {
            Models a(i.first, i.second, false), b(i.first, i.second, true);
            CheckReport ra = check_aux_relations(a.m, a.red, opt);
            strict.add(ra, {"au1", "au2"});
            q1_bare.add(ra, {"au1", "au2"});
            CheckReport rb = check_aux_relations(b.m, b.red, opt);
            alt.add(rb, {"au1", "au2-corrected"});
            q1_fixed.add(rb, {"au1", "au2-corrected"});
        }
        verdict(7, strict.all_member(),
                "au1 + au2 as stated at (2,1),(3,1): " + strict.str() +
                    "; alternative (au2 with q^{E11} L and Z(q^-1 z), center relation): " + alt.str() +
                    (alt.all_member() ? " PASS" : " FAIL"));
    }
    // criterion 8
    {
        Models b(2, 1, true);
        ReductionOptions o = opt;
        CheckReport d = check_closed_relation(b.m, b.red, o, true, true);
        Tally at_default, derived;
        at_default.add(d, {"closed-A", "closed-B"});
        derived.add(d, {"closed-derived"});
        q1_fixed.add(d, {});
        Tally raised = at_default;
        if (!at_default.all_member()) {
            o.localized_degree += 2;
            raised = Tally{};
            raised.add(check_closed_relation(b.m, b.red, o, true, false), {});
        }
        Models a(2, 1, false);
        q1_bare.add(check_closed_relation(a.m, a.red, opt, true, true), {});
        verdict(8, raised.all_member(),
                "closed (A),(B) localized at (2,1): default bound " + at_default.str() + ", bound +2 " + raised.str() +
                    "; alternative (derived closed relation R~ Mc1 Mc2 = Mc2 Mc1 R~): " + derived.str() +
                    (derived.all_member() ? " PASS" : " FAIL"));
    }
    {
        bool ok = true;
        std::string detail;
        for (auto& i : std::vector<Inst>{{2, 2}, {3, 1}, {3, 2}}) {
            auto b = classical_reduce_batch(i.first, i.second, 100, 1);
            ok = ok && b.violations == 0 && b.samples == 100;
            detail += " " + inst(i) + ":" + std::to_string(b.violations) + " violations";
        }
        verdict(9, ok, "100 exact samples each;" + detail);
    }
    {
        bool ok = true;
        for (int N = 2; N <= 5; ++N)
            for (int n = 2; n <= 5; ++n) ok = ok && static_cast<long>(index_map(N, n).size()) == genus(N, n);
        std::mt19937_64 rng(1);
        for (auto& i : std::vector<Inst>{{2, 3}, {3, 2}, {4, 1}}) {
            auto table = index_map(i.first, i.second);
            std::uniform_int_distribution<int> u(-9, 9);
            std::vector<std::pair<mpq_class, mpq_class>> pts;
            for (size_t k = 0; k < table.size(); ++k) pts.push_back({mpq_class(u(rng), 1 + k), mpq_class(u(rng), 2)});
            mpq_class d = divisor_matrix_det(table, pts);
            for (size_t a = 0; a + 1 < pts.size(); ++a) {
                auto sw = pts;
                std::swap(sw[a], sw[a + 1]);
                ok = ok && divisor_matrix_det(table, sw) == -d;
            }
        }
        auto G = ExpFunction::exponential({mpq_class(1, 3), -2, mpq_class(5, 7)}, {1, 0, mpq_class(-1, 2)});
        for (auto& s : check_separated_identities(G)) ok = ok && s.holds;
        verdict(10, ok, "index map length = g, divisor determinant alternating, w z = q^2 z w, [W,z] = [w,Z] = 0");
    }
    verdict(11, q1_bare.q1_bad == 0,
            "q = 1 images, bare RTT: " + std::to_string(q1_bare.total - q1_bare.q1_bad) + "/" +
                std::to_string(q1_bare.total) + " vanish; alternative (center relation, modulo its q = 1 image): " +
                std::to_string(q1_fixed.total - q1_fixed.q1_bad) + "/" + std::to_string(q1_fixed.total) +
                (q1_fixed.q1_bad == 0 ? " PASS" : " FAIL"));

    std::cout << "acceptance finished in " << seconds_since(start) << " s" << std::endl;
    std::filesystem::remove_all(tmp);
    return 0;
}
