#include "doctest.h"

#include "qsep/reduction.hpp"

using namespace qsep;

namespace {

size_t count_check(const CheckReport& r, const std::string& check, const std::string& status) {
    size_t k = 0;
    for (auto& x : r.records) k += x.check == check && x.status == status;
    return k;
}
size_t count_check(const CheckReport& r, const std::string& check) {
    size_t k = 0;
    for (auto& x : r.records) k += x.check == check;
    return k;
}

}  // namespace

TEST_CASE("reduction data at (2,1)") {
    QuantumModel m = build_model(2, 1);
    ReductionData red = build_reduction(m);
    CHECK(red.nu.size() == 2);
    CHECK(red.S.rows() == 2);
    // first row of S is e1
    CHECK(red.S(0, 0) == NCPoly(ScalarQ(1)));
    CHECK(red.S(0, 1).is_zero());
    CHECK(red.S(1, 0) == red.nu[0]);
    CHECK(red.t.size() == 2);
    CHECK(red.t[0] == NCPoly(ScalarQ(1)));
    // first row and column vanish; U(2,2) = -t_1 = q^-1 mu_22
    for (int k = 0; k < 2; ++k) {
        CHECK(red.U(0, k).is_zero());
        CHECK(red.U(k, 0).is_zero());
    }
    CHECK(red.U(1, 1) == -red.t[1]);
    CHECK(red.t[1] == m.gen(GenKind::Mu, 0, 2, 2).scaled(-ScalarQ::qinv()));
}

TEST_CASE("bare model: the characteristic identity needs the extra central relation") {
    QuantumModel m = build_model(2, 1);
    ReductionData red = build_reduction(m);
    ReductionOptions opt;
    CheckReport r = check_char_identity(m, red, opt);
    CHECK(count_check(r, "ch") == 2);
    CHECK(count_check(r, "ch", "member") == 1);
    CHECK(count_check(r, "ch", "refuted") == 1);
}

TEST_CASE("q = 1 image of the extra relation is nonzero but vanishes on the reduced locus") {
    QuantumModel m = build_model(2, 1);
    CPoly c = center_residual_q1(m);
    CHECK_FALSE(c.is_zero());
}

TEST_CASE("with the center fix the reduction identities hold at (2,1)") {
    QuantumModel m = build_model(2, 1, RReading::Interpreted, true);
    ReductionData red = build_reduction(m);
    ReductionOptions opt;
    opt.localized_degree = 8;

    CheckReport ch = check_char_identity(m, red, opt);
    CHECK(ch.all("member"));
    CHECK(count_check(ch, "S-mu-US") == 4);

    CheckReport aux = check_aux_relations(m, red, opt);
    CHECK(count_check(aux, "au1") == count_check(aux, "au1", "member"));
    CHECK(count_check(aux, "au2-corrected") == count_check(aux, "au2-corrected", "member"));
    // the literal au2 does not hold
    CHECK(count_check(aux, "au2", "refuted") > 0);

    CheckReport M = check_M_structure(m, red, opt);
    CHECK(M.all("member"));

    CheckReport tj = check_tj_commute(m, red, opt);
    CHECK(count_check(tj, "tj-M") == count_check(tj, "tj-M", "member"));
    CHECK(count_check(tj, "tj-M") > 0);

    CheckReport cl = check_closed_relation(m, red, opt, false, true);
    CHECK(count_check(cl, "closed-derived") > 0);
    CHECK(cl.all("member"));
}

TEST_CASE("every member record also passes the q = 1 image check") {
    QuantumModel m = build_model(2, 1, RReading::Interpreted, true);
    ReductionData red = build_reduction(m);
    ReductionOptions opt;
    for (auto& x : check_char_identity(m, red, opt).records) CHECK(x.q1_ok);
}

TEST_CASE("Shat readings parse") {
    CHECK(parse_shat(shat_name(ShatReading::QEQE)) == ShatReading::QEQE);
    CHECK(parse_shat(shat_name(ShatReading::ScalarQE)) == ShatReading::ScalarQE);
    CHECK_THROWS(parse_shat("bogus"));
}
