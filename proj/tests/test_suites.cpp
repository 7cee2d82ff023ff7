#include "doctest.h"

#include "json.hpp"
#include "qsep/suites.hpp"

using namespace qsep;

TEST_CASE("range parsing") {
    auto r = parse_range("2..4");
    CHECK(r.lo == 2);
    CHECK(r.hi == 4);
    r = parse_range("3");
    CHECK(r.lo == 3);
    CHECK(r.hi == 3);
    CHECK_THROWS(parse_range("4..2"));
    CHECK_THROWS(parse_range("x"));
}

TEST_CASE("ybe suite passes for N = 2..4") {
    RunConfig cfg;
    cfg.suite = "ybe";
    cfg.N = {2, 4};
    ReportDoc d = run_suite(cfg);
    CHECK(d.records.size() > 0);
    CHECK(d.count("pass") == d.records.size());
    CHECK(d.exit_code(false) == 0);
}

TEST_CASE("unknown suites are rejected") {
    RunConfig cfg;
    cfg.suite = "nope";
    CHECK_THROWS_AS(run_suite(cfg), std::invalid_argument);
}

TEST_CASE("deterministic reports are byte-stable") {
    RunConfig cfg;
    cfg.suite = "classical";
    cfg.N = {2, 2};
    cfg.n = {1, 1};
    cfg.samples = 10;
    cfg.deterministic = true;
    std::string a = run_suite(cfg).to_json(), b = run_suite(cfg).to_json();
    CHECK(a == b);
    auto j = nlohmann::json::parse(a);
    CHECK(j.contains("records"));
}

TEST_CASE("exit code policy") {
    ReportDoc d;
    d.records.push_back({"1", "c", "", "", "member"});
    CHECK(d.exit_code(false) == 0);
    d.records.push_back({"2", "c", "", "", "inconclusive"});
    CHECK(d.exit_code(false) == 2);
    CHECK(d.exit_code(true) == 0);
    d.records.push_back({"3", "c", "", "", "fail"});
    CHECK(d.exit_code(true) == 1);
}
