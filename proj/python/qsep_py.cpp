#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsep/classical.hpp"
#include "qsep/geometry.hpp"
#include "qsep/rmatrix.hpp"
#include "qsep/suites.hpp"

namespace py = pybind11;
using namespace qsep;

PYBIND11_MODULE(_qsep, m) {
    m.doc() = "Exact checks for RTT algebras, their classical limits and separated variables";

    m.def("genus", &genus, py::arg("N"), py::arg("n"));
    m.def("index_map", [](int N, int n) {
        std::vector<std::tuple<int, int, int>> out;
        for (auto& e : index_map(N, n)) out.emplace_back(e.i, e.k, e.l);
        return out;
    }, py::arg("N"), py::arg("n"), "List of (i, k, l) with f_i = w^{k-1} z^{l-1}.");

    m.def("check_ybe", [](int N, const std::string& reading) { return check_ybe(N, parse_reading(reading)).pass; },
          py::arg("N"), py::arg("reading") = "interpreted");

    m.def("dimension_report", [](int N, int n) {
        auto d = dimension_report(N, n);
        py::dict r;
        r["dim_M"] = d.dim_M;
        r["genus"] = d.genus;
        r["invariants"] = d.invariants;
        r["generators"] = d.generators;
        r["central"] = d.central;
        r["ok"] = d.identity_ok && d.half_ok && d.count_ok;
        return r;
    }, py::arg("N"), py::arg("n"));

    m.def("bracket_table", [](int N, int n) {
        ClassicalModel cm = build_bracket_table(N, n);
        std::map<std::string, std::string> out;
        for (auto& [k, v] : cm.table) out[(*cm.vars)[k.first + 3] + "," + (*cm.vars)[k.second + 3]] = v.str();
        return out;
    }, py::arg("N"), py::arg("n"), "Nonzero brackets {g, h} of generator pairs as strings.");

    m.def("classical_reduce_batch", [](int N, int n, int samples, std::uint64_t seed) {
        auto b = classical_reduce_batch(N, n, samples, seed);
        return py::make_tuple(b.samples, b.violations, b.singular);
    }, py::arg("N"), py::arg("n"), py::arg("samples") = 100, py::arg("seed") = 1,
       "Returns (samples, violations, singular draws).");

    m.def("suite_names", &suite_names);
    m.def("run_suite", [](const std::string& suite, const std::string& N, const std::string& n, bool center_fix,
                          std::uint64_t seed, int samples) {
        RunConfig cfg;
        cfg.suite = suite;
        cfg.N = parse_range(N);
        cfg.n = parse_range(n);
        cfg.center_fix = center_fix;
        cfg.seed = seed;
        cfg.samples = samples;
        cfg.deterministic = true;
        apply_budget_env(cfg.budget);
        py::gil_scoped_release release;
        return run_suite(cfg).to_json();
    }, py::arg("suite"), py::arg("N") = "2", py::arg("n") = "1", py::arg("center_fix") = false, py::arg("seed") = 1,
       py::arg("samples") = 100, "Runs a suite and returns the JSON report.");
}
