#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qsep/ncalg.hpp"

namespace qsep {

struct IntRange {
    int lo = 0, hi = 0;
};
// "3" or "2..4"
IntRange parse_range(const std::string& s);

struct RunConfig {
    std::string suite = "all";
    IntRange N{2, 2}, n{1, 1};
    int degree = 6;
    int localized_degree = 9;
    Budget budget;
    std::string reading = "interpreted";
    std::string shat = "qinv";
    bool center_fix = false;
    std::uint64_t seed = 1;
    int samples = 100;
    std::string backend = "exact";
    double gamma = 0.7;
    std::string cert_dir;
    bool deterministic = false;  // zero wall times so reports are byte-stable
};

// Budget fields overridden from QSEP_MAX_SECONDS, QSEP_MAX_ELEMENTS, QSEP_MAX_ROWS.
void apply_budget_env(Budget& b);

struct ReportRecord {
    std::string id, check, anchor, entry;
    std::string status;  // pass | member | inconclusive | fail | error
    std::string detail, certificate_ref;
    double wall_time = 0;
};

struct ReportDoc {
    std::string tool_version;
    RunConfig config;
    std::vector<ReportRecord> records;
    std::vector<std::string> engine_stats;

    size_t count(const std::string& status) const;
    // 0 iff no fail/error, and no inconclusive unless allowed
    int exit_code(bool allow_inconclusive) const;
    std::string to_json() const;
};

const std::vector<std::string>& suite_names();
// Throws std::invalid_argument for unknown suites or out-of-range instances.
ReportDoc run_suite(const RunConfig& cfg);

}  // namespace qsep
