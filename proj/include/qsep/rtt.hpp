#pragma once

#include "qsep/ncalg.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qsep {

enum class QdetShift { Printed, Doubled };
const char* shift_name(QdetShift s);
QdetShift parse_shift(const std::string& s);

struct QuantumModel {
    int N = 0, n = 0;
    RReading reading = RReading::Interpreted;
    bool center_fix = false;
    std::shared_ptr<Alphabet> alphabet;
    RelationSet rels;
    std::vector<NCMatrix> Lc;  // L^{(a)}, a = 0..n, with Lc[n] = mu
    NCMatrix R12, R21inv;      // constant matrices embedded as scalars

    const NCMatrix& mu() const { return Lc[n]; }
    // L(z) graded in a single spectral variable.
    GMatrix L() const;
    NCPoly gen(GenKind k, int a, int i, int j) const { return NCPoly::letter(alphabet->letter({k, a, i, j})); }
};

// Coefficient relations of R(z1,z2) L1(z1) L2(z2) = L2(z2) L1(z1) R(z1,z2),
// deduplicated up to scalar multiples.  With center_fix the z^{Nn-1}
// coefficient of q-det(L(z)) (doubled shift) is appended as a relation.
QuantumModel build_model(int N, int n, RReading reading = RReading::Interpreted, bool center_fix = false);

// Coefficients of q-det(w I + L(z)) keyed by (power of w, power of z).  With
// offset_w = false only w^0 terms are produced.
using BiFamily = std::map<std::pair<int, int>, NCPoly>;
BiFamily qdet(const QuantumModel& m, bool offset_w, QdetShift shift = QdetShift::Doubled);
int permutation_length(const std::vector<int>& p);

// Membership decisions against one relation set: Groebner completion built
// once per degree, with the span engine as fallback for small targets.
class Prover {
public:
    Prover(RelationSet rels, int degree, Budget budget = {});
    MembershipResult decide(const NCPoly& target);
    const RelationSet& relations() const { return rels_; }
    int degree() const { return degree_; }
    const Groebner& groebner();
    std::string stats();

private:
    RelationSet rels_;
    int degree_;
    Budget budget_;
    std::unique_ptr<Groebner> gb_;
};

// One checked identity.
struct CheckRecord {
    std::string check;   // e.g. "xx1"
    std::string anchor;  // the identity being checked, in words
    std::string entry;   // e.g. "j=2 (2,1)"
    std::string status;  // member | inconclusive | refuted | fail | pass
    std::string detail;
    std::string certificate_ref;
    double wall_time = 0;
    bool q1_ok = true;  // commutative q = 1 image vanished (or is divisible as required)
};

struct CheckReport {
    std::string name;
    int N = 0, n = 0;
    std::string reading;
    std::vector<CheckRecord> records;
    std::string engine_stats;
    size_t count(const std::string& status) const;
    bool all(const std::string& status) const { return count(status) == records.size(); }
};

// Turns a decision into a record and optionally archives the certificate.
struct CertificateSink {
    std::string directory;  // empty: do not write
    std::string write(const Certificate& c, const std::string& stem) const;
};

CheckRecord record_from(const std::string& check, const std::string& anchor, const std::string& entry,
                        const NCPoly& target, Prover& prover, const CertificateSink* sink = nullptr,
                        bool check_q1 = true);

// Pairwise commutators of the q-det(wI + L(z)) coefficients; with
// with_generators also [t, g] for every generator g (centrality).
CheckReport check_integrals_commute(const QuantumModel& m, int degree_bound, QdetShift shift = QdetShift::Doubled,
                                    bool with_generators = false, const CertificateSink* sink = nullptr);
// Single pair, t_{k}^{(j)} = coefficient of w^{N-k} z^j.
CheckRecord check_integral_pair(const QuantumModel& m, int k1, int j1, int k2, int j2, int degree_bound,
                                QdetShift shift = QdetShift::Doubled);

// xx1: mu_jj q^{E^{jj}} mu = mu q^{E^{jj}} mu_jj.
// xx2: nu mu_jj = mu_jj nu (printed) and nu q^{E^{jj}} mu_jj = mu_jj nu (twisted).
CheckReport check_xx_relations(const QuantumModel& m, int degree_bound, const CertificateSink* sink = nullptr);

std::string report_json(const CheckReport& r);

}  // namespace qsep
