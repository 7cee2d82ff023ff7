#pragma once

#include "qsep/rtt.hpp"

namespace qsep {

// First term of Shat12, diagonal on the slot-1 = 1 rows.
//   QInvE11:  q E^{11} (x) q^{-E^{11}}   (entries 1 at (11,11), q at (1j,1j))
//   ScalarQE: q E^{11} (x) q^{E^{11}}
//   QEQE:     q^{E^{11}} (x) q^{E^{11}}  (full diagonal)
enum class ShatReading { QInvE11, ScalarQE, QEQE };
const char* shat_name(ShatReading r);
ShatReading parse_shat(const std::string& s);

struct ReductionData {
    int N = 0, n = 0;
    ShatReading shat_reading = ShatReading::QInvE11;
    std::vector<NCPoly> nu;  // nu_j = L^{(n-1)}_{1j}
    NCMatrix S;              // rows e1, nu mu^{N-2}, ..., nu
    std::vector<NCPoly> t;   // t[0] = 1, ..., t[N-1]
    NCMatrix U;              // companion matrix in the t_j
    NCMatrix Shat12;
    // Built from U without commuting t_j past each other.
    NCMatrix C12, Y12, Y12inv, Zt;  // Z(z) = I - (q - q^{-1}) z Zt
};

ReductionData build_reduction(const QuantumModel& m, ShatReading reading = ShatReading::QInvE11);

// q = 1 image of an element of the (possibly localized) algebra.  SigmaInv
// letters are replaced by adj(S) and the whole expression multiplied by the
// matching power of det(S).  Zero, or divisible by `modulus` when that is
// nonzero, counts as holding.
struct Q1Context {
    std::shared_ptr<const VarList> vars;  // non-sigma generators
    std::vector<CPoly> letter_image;      // per alphabet letter
    std::vector<bool> is_sigma;
    CPoly det;
    CPoly modulus;  // zero polynomial: exact vanishing required
};
Q1Context make_q1_context(const Alphabet& A, const ReductionData* red, const CPoly* modulus);
bool q1_holds(const NCPoly& target, const Q1Context& ctx);
// Commutative image of the z^{Nn-1} q-det coefficient (doubled shift).
CPoly center_residual_q1(const QuantumModel& m);

struct ReductionOptions {
    int degree_bound = 6;
    int localized_degree = 9;
    Budget budget;
    const CertificateSink* sink = nullptr;
};

// ch: sum_k t_k nu mu^{N-1-k} = 0 (components), then S mu = U S entrywise.
CheckReport check_char_identity(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt);
// au1 and au2' (T = L, as specified) plus the corrected au2 (T = q^{E11} L,
// Z evaluated at q^{-1} z).
CheckReport check_aux_relations(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt);
// M(z) = S L(z) sigma: leading coefficient U, row 1 of the z^{n-1} coefficient e_N.
CheckReport check_M_structure(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt);
// [t_j, S], [t_j, S L(z)] in the RTT ideal and [t_j, M(z)] in the localized ideal.
CheckReport check_tj_commute(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt);
// Printed closed identities (A), (B) and the derived closed relation
//   R~ Mc1(z1) Mc2(z2) = Mc2(z2) Mc1(z1) R~,  Mc1(z) = Z(q^{-1}z)_{12} (M(z) (x) I) Y21,  Mc2 = P Mc1 P.
CheckReport check_closed_relation(const QuantumModel& m, const ReductionData& red, const ReductionOptions& opt,
                                  bool printed = true, bool derived = true);

// Localized relation set: RTT (+ center fix) with sigma = S^{-1}.
RelationSet localized_relations(const QuantumModel& m, const ReductionData& red);

}  // namespace qsep
