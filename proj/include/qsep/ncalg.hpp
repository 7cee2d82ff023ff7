#pragma once

#include "qsep/cpoly.hpp"
#include "qsep/rmatrix.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace qsep {

enum class GenKind { Mu = 0, Lcoef = 1, SigmaInv = 2 };

struct GenId {
    GenKind kind;
    int a;  // degree index for Lcoef, 0 otherwise
    int i;  // 1-based
    int j;
    bool operator<(const GenId& o) const;
    bool operator==(const GenId& o) const;
};

// Generator symbols are letters of a u16string word; the letter value is the
// generator's rank in the monomial order.
using Word = std::u16string;

struct WordLess {
    // graded left-lexicographic
    bool operator()(const Word& a, const Word& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

class Alphabet {
public:
    Alphabet(int N, int n);
    int N() const { return N_; }
    int n() const { return n_; }
    size_t size() const { return gens_.size(); }
    const GenId& gen(size_t k) const { return gens_[k]; }
    bool has(const GenId& g) const { return index_.count(g) != 0; }
    char16_t letter(const GenId& g) const;
    std::string name(size_t k) const;
    std::string word_str(const Word& w) const;  // "m21*L0_12", "1" for the empty word
    Word parse_word(const std::string& s) const;
    bool localized() const { return localized_; }
    // Appends SigmaInv(i,j); ranks exceed all existing letters.
    void add_sigma();
    std::vector<std::string> names() const;

private:
    void add(const GenId& g);
    int N_, n_;
    bool localized_ = false;
    std::vector<GenId> gens_;
    std::map<GenId, size_t> index_;
    std::unordered_map<std::string, size_t> by_name_;
};

class NCPoly {
public:
    using Terms = std::map<Word, ScalarQ, WordLess>;

    NCPoly() = default;
    explicit NCPoly(const ScalarQ& c);
    static NCPoly letter(char16_t g);
    static NCPoly word(const Word& w, const ScalarQ& c = ScalarQ(1));

    const Terms& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    size_t size() const { return t_.size(); }
    int degree() const { return t_.empty() ? -1 : static_cast<int>(t_.rbegin()->first.size()); }
    int min_degree() const { return t_.empty() ? -1 : static_cast<int>(t_.begin()->first.size()); }
    bool homogeneous() const { return degree() == min_degree(); }
    const Word& lead_word() const { return t_.rbegin()->first; }
    const ScalarQ& lead_coeff() const { return t_.rbegin()->second; }
    ScalarQ coeff(const Word& w) const;
    NCPoly component(int deg) const;

    void add_term(const Word& w, const ScalarQ& c);
    // this += c * l * p * r
    void add_product(const ScalarQ& c, const Word& l, const NCPoly& p, const Word& r);

    NCPoly operator+(const NCPoly& o) const;
    NCPoly operator-(const NCPoly& o) const;
    NCPoly operator*(const NCPoly& o) const;
    NCPoly operator-() const;
    NCPoly& operator+=(const NCPoly& o);
    NCPoly& operator-=(const NCPoly& o);
    NCPoly scaled(const ScalarQ& k) const;
    bool operator==(const NCPoly& o) const { return t_ == o.t_; }
    bool operator!=(const NCPoly& o) const { return !(*this == o); }

    template <class F>
    NCPoly map_coeffs(F f) const {
        NCPoly r;
        for (auto& [w, c] : t_) r.add_term(w, f(c));
        return r;
    }

    std::string str(const Alphabet& A) const;

private:
    Terms t_;
};

NCPoly commutator(const NCPoly& a, const NCPoly& b);

class NCMatrix {
public:
    NCMatrix() = default;
    NCMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}
    static NCMatrix identity(int n);
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    NCPoly& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const NCPoly& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
    NCMatrix operator+(const NCMatrix& o) const;
    NCMatrix operator-(const NCMatrix& o) const;
    NCMatrix operator*(const NCMatrix& o) const;
    NCMatrix scaled(const ScalarQ& k) const;
    bool is_zero() const;
    std::vector<NCPoly>& entries() { return e_; }
    const std::vector<NCPoly>& entries() const { return e_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<NCPoly> e_;
};

// X (x) I and I (x) X on C^N (x) C^N.
NCMatrix tensor_left(const NCMatrix& x, int N);
NCMatrix tensor_right(const NCMatrix& x, int N);
NCMatrix flip21(const NCMatrix& x, int N);
// Constant CMatrix (no variables) to NCMatrix.
NCMatrix from_constant(const CMatrix& m);

// Polynomial in spectral variables with NCMatrix coefficients.
using Grade = std::vector<int>;
using GMatrix = std::map<Grade, NCMatrix>;
GMatrix gmul(const GMatrix& a, const GMatrix& b);
GMatrix gadd(const GMatrix& a, const GMatrix& b, const ScalarQ& cb = ScalarQ(1));
GMatrix gconst(const NCMatrix& m, size_t nvars);
GMatrix gapply(const GMatrix& a, const std::function<NCMatrix(const NCMatrix&)>& f);
// Convert a CMatrix whose entries are polynomials in `grade_vars` and in
// substituted variables (e.g. t_j -> NCPoly) into graded form.
GMatrix to_graded(const CMatrix& m, const std::vector<std::string>& grade_vars,
                  const std::map<std::string, NCPoly>& subst);

struct RelationSet {
    std::shared_ptr<Alphabet> alphabet;
    std::vector<NCPoly> rels;
    std::vector<std::string> provenance;
    bool homogeneous = true;
    void add(NCPoly p, std::string prov);
};

// Adjoins sigma = S^{-1}: alphabet letters SigmaInv(i,j) and the 2 N^2
// relations (S sigma)_{ab} - delta_ab, (sigma S)_{ab} - delta_ab.
RelationSet enable_localization(const RelationSet& rels, const NCMatrix& S);
NCMatrix sigma_matrix(const Alphabet& A);

// ---------------------------------------------------------------------------
// Certificates

struct CertTerm {
    Word left;
    int rel;  // >= 0 base relation id, < 0 derived lemma -(k+1)
    Word right;
    ScalarQ coef;
};

struct Lemma {
    int id;  // derived id k (referenced as -(k+1))
    NCPoly poly;
    std::vector<CertTerm> terms;
};

struct Certificate {
    std::shared_ptr<Alphabet> alphabet;
    std::map<int, NCPoly> base;  // referenced base relations
    std::vector<Lemma> lemmas;   // topologically ordered
    NCPoly target;
    std::vector<CertTerm> terms;
    std::map<std::string, std::string> context;

    std::string serialize() const;
    static Certificate parse(const std::string& text, std::shared_ptr<Alphabet> alphabet = nullptr);
    size_t total_terms() const;
};

struct ReplayResult {
    bool ok = false;
    std::string message;
};
// Re-expands every lemma and the target combination exactly.  If `rels` is
// given, referenced base relations must also match it.
ReplayResult replay(const Certificate& c, const RelationSet* rels = nullptr);

// ---------------------------------------------------------------------------
// Engines

enum class Verdict { Member, Inconclusive, Refuted };
const char* verdict_name(Verdict v);

struct Budget {
    size_t max_elements = 200000;
    size_t max_rows = 60000;
    double max_seconds = 3600;
};

class BudgetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MembershipResult {
    Verdict verdict = Verdict::Inconclusive;
    std::optional<Certificate> certificate;
    NCPoly residue;  // normal form (Groebner) or unreduced remainder (span)
    std::string engine;
    std::string stats;
};

// Span engine: target in span{ x r y : deg <= d } by exact elimination.
MembershipResult ideal_membership(const NCPoly& target, const RelationSet& rels, int degree_bound,
                                  const Budget& budget = {});

struct NormalFormResult {
    NCPoly remainder;
    bool exhausted = false;  // max_steps hit
    std::vector<CertTerm> terms;  // target = sum terms + remainder, rel ids are base ids
};
// One-pass rewriting with the relations oriented by their leading words.
NormalFormResult normal_form(const NCPoly& target, const RelationSet& rels, size_t max_steps = 1000000);

// Degree-truncated noncommutative Buchberger completion with derivation tracking.
class Groebner {
public:
    Groebner(const RelationSet& rels, int max_degree, const Budget& budget = {});
    const RelationSet& relations() const { return rels_; }
    int max_degree() const { return max_degree_; }
    // True when every overlap of degree <= max_degree was resolved (no budget stop).
    bool degree_complete() const { return complete_; }
    // True when, in addition, no overlap was dropped for exceeding the cap:
    // then every ambiguity resolves and this is a Groebner basis of the whole
    // ideal, so a nonzero normal form refutes membership at any degree.
    bool full_basis() const { return complete_ && dropped_pairs_ == 0; }
    size_t size() const { return active_count_; }
    std::string stats() const;

    NormalFormResult reduce(const NCPoly& target) const;
    MembershipResult decide(const NCPoly& target) const;
    Certificate make_certificate(const NCPoly& target, const std::vector<CertTerm>& terms) const;

private:
    struct Elem {
        NCPoly p;
        std::vector<CertTerm> deriv;
        bool active = true;
    };
    struct Pair {
        int degree;
        int a, b, k;
        bool operator>(const Pair& o) const;
    };
    void run();
    int insert(NCPoly p, std::vector<CertTerm> deriv);  // returns elem id or -1
    void reduce_tracked(NCPoly& p, std::vector<CertTerm>& out) const;
    void add_pairs(int e);
    void check_budget() const;

    RelationSet rels_;
    int max_degree_;
    Budget budget_;
    bool complete_ = false;
    std::vector<Elem> elems_;
    std::unordered_map<Word, int> lead_;
    size_t min_lead_ = 1000, max_lead_ = 0;
    size_t active_count_ = 0;
    std::vector<Pair> heap_;
    std::chrono::steady_clock::time_point start_;
    size_t spairs_ = 0, zero_reductions_ = 0, dropped_pairs_ = 0;
};

// Commutative image at q = 1: letters become the alphabet's variable names.
CPoly commutative_image(const NCPoly& p, const Alphabet& A, std::shared_ptr<const VarList> vars);
std::shared_ptr<const VarList> commutative_vars(const Alphabet& A);

}  // namespace qsep
