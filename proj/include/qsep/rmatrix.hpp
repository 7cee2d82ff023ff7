#pragma once

#include "qsep/cpoly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsep {

enum class SpaceTag { Single, Tensor2, Tensor3 };

// Dense matrix of CPoly.  Tensor2 basis index is (i-1)*N + (j-1) for slot
// indices i, j (0-based: i*N + j).
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(int rows, int cols, std::shared_ptr<const VarList> vars, SpaceTag tag = SpaceTag::Single, int N = 0);
    static CMatrix identity(int n, std::shared_ptr<const VarList> vars, SpaceTag tag = SpaceTag::Single, int N = 0);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    SpaceTag tag() const { return tag_; }
    int base_dim() const { return N_; }
    const std::shared_ptr<const VarList>& vars() const { return vars_; }

    CPoly& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
    const CPoly& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }

    CMatrix operator+(const CMatrix& o) const;
    CMatrix operator-(const CMatrix& o) const;
    CMatrix operator*(const CMatrix& o) const;
    CMatrix scaled(const CPoly& k) const;
    CMatrix scaled(const ScalarQ& k) const;
    bool operator==(const CMatrix& o) const;
    bool operator!=(const CMatrix& o) const { return !(*this == o); }
    bool is_zero() const;

    // Same entries re-expressed over another variable list (names must exist there).
    CMatrix rebased(std::shared_ptr<const VarList> target) const;
    CMatrix substituted(const std::vector<CPoly>& values, std::shared_ptr<const VarList> target) const;
    template <class F>
    CMatrix map_coeffs(F f) const {
        CMatrix r = *this;
        for (auto& x : r.e_) x = x.map_coeffs(f);
        return r;
    }
    CMatrix with_tag(SpaceTag t, int N) const {
        CMatrix r = *this;
        r.tag_ = t;
        r.N_ = N;
        return r;
    }

    // Inverse of a constant (variable-free) matrix over Q(s).
    CMatrix inverse_constant() const;

    // Canonical text: one entry per line "i j : poly" for nonzero entries.
    std::string serialize(const std::string& name) const;
    std::string str() const;

private:
    void check_compatible(const CMatrix& o, bool for_product) const;
    int rows_ = 0, cols_ = 0;
    SpaceTag tag_ = SpaceTag::Single;
    int N_ = 0;
    std::shared_ptr<const VarList> vars_;
    std::vector<CPoly> e_;
};

CMatrix kron(const CMatrix& a, const CMatrix& b, SpaceTag tag);
// X_{21} = P X_{12} P on a Tensor2 matrix.
CMatrix flip21(const CMatrix& x);

enum class RReading { Interpreted, Literal };
const char* reading_name(RReading r);
RReading parse_reading(const std::string& s);

// Variable list used by all section-2 constructions of size N:
// z, zp, z1, z2, z3, t1..t_{N-1}.
std::shared_ptr<const VarList> spectral_vars(int N);

CMatrix unit_matrix(int N, int i, int j, std::shared_ptr<const VarList> vars = nullptr);  // 1-based
CMatrix permutation_P(int N, std::shared_ptr<const VarList> vars = nullptr);
CMatrix constant_R(int N, RReading reading, std::shared_ptr<const VarList> vars = nullptr);
// R(z,z') = z R12 - z' R21^{-1}, entries linear in the named variables.
CMatrix spectral_R(int N, const std::string& z, const std::string& zp, RReading reading,
                   std::shared_ptr<const VarList> vars = nullptr);

struct YbeReport {
    bool pass = false;
    int N = 0;
    RReading reading = RReading::Interpreted;
    std::string first_offending;  // "row col : difference"
};
YbeReport check_ybe(int N, RReading reading);

struct ClassicalR {
    CMatrix numerator;  // over (z, zp)
    CPoly denominator;  // z - zp
};
ClassicalR classical_r(int N);

struct ClassicalLimitReport {
    bool pass = false;
    int N = 0;
    // (z - z')^{-1} d/dgamma R |_{gamma=0} = (c_imag * i) r + c0 * I
    mpq_class c_imag;
    CPoly c0;
    std::string residual;
};
ClassicalLimitReport classical_limit_check(int N);

CMatrix build_V(int N, std::shared_ptr<const VarList> vars = nullptr);
CMatrix build_U(int N, std::shared_ptr<const VarList> vars = nullptr);
// Sum truncated at V^{N-2}; extra_terms adds further powers (truncation check).
CMatrix build_C12(int N, std::shared_ptr<const VarList> vars = nullptr, int extra_terms = 0);

struct YZKData {
    CMatrix C12, Y12, Y12inv, Y21, Y21inv;
    CMatrix Z12, K12;  // in the variable z
    CMatrix Rtilde;    // in z1, z2
};
// Z12(z) built with z -> zscale * z (1 reproduces the printed formula).
YZKData build_Y_Z_K_Rtilde(int N, const ScalarQ& zscale = ScalarQ(1));

// Replace variable `from` by variable `to` (same variable list).
CMatrix rename_var(const CMatrix& m, const std::string& from, const std::string& to);

// Projector and inverse identities for Y.
struct ProjectorReport {
    int N = 0;
    bool projector = false;
    bool inverse = false;
    bool inverse_left = false;
};
ProjectorReport check_projector_inverse(int N);

}  // namespace qsep
