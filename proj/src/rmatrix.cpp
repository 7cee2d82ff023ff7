#include "qsep/rmatrix.hpp"

#include <sstream>
#include <stdexcept>

namespace qsep {

CMatrix::CMatrix(int rows, int cols, std::shared_ptr<const VarList> vars, SpaceTag tag, int N)
    : rows_(rows), cols_(cols), tag_(tag), N_(N), vars_(std::move(vars)),
      e_(static_cast<size_t>(rows) * cols, CPoly(vars_)) {}

CMatrix CMatrix::identity(int n, std::shared_ptr<const VarList> vars, SpaceTag tag, int N) {
    CMatrix m(n, n, vars, tag, N);
    for (int i = 0; i < n; ++i) m(i, i) = CPoly(vars, ScalarQ(1));
    return m;
}

void CMatrix::check_compatible(const CMatrix& o, bool for_product) const {
    if (for_product ? cols_ != o.rows_ : (rows_ != o.rows_ || cols_ != o.cols_))
        throw std::invalid_argument("CMatrix: shape mismatch");
    if (tag_ != o.tag_ || N_ != o.N_) throw std::invalid_argument("CMatrix: tensor space mismatch");
    if (vars_ != o.vars_ && !(*vars_ == *o.vars_)) throw std::invalid_argument("CMatrix: variable list mismatch");
}

CMatrix CMatrix::operator+(const CMatrix& o) const {
    check_compatible(o, false);
    CMatrix r = *this;
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] += o.e_[k];
    return r;
}

CMatrix CMatrix::operator-(const CMatrix& o) const {
    check_compatible(o, false);
    CMatrix r = *this;
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] -= o.e_[k];
    return r;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    check_compatible(o, true);
    CMatrix r(rows_, o.cols_, vars_, tag_, N_);
    for (int i = 0; i < rows_; ++i)
        for (int k = 0; k < cols_; ++k) {
            const CPoly& a = (*this)(i, k);
            if (a.is_zero()) continue;
            for (int j = 0; j < o.cols_; ++j) {
                const CPoly& b = o(k, j);
                if (b.is_zero()) continue;
                r(i, j) += a * b;
            }
        }
    return r;
}

CMatrix CMatrix::scaled(const CPoly& k) const {
    CMatrix r = *this;
    for (auto& x : r.e_) x = x * k;
    return r;
}

CMatrix CMatrix::scaled(const ScalarQ& k) const {
    CMatrix r = *this;
    for (auto& x : r.e_) x = x.scaled(k);
    return r;
}

bool CMatrix::operator==(const CMatrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) return false;
    for (size_t k = 0; k < e_.size(); ++k)
        if (!(e_[k] == o.e_[k])) return false;
    return true;
}

bool CMatrix::is_zero() const {
    for (auto& x : e_)
        if (!x.is_zero()) return false;
    return true;
}

CMatrix CMatrix::rebased(std::shared_ptr<const VarList> target) const {
    std::vector<CPoly> vals;
    for (size_t i = 0; i < vars_->size(); ++i) vals.push_back(CPoly::var(target, (*vars_)[i]));
    return substituted(vals, target);
}

CMatrix CMatrix::substituted(const std::vector<CPoly>& values, std::shared_ptr<const VarList> target) const {
    CMatrix r(rows_, cols_, target, tag_, N_);
    for (size_t k = 0; k < e_.size(); ++k) r.e_[k] = e_[k].substitute(values, target);
    return r;
}

CMatrix CMatrix::inverse_constant() const {
    if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
    int n = rows_;
    std::vector<std::vector<ScalarQ>> a(n, std::vector<ScalarQ>(2 * n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (!(*this)(i, j).is_constant()) throw std::invalid_argument("inverse_constant: non-constant entry");
            a[i][j] = (*this)(i, j).constant_term();
        }
        a[i][n + i] = ScalarQ(1);
    }
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && a[p][c].is_zero()) ++p;
        if (p == n) throw std::domain_error("inverse_constant: singular matrix");
        std::swap(a[p], a[c]);
        ScalarQ iv = a[c][c].inverse();
        for (auto& x : a[c]) x = x * iv;
        for (int r = 0; r < n; ++r) {
            if (r == c || a[r][c].is_zero()) continue;
            ScalarQ f = a[r][c];
            for (int j = 0; j < 2 * n; ++j)
                if (!a[c][j].is_zero()) a[r][j] -= f * a[c][j];
        }
    }
    CMatrix r(n, n, vars_, tag_, N_);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) r(i, j) = CPoly(vars_, a[i][n + j]);
    return r;
}

std::string CMatrix::serialize(const std::string& name) const {
    std::ostringstream os;
    const char* tag = tag_ == SpaceTag::Single ? "single" : tag_ == SpaceTag::Tensor2 ? "tensor2" : "tensor3";
    os << "matrix " << name << " " << rows_ << "x" << cols_ << " " << tag << "(" << N_ << ")\n";
    for (int i = 0; i < rows_; ++i)
        for (int j = 0; j < cols_; ++j)
            if (!(*this)(i, j).is_zero()) os << "  " << i + 1 << " " << j + 1 << " : " << (*this)(i, j).str() << "\n";
    return os.str();
}

std::string CMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < rows_; ++i) {
        os << "[";
        for (int j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
        os << "]\n";
    }
    return os.str();
}

CMatrix kron(const CMatrix& a, const CMatrix& b, SpaceTag tag) {
    int n = a.rows(), m = b.rows();
    int N = a.base_dim() ? a.base_dim() : a.rows();
    CMatrix r(n * m, a.cols() * b.cols(), a.vars(), tag, N);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (int j = 0; j < m; ++j)
                for (int l = 0; l < b.cols(); ++l) {
                    if (b(j, l).is_zero()) continue;
                    r(i * m + j, k * b.cols() + l) = a(i, k) * b(j, l);
                }
        }
    return r;
}

CMatrix flip21(const CMatrix& x) {
    int N = x.base_dim();
    CMatrix r(x.rows(), x.cols(), x.vars(), x.tag(), N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (int k = 0; k < N; ++k)
                for (int l = 0; l < N; ++l) r(j * N + i, l * N + k) = x(i * N + j, k * N + l);
    return r;
}

const char* reading_name(RReading r) { return r == RReading::Interpreted ? "interpreted" : "literal"; }

RReading parse_reading(const std::string& s) {
    if (s == "interpreted") return RReading::Interpreted;
    if (s == "literal") return RReading::Literal;
    throw std::invalid_argument("unknown R reading: " + s);
}

std::shared_ptr<const VarList> spectral_vars(int N) {
    std::vector<std::string> names = {"z", "zp", "z1", "z2", "z3"};
    for (int j = 1; j < N; ++j) names.push_back("t" + std::to_string(j));
    return make_vars(names);
}

static std::shared_ptr<const VarList> or_default(std::shared_ptr<const VarList> v, int N) {
    return v ? v : spectral_vars(N);
}

CMatrix unit_matrix(int N, int i, int j, std::shared_ptr<const VarList> vars) {
    if (i < 1 || j < 1 || i > N || j > N) throw std::out_of_range("unit_matrix: index out of range");
    vars = or_default(vars, N);
    CMatrix m(N, N, vars, SpaceTag::Single, N);
    m(i - 1, j - 1) = CPoly(vars, ScalarQ(1));
    return m;
}

CMatrix permutation_P(int N, std::shared_ptr<const VarList> vars) {
    vars = or_default(vars, N);
    CMatrix P(N * N, N * N, vars, SpaceTag::Tensor2, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) P(i * N + j, j * N + i) = CPoly(vars, ScalarQ(1));
    return P;
}

CMatrix constant_R(int N, RReading reading, std::shared_ptr<const VarList> vars) {
    if (N < 2) throw std::invalid_argument("constant_R: N >= 2 required");
    vars = or_default(vars, N);
    ScalarQ q = ScalarQ::q(), qi = ScalarQ::qinv();
    CMatrix R(N * N, N * N, vars, SpaceTag::Tensor2, N);
    if (reading == RReading::Interpreted) {
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) R(i * N + j, i * N + j) = CPoly(vars, i == j ? q : ScalarQ(1));
    } else {
        for (int j = 0; j < N; ++j) {
            CMatrix qE = CMatrix::identity(N, vars, SpaceTag::Single, N);
            qE(j, j) = CPoly(vars, q);
            R = R + kron(qE, qE, SpaceTag::Tensor2);
        }
    }
    // E^{ji} (x) E^{ij}, j > i : row (j,i), column (i,j)
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) R(j * N + i, i * N + j) += CPoly(vars, q - qi);
    return R;
}

CMatrix spectral_R(int N, const std::string& z, const std::string& zp, RReading reading,
                   std::shared_ptr<const VarList> vars) {
    vars = or_default(vars, N);
    CMatrix R12 = constant_R(N, reading, vars);
    CMatrix R21inv = flip21(R12).inverse_constant();
    return R12.scaled(CPoly::var(vars, z)) - R21inv.scaled(CPoly::var(vars, zp));
}

YbeReport check_ybe(int N, RReading reading) {
    auto vars = make_vars({"z1", "z2", "z3"});
    YbeReport rep;
    rep.N = N;
    rep.reading = reading;
    CMatrix I = CMatrix::identity(N, vars, SpaceTag::Single, N);
    CMatrix P23 = kron(I, permutation_P(N, vars).with_tag(SpaceTag::Single, N), SpaceTag::Tensor3);
    auto R = [&](const char* a, const char* b) { return spectral_R(N, a, b, reading, vars).with_tag(SpaceTag::Single, N); };
    CMatrix R12 = kron(R("z1", "z2"), I, SpaceTag::Tensor3);
    CMatrix R23 = kron(I, R("z2", "z3"), SpaceTag::Tensor3);
    CMatrix R13 = P23 * kron(R("z1", "z3"), I, SpaceTag::Tensor3) * P23;
    CMatrix lhs = R12 * R13 * R23;
    CMatrix rhs = R23 * R13 * R12;
    rep.pass = true;
    for (int i = 0; i < lhs.rows() && rep.pass; ++i)
        for (int j = 0; j < lhs.cols(); ++j) {
            CPoly d = lhs(i, j) - rhs(i, j);
            if (!d.is_zero()) {
                rep.pass = false;
                rep.first_offending = std::to_string(i + 1) + " " + std::to_string(j + 1) + " : " + d.str();
                break;
            }
        }
    return rep;
}

ClassicalR classical_r(int N) {
    auto vars = make_vars({"z", "zp"});
    CPoly z = CPoly::var(vars, "z"), zp = CPoly::var(vars, "zp");
    CMatrix num(N * N, N * N, vars, SpaceTag::Tensor2, N);
    CPoly half = (z + zp).scaled(ScalarQ(mpq_class(1, 2)));
    for (int i = 0; i < N; ++i) num(i * N + i, i * N + i) = half;
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j) continue;
            // E^{ji} (x) E^{ij}
            num(j * N + i, i * N + j) += (j > i) ? z : zp;
        }
    return {num, z - zp};
}

ClassicalLimitReport classical_limit_check(int N) {
    auto vars = make_vars({"z", "zp"});
    ClassicalLimitReport rep;
    rep.N = N;
    CMatrix R = spectral_R(N, "z", "zp", RReading::Interpreted, vars);
    // (1/i) d/dgamma f(q)|_{gamma=0} with q = e^{i gamma}, s = q^{1/2}:  (s/2) f'(s) at s = 1
    CMatrix D = R.map_coeffs([](const ScalarQ& f) {
        return ScalarQ(mpq_class(f.d_ds().eval_s(1) / 2));
    });
    ClassicalR cr = classical_r(N);
    // c from an off-diagonal entry E^{21} (x) E^{12} whose numerator is z
    CPoly quo;
    if (!cr.numerator(N, 1).divides_into(D(N, 1), &quo) || !quo.is_constant()) {
        rep.residual = "no scalar c fits entry (21,12)";
        return rep;
    }
    ScalarQ c = quo.constant_term();
    rep.c_imag = c.rational();
    CPoly rest = D(0, 0) - cr.numerator(0, 0).scaled(c);
    CPoly c0;
    if (!cr.denominator.divides_into(rest, &c0)) {
        rep.residual = "diagonal remainder not divisible by z - zp";
        return rep;
    }
    rep.c0 = c0;
    CMatrix resid = D - cr.numerator.scaled(c) - CMatrix::identity(N * N, vars, SpaceTag::Tensor2, N).scaled(c0 * cr.denominator);
    rep.pass = resid.is_zero();
    if (!rep.pass) rep.residual = resid.str();
    return rep;
}

CMatrix build_V(int N, std::shared_ptr<const VarList> vars) {
    vars = or_default(vars, N);
    CMatrix V(N, N, vars, SpaceTag::Single, N);
    // superdiagonal starting from row 2: E^{i,i+1}, i = 2..N-1
    for (int i = 1; i + 1 < N; ++i) V(i, i + 1) = CPoly(vars, ScalarQ(1));
    return V;
}

CMatrix build_U(int N, std::shared_ptr<const VarList> vars) {
    vars = or_default(vars, N);
    CMatrix U(N, N, vars, SpaceTag::Single, N);
    for (int c = 1; c < N; ++c) U(1, c) = -CPoly::var(vars, "t" + std::to_string(c));
    for (int i = 2; i < N; ++i) U(i, i - 1) = CPoly(vars, ScalarQ(1));
    return U;
}

CMatrix build_C12(int N, std::shared_ptr<const VarList> vars, int extra_terms) {
    vars = or_default(vars, N);
    CMatrix I = CMatrix::identity(N, vars, SpaceTag::Single, N);
    CMatrix C = kron(I - unit_matrix(N, 1, 1, vars), I, SpaceTag::Tensor2);
    CMatrix V = build_V(N, vars), U = build_U(N, vars);
    CMatrix Vj = I, Uj = I;
    for (int j = 1; j <= N - 2 + extra_terms; ++j) {
        Vj = Vj * V;
        Uj = Uj * U;
        C = C + kron(Vj, Uj, SpaceTag::Tensor2);
    }
    return C;
}

YZKData build_Y_Z_K_Rtilde(int N, const ScalarQ& zscale) {
    auto vars = spectral_vars(N);
    ScalarQ q = ScalarQ::q(), qi = ScalarQ::qinv(), h = q - qi;
    YZKData d;
    CMatrix I2 = CMatrix::identity(N * N, vars, SpaceTag::Tensor2, N);
    CMatrix I = CMatrix::identity(N, vars, SpaceTag::Single, N);
    CMatrix P = permutation_P(N, vars);
    d.C12 = build_C12(N, vars);
    CMatrix proj = d.C12 * (I2 - P);
    d.Y12 = I2.scaled(q) - proj.scaled(h);
    d.Y12inv = I2.scaled(qi) + proj.scaled(h);
    d.Y21 = flip21(d.Y12);
    d.Y21inv = flip21(d.Y12inv);
    CMatrix U = build_U(N, vars);
    CMatrix EN1 = unit_matrix(N, N, 1, vars);
    CPoly z = CPoly::var(vars, "z");
    d.Z12 = I2 - (kron(I, U, SpaceTag::Tensor2) * d.C12 * kron(EN1, I, SpaceTag::Tensor2)).scaled(z.scaled(h * zscale));
    d.K12 = d.Y12inv * d.Z12;
    d.Rtilde = d.Y12.scaled(CPoly::var(vars, "z1")) - d.Y21inv.scaled(CPoly::var(vars, "z2"));
    return d;
}

CMatrix rename_var(const CMatrix& m, const std::string& from, const std::string& to) {
    auto vars = m.vars();
    std::vector<CPoly> vals;
    for (size_t i = 0; i < vars->size(); ++i)
        vals.push_back(CPoly::var(vars, (*vars)[i] == from ? to : (*vars)[i]));
    return m.substituted(vals, vars);
}

ProjectorReport check_projector_inverse(int N) {
    ProjectorReport rep;
    rep.N = N;
    auto vars = spectral_vars(N);
    YZKData d = build_Y_Z_K_Rtilde(N);
    CMatrix I2 = CMatrix::identity(N * N, vars, SpaceTag::Tensor2, N);
    CMatrix proj = d.C12 * (I2 - permutation_P(N, vars));
    rep.projector = (proj * proj) == proj;
    rep.inverse = (d.Y12 * d.Y12inv) == I2;
    rep.inverse_left = (d.Y12inv * d.Y12) == I2;
    return rep;
}

}  // namespace qsep
