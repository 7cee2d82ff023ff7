#pragma once

#include "qsep/scalar.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace qsep {

using Exponents = std::vector<int>;

// Graded lexicographic comparison of exponent vectors.
struct GrLexLess {
    bool operator()(const Exponents& a, const Exponents& b) const;
};

// Ordered list of variable names shared between polynomials.
class VarList {
public:
    VarList() = default;
    explicit VarList(std::vector<std::string> names);
    size_t size() const { return names_.size(); }
    const std::string& operator[](size_t i) const { return names_[i]; }
    int index_of(const std::string& name) const;  // -1 if absent
    bool operator==(const VarList& o) const { return names_ == o.names_; }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

// Commutative polynomial with ScalarQ coefficients over a fixed variable list.
class CPoly {
public:
    using Terms = std::map<Exponents, ScalarQ, GrLexLess>;

    CPoly() = default;
    explicit CPoly(std::shared_ptr<const VarList> vars);
    CPoly(std::shared_ptr<const VarList> vars, const ScalarQ& c);
    static CPoly var(std::shared_ptr<const VarList> vars, const std::string& name, int power = 1);
    static CPoly var(std::shared_ptr<const VarList> vars, size_t index, int power = 1);

    const std::shared_ptr<const VarList>& vars() const { return vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    ScalarQ constant_term() const;
    int total_degree() const;
    int degree_in(size_t var) const;

    void add_term(const Exponents& e, const ScalarQ& c);
    ScalarQ coeff(const Exponents& e) const;

    CPoly operator+(const CPoly& o) const;
    CPoly operator-(const CPoly& o) const;
    CPoly operator*(const CPoly& o) const;
    CPoly operator-() const;
    CPoly& operator+=(const CPoly& o) { return *this = *this + o; }
    CPoly& operator-=(const CPoly& o) { return *this = *this - o; }
    CPoly& operator*=(const CPoly& o) { return *this = *this * o; }
    CPoly scaled(const ScalarQ& k) const;
    bool operator==(const CPoly& o) const;
    bool operator!=(const CPoly& o) const { return !(*this == o); }

    CPoly derivative(size_t var) const;
    // Coefficient of var^k, as a polynomial in the remaining variables (same var list).
    CPoly coefficient_of(size_t var, int k) const;
    // Substitute polynomials for every variable (list must match var count).
    CPoly substitute(const std::vector<CPoly>& values, std::shared_ptr<const VarList> target) const;
    // Map every coefficient.
    template <class F>
    CPoly map_coeffs(F f) const {
        CPoly r(vars_);
        for (auto& [e, c] : terms_) r.add_term(e, f(c));
        return r;
    }
    // True iff num is a polynomial multiple of *this; quotient optional.
    bool divides_into(const CPoly& num, CPoly* quotient = nullptr) const;

    std::string str() const;

private:
    void check_same(const CPoly& o) const;
    std::shared_ptr<const VarList> vars_;
    Terms terms_;
};

std::shared_ptr<const VarList> make_vars(std::vector<std::string> names);

}  // namespace qsep
