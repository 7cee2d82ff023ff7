#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <vector>

namespace qsep {

// Dense univariate polynomial in s over Q, ascending coefficients, no trailing zeros.
class UPoly {
public:
    std::vector<mpq_class> c;

    UPoly() = default;
    explicit UPoly(const mpq_class& a);
    static UPoly monomial(const mpq_class& a, int k);

    bool is_zero() const { return c.empty(); }
    bool is_one() const { return c.size() == 1 && c[0] == 1; }
    int degree() const { return static_cast<int>(c.size()) - 1; }
    const mpq_class& lead() const { return c.back(); }
    void trim();

    friend UPoly operator+(const UPoly& a, const UPoly& b);
    friend UPoly operator-(const UPoly& a, const UPoly& b);
    friend UPoly operator*(const UPoly& a, const UPoly& b);
    UPoly operator-() const;
    UPoly scaled(const mpq_class& k) const;
    UPoly shifted(int k) const;  // multiply by s^k, k >= 0
    bool operator==(const UPoly& o) const { return c == o.c; }
    bool operator!=(const UPoly& o) const { return !(*this == o); }

    // number of leading zero coefficients at the s^0 end
    int low_order() const;
    void divmod(const UPoly& d, UPoly& quo, UPoly& rem) const;
    UPoly derivative() const;
    mpq_class eval(const mpq_class& x) const;
};

UPoly gcd(UPoly a, UPoly b);

class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Element of Q(s), s = q^{1/2}.  Value is s^e * num / den with
//   num(0) != 0 (or num == 0, then e == 0, den == 1),
//   den monic, den(0) != 0, gcd(num, den) == 1.
// This is canonical, so == is structural.
class ScalarQ {
public:
    ScalarQ() : den_(mpq_class(1)) {}
    ScalarQ(long v);
    ScalarQ(const mpq_class& v);
    ScalarQ(UPoly num, UPoly den, int e);

    static ScalarQ s_pow(int k);  // q^{k/2}
    static ScalarQ q_pow(int k) { return s_pow(2 * k); }
    static ScalarQ q() { return s_pow(2); }
    static ScalarQ qinv() { return s_pow(-2); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return e_ == 0 && den_.is_one() && num_.is_one(); }
    bool is_rational() const { return e_ == 0 && den_.is_one() && num_.degree() <= 0; }
    bool is_laurent() const { return den_.is_one(); }
    mpq_class rational() const;  // requires is_rational()

    const UPoly& num() const { return num_; }
    const UPoly& den() const { return den_; }
    int s_exponent() const { return e_; }

    friend ScalarQ operator+(const ScalarQ& a, const ScalarQ& b);
    friend ScalarQ operator-(const ScalarQ& a, const ScalarQ& b);
    friend ScalarQ operator*(const ScalarQ& a, const ScalarQ& b);
    friend ScalarQ operator/(const ScalarQ& a, const ScalarQ& b);
    ScalarQ operator-() const;
    ScalarQ& operator+=(const ScalarQ& b) { return *this = *this + b; }
    ScalarQ& operator-=(const ScalarQ& b) { return *this = *this - b; }
    ScalarQ& operator*=(const ScalarQ& b) { return *this = *this * b; }
    ScalarQ inverse() const;
    bool operator==(const ScalarQ& o) const { return e_ == o.e_ && num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const ScalarQ& o) const { return !(*this == o); }

    // Evaluate at s = sval.
    mpq_class eval_s(const mpq_class& sval) const;
    // Evaluate at q = qval.  Needs either a rational square root of qval or
    // an expression in integral powers of q only.
    mpq_class specialize_q(const mpq_class& qval) const;
    // d/ds as an element of Q(s).
    ScalarQ d_ds() const;
    // Substitute q -> q^{-1} (s -> s^{-1}).
    ScalarQ bar() const;

    // Human readable form in q, e.g. "q - q^-1", "(q^2 - 1)/(q^2 + 1)".
    std::string str() const;
    // Lossless machine form "e|n0,n1,..|d0,d1,.."; parsed by from_raw.
    std::string raw() const;
    static ScalarQ from_raw(const std::string& text);
    // Accepts the output of str() plus simple arithmetic in q.
    static ScalarQ parse(const std::string& text);

    size_t hash() const;

private:
    void canonicalize();
    UPoly num_, den_;
    int e_ = 0;
};

inline ScalarQ operator*(long k, const ScalarQ& a) { return ScalarQ(k) * a; }

}  // namespace qsep
