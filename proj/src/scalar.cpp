#include "qsep/scalar.hpp"

#include <cctype>
#include <functional>
#include <sstream>

namespace qsep {

UPoly::UPoly(const mpq_class& a) {
    if (a != 0) c.push_back(a);
}

UPoly UPoly::monomial(const mpq_class& a, int k) {
    UPoly r;
    if (a == 0) return r;
    r.c.assign(k + 1, mpq_class(0));
    r.c[k] = a;
    return r;
}

void UPoly::trim() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()));
    for (size_t i = 0; i < r.c.size(); ++i) {
        if (i < a.c.size()) r.c[i] = a.c[i];
        if (i < b.c.size()) r.c[i] += b.c[i];
    }
    r.trim();
    return r;
}

UPoly UPoly::operator-() const {
    UPoly r = *this;
    for (auto& x : r.c) x = -x;
    return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }

UPoly operator*(const UPoly& a, const UPoly& b) {
    UPoly r;
    if (a.is_zero() || b.is_zero()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, mpq_class(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    r.trim();
    return r;
}

UPoly UPoly::scaled(const mpq_class& k) const {
    if (k == 0) return UPoly();
    UPoly r = *this;
    for (auto& x : r.c) x *= k;
    return r;
}

UPoly UPoly::shifted(int k) const {
    if (is_zero() || k == 0) return *this;
    UPoly r;
    r.c.assign(k, mpq_class(0));
    r.c.insert(r.c.end(), c.begin(), c.end());
    return r;
}

int UPoly::low_order() const {
    int k = 0;
    while (k < static_cast<int>(c.size()) && c[k] == 0) ++k;
    return k;
}

void UPoly::divmod(const UPoly& d, UPoly& quo, UPoly& rem) const {
    if (d.is_zero()) throw std::domain_error("polynomial division by zero");
    rem = *this;
    quo = UPoly();
    int dd = d.degree();
    if (rem.degree() < dd) return;
    quo.c.assign(rem.degree() - dd + 1, mpq_class(0));
    mpq_class inv_lead = 1 / d.lead();
    while (!rem.is_zero() && rem.degree() >= dd) {
        int k = rem.degree() - dd;
        mpq_class f = rem.lead() * inv_lead;
        quo.c[k] = f;
        for (int i = 0; i <= dd; ++i) rem.c[k + i] -= f * d.c[i];
        rem.trim();
    }
    quo.trim();
}

UPoly UPoly::derivative() const {
    UPoly r;
    for (size_t i = 1; i < c.size(); ++i) r.c.push_back(c[i] * static_cast<long>(i));
    r.trim();
    return r;
}

mpq_class UPoly::eval(const mpq_class& x) const {
    mpq_class acc = 0;
    for (size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

UPoly gcd(UPoly a, UPoly b) {
    while (!b.is_zero()) {
        UPoly q, r;
        a.divmod(b, q, r);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) a = a.scaled(1 / a.lead());
    return a;
}

// ---------------------------------------------------------------------------

ScalarQ::ScalarQ(long v) : num_(mpq_class(v)), den_(mpq_class(1)) {}
ScalarQ::ScalarQ(const mpq_class& v) : den_(mpq_class(1)) {
    mpq_class c = v;
    c.canonicalize();
    num_ = UPoly(c);
}

ScalarQ::ScalarQ(UPoly num, UPoly den, int e) : num_(std::move(num)), den_(std::move(den)), e_(e) {
    if (den_.is_zero()) throw std::domain_error("ScalarQ: zero denominator");
    canonicalize();
}

ScalarQ ScalarQ::s_pow(int k) {
    ScalarQ r(1);
    r.e_ = k;
    return r;
}

void ScalarQ::canonicalize() {
    if (num_.is_zero()) {
        e_ = 0;
        den_ = UPoly(mpq_class(1));
        return;
    }
    int k = num_.low_order();
    if (k) {
        num_.c.erase(num_.c.begin(), num_.c.begin() + k);
        e_ += k;
    }
    k = den_.low_order();
    if (k) {
        den_.c.erase(den_.c.begin(), den_.c.begin() + k);
        e_ -= k;
    }
    if (den_.degree() > 0) {
        UPoly g = gcd(num_, den_);
        if (g.degree() > 0) {
            UPoly q, r;
            num_.divmod(g, q, r);
            num_ = std::move(q);
            den_.divmod(g, q, r);
            den_ = std::move(q);
        }
    }
    if (den_.lead() != 1) {
        mpq_class f = 1 / den_.lead();
        num_ = num_.scaled(f);
        den_ = den_.scaled(f);
    }
}

mpq_class ScalarQ::rational() const {
    if (!is_rational()) throw std::domain_error("ScalarQ is not a rational constant: " + str());
    return num_.is_zero() ? mpq_class(0) : num_.c[0];
}

ScalarQ operator+(const ScalarQ& a, const ScalarQ& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    int e = std::min(a.e_, b.e_);
    ScalarQ r;
    r.e_ = e;
    if (a.den_ == b.den_) {
        r.num_ = a.num_.shifted(a.e_ - e) + b.num_.shifted(b.e_ - e);
        r.den_ = a.den_;
    } else {
        r.num_ = a.num_.shifted(a.e_ - e) * b.den_ + b.num_.shifted(b.e_ - e) * a.den_;
        r.den_ = a.den_ * b.den_;
    }
    r.canonicalize();
    return r;
}

ScalarQ ScalarQ::operator-() const {
    ScalarQ r = *this;
    r.num_ = -r.num_;
    return r;
}

ScalarQ operator-(const ScalarQ& a, const ScalarQ& b) { return a + (-b); }

ScalarQ operator*(const ScalarQ& a, const ScalarQ& b) {
    if (a.is_zero() || b.is_zero()) return ScalarQ();
    ScalarQ r;
    r.e_ = a.e_ + b.e_;
    r.num_ = a.num_ * b.num_;
    if (a.den_.is_one()) {
        r.den_ = b.den_;
    } else if (b.den_.is_one()) {
        r.den_ = a.den_;
    } else {
        r.den_ = a.den_ * b.den_;
    }
    if (r.den_.degree() > 0 || r.den_.lead() != 1) r.canonicalize();
    return r;
}

ScalarQ ScalarQ::inverse() const {
    if (is_zero()) throw std::domain_error("ScalarQ: division by zero");
    return ScalarQ(den_, num_, -e_);
}

ScalarQ operator/(const ScalarQ& a, const ScalarQ& b) { return a * b.inverse(); }

mpq_class ScalarQ::eval_s(const mpq_class& sval) const {
    mpq_class d = den_.eval(sval);
    if (d == 0) throw PoleError("pole: denominator " + ScalarQ(den_, UPoly(mpq_class(1)), 0).str() + " vanishes");
    if (sval == 0 && e_ < 0) throw PoleError("pole: negative power of q^(1/2) at 0");
    mpq_class p = 1;
    mpq_class base = e_ >= 0 ? sval : mpq_class(1 / sval);
    for (int i = 0; i < std::abs(e_); ++i) p *= base;
    return p * num_.eval(sval) / d;
}

static bool rational_sqrt(const mpq_class& v, mpq_class& out) {
    if (v < 0) return false;
    mpz_class n = v.get_num(), d = v.get_den();
    mpz_class rn, rd;
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    out = mpq_class(rn, rd);
    out.canonicalize();
    return true;
}

mpq_class ScalarQ::specialize_q(const mpq_class& qval) const {
    mpq_class sv;
    if (rational_sqrt(qval, sv)) return eval_s(sv);
    // otherwise every exponent of s must be even
    auto even_only = [](const UPoly& p) {
        for (size_t i = 1; i < p.c.size(); i += 2)
            if (p.c[i] != 0) return false;
        return true;
    };
    if ((e_ % 2) != 0 || !even_only(num_) || !even_only(den_))
        throw std::domain_error("specialize_q: q = " + qval.get_str() + " has no rational square root");
    auto squash = [](const UPoly& p) {
        UPoly r;
        for (size_t i = 0; i < p.c.size(); i += 2) r.c.push_back(p.c[i]);
        r.trim();
        return r;
    };
    mpq_class d = squash(den_).eval(qval);
    if (d == 0) throw PoleError("pole: denominator " + ScalarQ(den_, UPoly(mpq_class(1)), 0).str() + " vanishes");
    mpq_class p = 1;
    mpq_class base = e_ >= 0 ? qval : mpq_class(1 / qval);
    for (int i = 0; i < std::abs(e_) / 2; ++i) p *= base;
    return p * squash(num_).eval(qval) / d;
}

ScalarQ ScalarQ::d_ds() const {
    if (is_zero()) return ScalarQ();
    // f = s^e n / d ; f' = s^{e-1} (e n d + s n' d - s n d') / d^2
    UPoly a = num_.scaled(mpq_class(e_)) * den_;
    UPoly b = (num_.derivative() * den_ - num_ * den_.derivative()).shifted(1);
    return ScalarQ(a + b, den_ * den_, e_ - 1);
}

ScalarQ ScalarQ::bar() const {
    if (is_zero()) return *this;
    // s^{-e} n(1/s) / d(1/s) = s^{-e} s^{dd-dn} rev(n)/rev(d)
    UPoly rn(num_), rd(den_);
    std::reverse(rn.c.begin(), rn.c.end());
    std::reverse(rd.c.begin(), rd.c.end());
    return ScalarQ(rn, rd, -e_ + den_.degree() - num_.degree());
}

static std::string q_monomial(int sexp) {
    if (sexp == 0) return "";
    if (sexp % 2 == 0) {
        int k = sexp / 2;
        if (k == 1) return "q";
        return "q^" + std::to_string(k);
    }
    return "q^(" + std::to_string(sexp) + "/2)";
}

static std::string laurent_str(const UPoly& p, int e) {
    std::string out;
    bool first = true;
    for (int i = p.degree(); i >= 0; --i) {
        const mpq_class& a = p.c[i];
        if (a == 0) continue;
        std::string mono = q_monomial(i + e);
        mpq_class mag = abs(a);
        std::string coef;
        if (mono.empty()) {
            coef = mag.get_str();
        } else if (mag != 1) {
            coef = mag.get_str() + "*";
        }
        if (first) {
            out += (a < 0 ? "-" : "") + coef + mono;
        } else {
            out += (a < 0 ? " - " : " + ") + coef + mono;
        }
        first = false;
    }
    return first ? "0" : out;
}

std::string ScalarQ::str() const {
    if (is_zero()) return "0";
    if (den_.is_one()) return laurent_str(num_, e_);
    int nterms = 0;
    for (auto& x : num_.c) nterms += (x != 0);
    std::string n = laurent_str(num_, e_);
    if (nterms > 1) n = "(" + n + ")";
    return n + "/(" + laurent_str(den_, 0) + ")";
}

std::string ScalarQ::raw() const {
    std::ostringstream os;
    os << e_ << "|";
    for (size_t i = 0; i < num_.c.size(); ++i) os << (i ? "," : "") << num_.c[i].get_str();
    os << "|";
    for (size_t i = 0; i < den_.c.size(); ++i) os << (i ? "," : "") << den_.c[i].get_str();
    return os.str();
}

ScalarQ ScalarQ::from_raw(const std::string& text) {
    auto p1 = text.find('|');
    auto p2 = text.find('|', p1 == std::string::npos ? 0 : p1 + 1);
    if (p1 == std::string::npos || p2 == std::string::npos) throw std::invalid_argument("malformed scalar: " + text);
    auto parse_list = [&](const std::string& s) {
        UPoly p;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            mpq_class v(item);
            v.canonicalize();
            p.c.push_back(v);
        }
        p.trim();
        return p;
    };
    int e = std::stoi(text.substr(0, p1));
    UPoly n = parse_list(text.substr(p1 + 1, p2 - p1 - 1));
    UPoly d = parse_list(text.substr(p2 + 1));
    if (d.is_zero()) throw std::invalid_argument("malformed scalar (zero denominator): " + text);
    ScalarQ r(n, d, e);
    return r;
}

namespace {

// Recursive descent over  expr := term (('+'|'-') term)* ; term := factor (('*'|'/') factor)* ;
// factor := ('-')? atom ('^' exponent)? ; atom := number | 'q' | '(' expr ')'
struct Parser {
    const std::string& t;
    size_t i = 0;
    explicit Parser(const std::string& s) : t(s) {}
    void ws() {
        while (i < t.size() && std::isspace(static_cast<unsigned char>(t[i]))) ++i;
    }
    bool eat(char ch) {
        ws();
        if (i < t.size() && t[i] == ch) {
            ++i;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::invalid_argument("cannot parse scalar '" + t + "': " + what + " at " + std::to_string(i));
    }
    ScalarQ expr() {
        ScalarQ acc = term();
        for (;;) {
            if (eat('+')) acc += term();
            else if (eat('-')) acc -= term();
            else return acc;
        }
    }
    ScalarQ term() {
        ScalarQ acc = factor();
        for (;;) {
            if (eat('*')) acc *= factor();
            else if (eat('/')) acc = acc / factor();
            else return acc;
        }
    }
    long integer() {
        ws();
        bool neg = false;
        if (i < t.size() && (t[i] == '-' || t[i] == '+')) neg = t[i++] == '-';
        size_t st = i;
        while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
        if (st == i) fail("expected integer");
        long v = std::stol(t.substr(st, i - st));
        return neg ? -v : v;
    }
    // exponent in units of 1/2
    int half_exponent() {
        if (eat('(')) {
            long a = integer();
            long b = 1;
            if (eat('/')) b = integer();
            if (!eat(')')) fail("expected ')'");
            if (b == 1) return static_cast<int>(2 * a);
            if (b == 2) return static_cast<int>(a);
            fail("exponent must be a multiple of 1/2");
        }
        return static_cast<int>(2 * integer());
    }
    ScalarQ factor() {
        if (eat('-')) return -factor();
        ws();
        ScalarQ base;
        bool is_q = false;
        if (eat('(')) {
            base = expr();
            if (!eat(')')) fail("expected ')'");
        } else if (i < t.size() && t[i] == 'q') {
            ++i;
            is_q = true;
        } else if (i < t.size() && t[i] == 's') {
            ++i;
            base = ScalarQ::s_pow(1);
        } else {
            size_t st = i;
            while (i < t.size() && std::isdigit(static_cast<unsigned char>(t[i]))) ++i;
            if (st == i) fail("unexpected character");
            base = ScalarQ(mpq_class(t.substr(st, i - st)));
        }
        if (eat('^')) {
            int he = half_exponent();
            if (is_q) return ScalarQ::s_pow(he);
            if (he % 2) fail("half-integer power of a non-q base");
            int k = he / 2;
            ScalarQ r(1);
            ScalarQ b = k < 0 ? base.inverse() : base;
            for (int j = 0; j < std::abs(k); ++j) r *= b;
            return r;
        }
        return is_q ? ScalarQ::q() : base;
    }
};

}  // namespace

ScalarQ ScalarQ::parse(const std::string& text) {
    Parser p(text);
    ScalarQ r = p.expr();
    p.ws();
    if (p.i != text.size()) p.fail("trailing input");
    return r;
}

size_t ScalarQ::hash() const {
    return std::hash<std::string>()(raw());
}

}  // namespace qsep
