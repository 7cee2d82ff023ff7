#include "qsep/cpoly.hpp"

#include <numeric>
#include <stdexcept>

namespace qsep {

bool GrLexLess::operator()(const Exponents& a, const Exponents& b) const {
    int da = std::accumulate(a.begin(), a.end(), 0);
    int db = std::accumulate(b.begin(), b.end(), 0);
    if (da != db) return da < db;
    return a < b;
}

VarList::VarList(std::vector<std::string> names) : names_(std::move(names)) {}

int VarList::index_of(const std::string& name) const {
    for (size_t i = 0; i < names_.size(); ++i)
        if (names_[i] == name) return static_cast<int>(i);
    return -1;
}

std::shared_ptr<const VarList> make_vars(std::vector<std::string> names) {
    return std::make_shared<const VarList>(std::move(names));
}

CPoly::CPoly(std::shared_ptr<const VarList> vars) : vars_(std::move(vars)) {}

CPoly::CPoly(std::shared_ptr<const VarList> vars, const ScalarQ& c) : vars_(std::move(vars)) {
    if (!c.is_zero()) terms_[Exponents(vars_->size(), 0)] = c;
}

CPoly CPoly::var(std::shared_ptr<const VarList> vars, size_t index, int power) {
    if (index >= vars->size()) throw std::out_of_range("CPoly::var index");
    Exponents e(vars->size(), 0);
    e[index] = power;
    CPoly r(vars);
    r.terms_[e] = ScalarQ(1);
    return r;
}

CPoly CPoly::var(std::shared_ptr<const VarList> vars, const std::string& name, int power) {
    int i = vars->index_of(name);
    if (i < 0) throw std::invalid_argument("unknown variable " + name);
    return var(vars, static_cast<size_t>(i), power);
}

void CPoly::check_same(const CPoly& o) const {
    if (!vars_ || !o.vars_) return;
    if (vars_ != o.vars_ && !(*vars_ == *o.vars_))
        throw std::invalid_argument("CPoly: mismatched variable lists");
}

bool CPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    auto& e = terms_.begin()->first;
    for (int x : e)
        if (x) return false;
    return true;
}

ScalarQ CPoly::constant_term() const {
    if (!vars_) return ScalarQ();
    return coeff(Exponents(vars_->size(), 0));
}

int CPoly::total_degree() const {
    if (terms_.empty()) return -1;
    auto& e = terms_.rbegin()->first;
    return std::accumulate(e.begin(), e.end(), 0);
}

int CPoly::degree_in(size_t var) const {
    int d = -1;
    for (auto& [e, c] : terms_) d = std::max(d, e[var]);
    return d;
}

void CPoly::add_term(const Exponents& e, const ScalarQ& c) {
    if (c.is_zero()) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

ScalarQ CPoly::coeff(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? ScalarQ() : it->second;
}

CPoly CPoly::operator+(const CPoly& o) const {
    check_same(o);
    // a default-constructed zero has no variable list and adopts the other's
    CPoly r = vars_ ? *this : o;
    const CPoly& other = vars_ ? o : *this;
    for (auto& [e, c] : other.terms_) r.add_term(e, c);
    return r;
}

CPoly CPoly::operator-() const {
    CPoly r = *this;
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

CPoly CPoly::operator-(const CPoly& o) const { return *this + (-o); }

CPoly CPoly::operator*(const CPoly& o) const {
    check_same(o);
    CPoly r(vars_ ? vars_ : o.vars_);
    if (terms_.empty() || o.terms_.empty()) return r;
    Exponents e(r.vars_->size());
    for (auto& [ea, ca] : terms_) {
        for (auto& [eb, cb] : o.terms_) {
            for (size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

CPoly CPoly::scaled(const ScalarQ& k) const {
    CPoly r(vars_);
    if (k.is_zero()) return r;
    for (auto& [e, c] : terms_) r.terms_.emplace(e, c * k);
    return r;
}

bool CPoly::operator==(const CPoly& o) const {
    if (terms_.empty() && o.terms_.empty()) return true;
    check_same(o);
    return terms_ == o.terms_;
}

CPoly CPoly::derivative(size_t var) const {
    CPoly r(vars_);
    for (auto& [e, c] : terms_) {
        if (e[var] == 0) continue;
        Exponents f = e;
        f[var] -= 1;
        r.add_term(f, c * ScalarQ(static_cast<long>(e[var])));
    }
    return r;
}

CPoly CPoly::coefficient_of(size_t var, int k) const {
    CPoly r(vars_);
    for (auto& [e, c] : terms_) {
        if (e[var] != k) continue;
        Exponents f = e;
        f[var] = 0;
        r.add_term(f, c);
    }
    return r;
}

CPoly CPoly::substitute(const std::vector<CPoly>& values, std::shared_ptr<const VarList> target) const {
    if (vars_ && values.size() != vars_->size()) throw std::invalid_argument("substitute: arity");
    CPoly r(target);
    for (auto& [e, c] : terms_) {
        CPoly m(target, c);
        for (size_t i = 0; i < e.size(); ++i)
            for (int k = 0; k < e[i]; ++k) m = m * values[i];
        r += m;
    }
    return r;
}

bool CPoly::divides_into(const CPoly& num, CPoly* quotient) const {
    if (is_zero()) throw std::domain_error("division by zero polynomial");
    CPoly rem = num;
    CPoly quo(num.vars_ ? num.vars_ : vars_);
    const auto& [le, lc] = *terms_.rbegin();
    // with a single divisor, num is a multiple iff every leading term met
    // along the way is divisible by the divisor's leading term
    while (!rem.is_zero()) {
        const auto& [re, rc] = *rem.terms_.rbegin();
        Exponents d(re.size());
        for (size_t i = 0; i < re.size(); ++i) {
            d[i] = re[i] - le[i];
            if (d[i] < 0) return false;
        }
        CPoly t(quo.vars_);
        t.terms_[d] = rc / lc;
        quo += t;
        rem -= t * *this;
    }
    if (quotient) *quotient = quo;
    return true;
}

std::string CPoly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        std::string mono;
        for (size_t i = 0; i < it->first.size(); ++i) {
            int k = it->first[i];
            if (!k) continue;
            if (!mono.empty()) mono += "*";
            mono += (*vars_)[i];
            if (k > 1) mono += "^" + std::to_string(k);
        }
        std::string c = it->second.str();
        bool compound = c.find_first_of("+-/", 1) != std::string::npos;
        std::string term;
        if (mono.empty()) {
            term = compound ? "(" + c + ")" : c;
        } else if (c == "1") {
            term = mono;
        } else if (c == "-1") {
            term = "-" + mono;
        } else {
            term = (compound ? "(" + c + ")" : c) + "*" + mono;
        }
        if (!first) out += " + ";
        out += term;
        first = false;
    }
    return out;
}

}  // namespace qsep
