#include "polycorr/genpoly.hpp"
#include "polycorr/errors.hpp"

#include <sstream>
#include <tuple>

namespace polycorr {

namespace {

template <typename K>
void merge_add(std::map<K, int>& into, const std::map<K, int>& from) {
    for (const auto& [k, v] : from) {
        auto it = into.find(k);
        if (it == into.end()) {
            if (v != 0) into.emplace(k, v);
        } else {
            it->second += v;
            if (it->second == 0) into.erase(it);
        }
    }
}

} // namespace

bool Exponent::operator<(const Exponent& o) const {
    return std::tie(beta, mu, npow, t, x, ttree) <
           std::tie(o.beta, o.mu, o.npow, o.t, o.x, o.ttree);
}

Exponent Exponent::operator+(const Exponent& o) const {
    Exponent r = *this;
    r.beta += o.beta;
    r.mu += o.mu;
    r.npow += o.npow;
    merge_add(r.t, o.t);
    merge_add(r.x, o.x);
    merge_add(r.ttree, o.ttree);
    return r;
}

GenPoly GenPoly::constant(Coeff c) { return monomial(Exponent{}, c); }

GenPoly GenPoly::monomial(const Exponent& e, Coeff c) {
    GenPoly p;
    p.add_term(e, c);
    return p;
}

Coeff GenPoly::coeff(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0 : it->second;
}

void GenPoly::add_term(const Exponent& e, Coeff c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

GenPoly& GenPoly::operator+=(const GenPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

GenPoly& GenPoly::operator-=(const GenPoly& o) {
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

GenPoly GenPoly::operator+(const GenPoly& o) const {
    GenPoly r = *this;
    r += o;
    return r;
}

GenPoly GenPoly::operator-(const GenPoly& o) const {
    GenPoly r = *this;
    r -= o;
    return r;
}

GenPoly GenPoly::operator*(const GenPoly& o) const {
    GenPoly r;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) r.add_term(ea + eb, ca * cb);
    return r;
}

GenPoly GenPoly::operator*(Coeff c) const {
    GenPoly r;
    if (c == 0) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

GenPoly GenPoly::operator-() const { return *this * Coeff(-1); }

GenPoly GenPoly::divide_exact(Coeff c) const {
    if (c == 0) throw std::logic_error("divide_exact by zero");
    GenPoly r;
    for (const auto& [e, k] : terms_) {
        if (k % c != 0)
            throw std::logic_error("divide_exact: coefficient not divisible");
        r.terms_.emplace(e, k / c);
    }
    return r;
}

GenPoly GenPoly::set_x_zero() const {
    GenPoly r;
    for (const auto& [e, c] : terms_) {
        Exponent stripped = e;
        stripped.x.clear();
        r.add_term(stripped, c);
    }
    return r;
}

int GenPoly::beta_degree() const {
    if (terms_.empty()) throw schema_error("beta_degree of the zero polynomial");
    int deg = terms_.begin()->first.beta;
    for (const auto& [e, c] : terms_) deg = std::max(deg, e.beta);
    return deg;
}

std::string GenPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        Coeff a = c;
        if (first) {
            if (a < 0) { os << "-"; a = -a; }
        } else {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;

        std::ostringstream factors;
        auto put = [&factors](const std::string& name, int k) {
            if (k == 0) return;
            if (factors.tellp() > 0) factors << "*";
            factors << name;
            if (k != 1) factors << "^" << k;
        };
        put("beta", e.beta);
        put("mu", e.mu);
        put("N", e.npow);
        for (const auto& [q, k] : e.t) put("t" + std::to_string(q), k);
        for (const auto& [p, k] : e.x)
            put("x[" + std::to_string(p.x) + "," + std::to_string(p.y) + "]", k);
        for (const auto& [code, k] : e.ttree) put("t{" + code + "}", k);

        const std::string fs = factors.str();
        if (fs.empty()) {
            os << a;
        } else {
            if (a != 1) os << a << "*";
            os << fs;
        }
    }
    return os.str();
}

GenPoly beta_pow(int k) {
    Exponent e;
    e.beta = k;
    return GenPoly::monomial(e);
}

GenPoly mu_pow(int k) {
    Exponent e;
    e.mu = k;
    return GenPoly::monomial(e);
}

GenPoly n_pow(int k) {
    Exponent e;
    e.npow = k;
    return GenPoly::monomial(e);
}

GenPoly t_var(int q, int k) {
    Exponent e;
    if (k != 0) e.t[q] = k;
    return GenPoly::monomial(e);
}

GenPoly x_var(Pt a, int k) {
    Exponent e;
    if (k != 0) e.x[a] = k;
    return GenPoly::monomial(e);
}

GenPoly ttree_var(const std::string& code, int k) {
    Exponent e;
    if (k != 0) e.ttree[code] = k;
    return GenPoly::monomial(e);
}

} // namespace polycorr
