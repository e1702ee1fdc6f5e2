#include "nfkp/tseries.hpp"

#include <algorithm>
#include <cassert>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace nfkp {

TMono TMono::t(int K, int n, int power) {
    if (n < 1 || n > K) throw std::invalid_argument("TMono::t: time index out of range");
    TMono m(K);
    m.exp(n) = power;
    return m;
}

int TMono::val() const {
    int v = 0;
    for (std::size_t i = 0; i < e_.size(); ++i) v += static_cast<int>(i + 1) * e_[i];
    return v;
}

TMono TMono::operator*(const TMono& o) const {
    if (o.e_.size() != e_.size()) throw std::invalid_argument("TMono: number of times differs");
    TMono out = *this;
    for (std::size_t i = 0; i < e_.size(); ++i) out.e_[i] += o.e_[i];
    return out;
}

double TMono::evaluate(std::span<const double> t) const {
    if (t.size() < e_.size()) throw std::invalid_argument("TMono::evaluate: too few time values");
    double v = 1.0;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        for (int k = 0; k < e_[i]; ++k) v *= t[i];
    }
    return v;
}

std::string TMono::str() const {
    std::string s;
    for (std::size_t i = 0; i < e_.size(); ++i) {
        if (e_[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += "t" + std::to_string(i + 1);
        if (e_[i] > 1) s += "^" + std::to_string(e_[i]);
    }
    return s.empty() ? "1" : s;
}

std::strong_ordering TMono::operator<=>(const TMono& o) const {
    if (auto c = val() <=> o.val(); c != 0) return c;
    // higher power of t_1 first within a grade
    for (std::size_t i = 0; i < std::min(e_.size(), o.e_.size()); ++i) {
        if (auto c = o.e_[i] <=> e_[i]; c != 0) return c;
    }
    return e_.size() <=> o.e_.size();
}

std::vector<TMono> monomials_up_to(int K, int cap) {
    std::vector<TMono> out;
    TMono cur(K);
    std::function<void(int, int)> rec = [&](int n, int budget) {
        if (n > K) {
            out.push_back(cur);
            return;
        }
        for (int p = 0; p * n <= budget; ++p) {
            cur.exp(n) = p;
            rec(n + 1, budget - p * n);
        }
        cur.exp(n) = 0;
    };
    rec(1, cap);
    std::sort(out.begin(), out.end());
    return out;
}

TSeries::TSeries(const TruncParams& p, int base) : p_(p), base_(base), zero_(p) {}

TSeries TSeries::constant(const Symbol& s, int base) {
    TSeries x(s.params(), base);
    x.add_term(TMono(s.params().K), s);
    return x;
}

TSeries TSeries::one(const TruncParams& p) { return constant(Symbol::identity(p), 0); }

TSeries TSeries::monomial(const TMono& alpha, const Symbol& s, int base) {
    TSeries x(s.params(), base);
    x.add_term(alpha, s);
    return x;
}

const Symbol& TSeries::coeff(const TMono& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? zero_ : it->second;
}

void TSeries::add_term(const TMono& alpha, const Symbol& s, Complex factor) {
    if (alpha.num_times() != p_.K) throw std::invalid_argument("TSeries: monomial has wrong number of times");
    if (alpha.val() > p_.V || s.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        Symbol scaled = s;
        if (factor != Complex{1.0}) scaled *= factor;
        terms_.emplace(alpha, std::move(scaled));
    } else {
        it->second.axpy(factor, s);
    }
}

void TSeries::require_compatible(const TSeries& b, const char* op) const {
    if (!(p_ == b.p_)) throw std::invalid_argument(std::string("TSeries::") + op + ": parameter mismatch");
}

TSeries& TSeries::operator+=(const TSeries& b) {
    require_compatible(b, "add");
    for (const auto& [alpha, s] : b.terms_) add_term(alpha, s);
    base_ = std::max(base_, b.base_);
    return *this;
}

TSeries& TSeries::operator-=(const TSeries& b) {
    require_compatible(b, "sub");
    for (const auto& [alpha, s] : b.terms_) add_term(alpha, s, -1.0);
    base_ = std::max(base_, b.base_);
    return *this;
}

TSeries& TSeries::operator*=(Complex s) {
    for (auto& [alpha, sym] : terms_) sym *= s;
    return *this;
}

TSeries TSeries::restrict_val(int cap) const {
    TSeries out(p_, base_);
    for (const auto& [alpha, s] : terms_)
        if (alpha.val() <= cap) out.terms_.emplace(alpha, s);
    return out;
}

int TSeries::min_val() const {
    int v = INT_MAX;
    for (const auto& [alpha, s] : terms_)
        if (!s.is_zero()) v = std::min(v, alpha.val());
    return v;
}

bool TSeries::growth_ok() const {
    for (const auto& [alpha, s] : terms_) {
        const int ord = s.order();
        if (ord != INT_MIN && ord > std::max(alpha.val(), base_)) return false;
    }
    return true;
}

bool TSeries::additive_growth_ok() const {
    for (const auto& [alpha, s] : terms_) {
        const int ord = s.order();
        if (ord != INT_MIN && ord > alpha.val() + base_) return false;
    }
    return true;
}

TSeries tmul(const TSeries& x, const TSeries& y) {
    if (!(x.params() == y.params())) throw std::invalid_argument("tmul: parameter mismatch");
    const int V = x.params().V;
    TSeries out(x.params(), x.base() + y.base());
    for (const auto& [a, sa] : x.terms()) {
        const int va = a.val();
        for (const auto& [b, sb] : y.terms()) {
            if (va + b.val() > V) continue;
            out.add_term(a * b, compose(sa, sb));
        }
    }
    assert(!x.additive_growth_ok() || !y.additive_growth_ok() || out.additive_growth_ok());
    return out;
}

TSeries tpower(const TSeries& x, int n) {
    if (n <= 0) throw std::invalid_argument("tpower: exponent must be positive");
    TSeries out = x;
    for (int i = 1; i < n; ++i) out = tmul(out, x);
    return out;
}

TSeries texp(const TSeries& x) {
    for (const auto& [alpha, s] : x.terms()) {
        if (alpha.is_one() && !s.is_zero()) throw std::invalid_argument("texp: series has a valuation-0 term");
    }
    TSeries out = TSeries::one(x.params());
    TSeries term = TSeries::one(x.params());
    for (int k = 1; k <= x.params().V; ++k) {
        term = tmul(term, x) * Complex{Real{1} / k};
        if (term.terms().empty()) break;
        out += term;
    }
    out.set_base(x.base());
    assert(!x.additive_growth_ok() || out.additive_growth_ok());
    return out;
}

TSeries tinverse(const TSeries& x) {
    const TruncParams& p = x.params();
    const TMono one(p.K);
    const Symbol inv0 = invert(x.coeff(one));
    const TSeries inv0_series = TSeries::constant(inv0);
    // x = x0 (1 + r), r = x0^{-1} (x - x0) has valuation >= 1
    TSeries rest = x;
    rest -= TSeries::constant(x.coeff(one));
    const TSeries minus_r = -tmul(inv0_series, rest.restrict_val(p.V));
    TSeries series = TSeries::one(p);
    TSeries term = TSeries::one(p);
    for (int k = 1; k <= p.V; ++k) {
        term = tmul(term, minus_r);
        if (term.terms().empty()) break;
        series += term;
    }
    TSeries out = tmul(series, inv0_series);
    out.set_base(x.base());
    return out;
}

TSeries conj_T(const TSeries& s, const TSeries& x) {
    TSeries out = tmul(tmul(s, x), tinverse(s));
    out.set_base(x.base());
    return out;
}

TSeries ddt(const TSeries& x, int n) {
    const TruncParams& p = x.params();
    if (n < 1 || n > p.K) throw std::invalid_argument("ddt: time index out of range");
    TSeries out(p, x.base() + n);
    for (const auto& [alpha, s] : x.terms()) {
        const int e = alpha.exp(n);
        if (e == 0) continue;
        TMono lowered = alpha;
        lowered.exp(n) = e - 1;
        out.add_term(lowered, s, static_cast<double>(e));
    }
    return out;
}

TSeries tcommutator(const TSeries& x, const TSeries& y) {
    TSeries out = tmul(x, y);
    out -= tmul(y, x);
    return out;
}

TSeries project_D(const TSeries& x) {
    TSeries out(x.params(), x.base());
    for (const auto& [alpha, s] : x.terms()) out.add_term(alpha, project_D(s));
    return out;
}

TSeries project_S(const TSeries& x) {
    TSeries out(x.params(), x.base());
    for (const auto& [alpha, s] : x.terms()) out.add_term(alpha, project_S(s));
    return out;
}

Symbol eval_t(const TSeries& x, std::span<const double> t) {
    if (static_cast<int>(t.size()) != x.params().K) {
        throw std::invalid_argument("eval_t: expected one value per active time");
    }
    Symbol out(x.params());
    for (const auto& [alpha, s] : x.terms()) out.axpy(alpha.evaluate(t), s);
    return out;
}

TSeries scale_h(const TSeries& x, double h) {
    if (h == 0.0) throw std::invalid_argument("scale_h: h must be nonzero");
    TSeries out(x.params(), x.base());
    for (const auto& [alpha, s] : x.terms()) out.add_term(alpha, scale_xi(s, h), std::pow(h, alpha.val()));
    return out;
}

double norm(const TSeries& x, int val_cap) {
    double m = 0.0;
    for (const auto& [alpha, s] : x.terms())
        if (alpha.val() <= val_cap) m = std::max(m, norm(s));
    return m;
}

double distance(const TSeries& x, const TSeries& y, int val_cap) { return norm(x - y, val_cap); }

TSeries product_integral(const Path& v, int steps, double s) {
    if (steps < 1) throw std::invalid_argument("product_integral: need at least one step");
    if (s < 0.0 || s > 1.0) throw std::invalid_argument("product_integral: s must lie in [0, 1]");
    auto sample = [&](double at) {
        TSeries value = v(at);
        if (value.min_val() < 1) {
            throw std::invalid_argument("product_integral: path has valuation-0 content");
        }
        return value;
    };
    const int j = std::min(static_cast<int>(std::floor(steps * s)), steps);
    const double n = steps;
    const TSeries one = TSeries::one(v(0.0).params());

    // rightmost factor is the earliest time
    TSeries u = one;
    for (int i = j; i >= 1; --i) {
        TSeries factor = one + sample((j - i) / n) * Complex{Real{1} / n};
        u = tmul(factor, u);
    }
    const double remainder = s - j / n;
    if (remainder > 0.0) u = tmul(one + sample(j / n) * Complex{remainder}, u);
    return u;
}

}  // namespace nfkp
