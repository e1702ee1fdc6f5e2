#include "nfkp/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace nfkp {

void TruncParams::validate() const {
    if (d < 1) throw std::invalid_argument("TruncParams: d must be >= 1");
    if (M < 1) throw std::invalid_argument("TruncParams: M must be >= 1");
    if (!(F <= -1 && 1 <= N)) throw std::invalid_argument("TruncParams: need F <= -1 <= 1 <= N");
    if (V < 1) throw std::invalid_argument("TruncParams: V must be >= 1");
    if (K < 1) throw std::invalid_argument("TruncParams: K must be >= 1");
    if (guard < 0) throw std::invalid_argument("TruncParams: guard must be >= 0");
    if (!(hbar > 0.0)) throw std::invalid_argument("TruncParams: hbar must be positive");
}

Symbol::Symbol(const TruncParams& p) : p_(p), zero_(p.d, p.M) {}

Symbol Symbol::identity(const TruncParams& p) {
    return monomial(p, 0, LoopFn::constant(p.d, p.M, 1.0));
}

Symbol Symbol::xi(const TruncParams& p, int n) {
    return monomial(p, n, LoopFn::constant(p.d, p.M, 1.0));
}

Symbol Symbol::monomial(const TruncParams& p, int n, LoopFn f) {
    Symbol s(p);
    s.set(n, std::move(f));
    return s;
}

int Symbol::order() const {
    for (int n = highest(); n >= lo_ && !c_.empty(); --n) {
        if (!c_[static_cast<std::size_t>(n - lo_)].is_zero()) return n;
    }
    return INT_MIN;
}

const LoopFn& Symbol::coeff(int n) const {
    if (c_.empty() || n < lo_ || n > highest()) return zero_;
    return c_[static_cast<std::size_t>(n - lo_)];
}

LoopFn& Symbol::coeff_mut(int n) {
    if (n < p_.working_floor() || n > p_.N) {
        throw std::out_of_range("Symbol: order " + std::to_string(n) + " outside [working floor, N]");
    }
    if (c_.empty()) {
        lo_ = n;
        c_.emplace_back(p_.d, p_.M);
    } else if (n < lo_) {
        c_.insert(c_.begin(), static_cast<std::size_t>(lo_ - n), LoopFn(p_.d, p_.M));
        lo_ = n;
    } else if (n > highest()) {
        c_.resize(static_cast<std::size_t>(n - lo_ + 1), LoopFn(p_.d, p_.M));
    }
    return c_[static_cast<std::size_t>(n - lo_)];
}

void Symbol::require_compatible(const Symbol& b, const char* op) const {
    if (!p_.same_algebra(b.p_)) {
        throw std::invalid_argument(std::string("Symbol::") + op + ": truncation parameter mismatch");
    }
}

Symbol& Symbol::operator+=(const Symbol& b) { return axpy(1.0, b); }
Symbol& Symbol::operator-=(const Symbol& b) { return axpy(-1.0, b); }

Symbol& Symbol::operator*=(Complex s) {
    for (auto& f : c_) f *= s;
    return *this;
}

Symbol& Symbol::axpy(Complex s, const Symbol& b) {
    require_compatible(b, "add");
    if (b.c_.empty()) return *this;
    for (int n = b.lo_; n <= b.highest(); ++n) {
        const LoopFn& f = b.coeff(n);
        if (f.is_zero()) continue;
        coeff_mut(n).axpy(s, f);
    }
    return *this;
}

void Symbol::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    std::size_t front = 0;
    while (front < c_.size() && c_[front].is_zero()) ++front;
    if (front > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(front));
        lo_ += static_cast<int>(front);
    }
}

namespace {

Symbol project(const Symbol& a, bool differential) {
    Symbol out(a.params());
    if (a.empty()) return out;
    for (int n = a.lowest(); n <= a.highest(); ++n) {
        if ((n >= 0) != differential) continue;
        const LoopFn& f = a.coeff(n);
        if (!f.is_zero()) out.set(n, f);
    }
    return out;
}

}  // namespace

Symbol compose(const Symbol& a, const Symbol& b) { return compose(a, b, INT_MIN); }

Symbol compose(const Symbol& a, const Symbol& b, int min_order) {
    if (!a.params().same_algebra(b.params())) {
        throw std::invalid_argument("compose: truncation parameter mismatch");
    }
    const TruncParams& p = a.params();
    Symbol out(p);
    if (a.empty() || b.empty()) return out;
    const int floor = std::max(p.working_floor(), min_order);

    std::vector<int> band(static_cast<std::size_t>(b.highest() - b.lowest() + 1));
    for (int nb = b.lowest(); nb <= b.highest(); ++nb) band[static_cast<std::size_t>(nb - b.lowest())] = b.coeff(nb).bandwidth();

    // Terms a_na d^k b_nb land on order t = na + nb - k. For fixed (na, t) the
    // derivatives are diagonal on Fourier modes, so they are summed into one
    // function G first and a single convolution a_na * G is done.
    LoopFn G(p.d, p.M);
    std::vector<Real> coef;
    for (int na = a.lowest(); na <= a.highest(); ++na) {
        const LoopFn& an = a.coeff(na);
        if (an.is_zero()) continue;
        const int kmax = na + b.highest() - floor;
        if (kmax < 0) continue;
        // hbar^k/k! d_xi^k xi^na = hbar^k binom(na, k) xi^(na - k); binomial kept
        // exact by multiplying before dividing
        coef.assign(static_cast<std::size_t>(kmax + 1), Real{0});
        Real binom = 1;
        Real hbar_k = 1;
        for (int k = 0; k <= kmax; ++k) {
            if (k > 0) {
                binom = binom * (na - k + 1) / k;
                hbar_k *= p.hbar;
            }
            coef[static_cast<std::size_t>(k)] = binom * hbar_k;
        }
        const int tmax = std::min(p.N, na + b.highest());
        for (int t = floor; t <= tmax; ++t) {
            G.set_zero();
            bool any = false;
            for (int nb = std::max(b.lowest(), t - na); nb <= b.highest(); ++nb) {
                const int k = na + nb - t;
                const Real c = coef[static_cast<std::size_t>(k)];
                if (c == 0) break;  // na >= 0 and k > na: zero from here on
                const int bw = band[static_cast<std::size_t>(nb - b.lowest())];
                if (bw < 0 || (k > 0 && bw == 0)) continue;
                G.add_dx(c, b.coeff(nb), k);
                any = true;
            }
            if (any) out.coeff_mut(t).add_product(1.0, an, G);
        }
    }
    out.trim();
    return out;
}

Symbol commutator(const Symbol& a, const Symbol& b) {
    Symbol out = compose(a, b);
    out -= compose(b, a);
    return out;
}

Symbol project_D(const Symbol& a) { return project(a, true); }
Symbol project_S(const Symbol& a) { return project(a, false); }

std::pair<Symbol, Symbol> split_DS(const Symbol& a) { return {project_D(a), project_S(a)}; }

Symbol power(const Symbol& a, int n) {
    if (n <= 0) throw std::invalid_argument("power: exponent must be positive");
    Symbol out = a;
    for (int i = 1; i < n; ++i) out = compose(out, a);
    return out;
}

Symbol invert(const Symbol& a) {
    const TruncParams& p = a.params();
    const int ord = a.order();
    if (ord == INT_MIN) throw std::domain_error("invert: zero symbol");
    if (ord > 0) throw std::invalid_argument("invert: symbol has positive order");
    const LoopFn& lead = a.coeff(0);
    if (lead.is_zero()) throw std::domain_error("invert: order-0 coefficient vanishes");

    const Symbol lead_inv = Symbol::monomial(p, 0, lead.pointwise_inverse());
    // a = lead (1 + r), r = lead^{-1} (a - lead), order <= -1
    Symbol tail = a;
    tail.coeff_mut(0) = LoopFn(p.d, p.M);
    tail.trim();
    const Symbol minus_r = -compose(lead_inv, tail);

    Symbol series = Symbol::identity(p);
    Symbol term = Symbol::identity(p);
    while (true) {
        term = compose(term, minus_r);
        if (term.is_zero()) break;
        series += term;
    }
    return compose(series, lead_inv);
}

Symbol conj(const Symbol& s, const Symbol& a) { return compose(compose(s, a), invert(s)); }

Eigen::MatrixXcd realize_matrix(const Symbol& a, int Mr) {
    const TruncParams& p = a.params();
    if (Mr < 1 || Mr > p.M) throw std::invalid_argument("realize_matrix: realization cutoff must lie in [1, M]");
    const int d = p.d;
    const int size = 2 * Mr * d;
    auto slot = [Mr](int m) { return m < 0 ? m + Mr : m + Mr - 1; };
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(size, size);
    if (a.empty()) return out;
    for (int n = std::max(a.lowest(), p.F); n <= a.highest(); ++n) {
        const LoopFn& f = a.coeff(n);
        const int band = f.bandwidth();
        if (band < 0) continue;
        for (int m = -Mr; m <= Mr; ++m) {
            if (m == 0) continue;
            const Complex eigen = std::pow(Complex{0.0, p.hbar * m}, n);
            for (int q = -band; q <= band; ++q) {
                const int target = m + q;
                if (target == 0 || target < -Mr || target > Mr) continue;
                for (int r = 0; r < d; ++r)
                    for (int c = 0; c < d; ++c)
                        out(slot(target) * d + r, slot(m) * d + c) += f.at(q, r, c) * eigen;
            }
        }
    }
    return out;
}

Complex hs_inner(const Symbol& a, const Symbol& b, int Mr) {
    if (a.order() > -1 || b.order() > -1) {
        std::clog << "nfkp: hs_inner on symbols of order >= 0; the Hilbert-Schmidt value "
                     "depends strongly on the realization cutoff\n";
    }
    const Eigen::MatrixXcd ra = realize_matrix(a, Mr);
    const Eigen::MatrixXcd rb = realize_matrix(b, Mr);
    return (ra.array() * rb.conjugate().array()).sum();
}

double norm(const Symbol& a) {
    if (a.empty()) return 0.0;
    double s = 0.0;
    for (int n = std::max(a.lowest(), a.params().F); n <= a.highest(); ++n) {
        const double v = a.coeff(n).norm();
        s += v * v;
    }
    return std::sqrt(s);
}

double distance(const Symbol& a, const Symbol& b) { return norm(a - b); }

Symbol scale_xi(const Symbol& a, double factor) {
    Symbol out = a;
    if (a.empty()) return out;
    for (int n = a.lowest(); n <= a.highest(); ++n) {
        if (!a.coeff(n).is_zero()) out.coeff_mut(n) *= std::pow(factor, n);
    }
    return out;
}

const LoopFn& sigma(const Symbol& a, int n) { return a.coeff(n); }

}  // namespace nfkp
