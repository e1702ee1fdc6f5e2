#pragma once

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nfkp/symbol.hpp"

namespace nfkp {

/// Monomial t_1^{a_1} ... t_K^{a_K}, graded by val(t_n) = n.
class TMono {
public:
    TMono() = default;
    explicit TMono(int K) : e_(static_cast<std::size_t>(K), 0) {}
    TMono(std::initializer_list<int> exps) : e_(exps) {}

    /// t_n^power in K variables.
    static TMono t(int K, int n, int power = 1);

    int num_times() const { return static_cast<int>(e_.size()); }
    /// Exponent of t_n, n in [1, K].
    int exp(int n) const { return e_[static_cast<std::size_t>(n - 1)]; }
    int& exp(int n) { return e_[static_cast<std::size_t>(n - 1)]; }
    int val() const;
    bool is_one() const { return val() == 0; }

    TMono operator*(const TMono& o) const;
    /// Numeric value t^alpha.
    double evaluate(std::span<const double> t) const;
    std::string str() const;

    bool operator==(const TMono&) const = default;
    /// Graded order: by valuation, then lexicographically by exponent of t_1, t_2, ...
    std::strong_ordering operator<=>(const TMono& o) const;

private:
    std::vector<int> e_;
};

/// All monomials in K times with val(alpha) <= cap, in canonical order.
std::vector<TMono> monomials_up_to(int K, int cap);

/// Truncated series sum_alpha t^alpha X_alpha in the times t_1..t_K with
/// symbol coefficients; monomials of valuation above V are dropped.
///
/// `base` is the declared base order N0: the coefficient of a valuation-v
/// monomial is expected to have order <= max(v, N0).
class TSeries {
public:
    using TermMap = std::map<TMono, Symbol>;

    TSeries() = default;
    explicit TSeries(const TruncParams& p, int base = 0);

    static TSeries constant(const Symbol& s, int base = 0);
    static TSeries one(const TruncParams& p);
    static TSeries monomial(const TMono& alpha, const Symbol& s, int base = 0);

    const TruncParams& params() const { return p_; }
    int base() const { return base_; }
    void set_base(int b) { base_ = b; }

    const TermMap& terms() const { return terms_; }
    /// Coefficient of t^alpha (zero symbol when absent).
    const Symbol& coeff(const TMono& alpha) const;
    /// Adds s to the coefficient of t^alpha; ignored when val(alpha) > V.
    void add_term(const TMono& alpha, const Symbol& s, Complex factor = 1.0);

    TSeries& operator+=(const TSeries& b);
    TSeries& operator-=(const TSeries& b);
    TSeries& operator*=(Complex s);
    friend TSeries operator+(TSeries a, const TSeries& b) { return a += b; }
    friend TSeries operator-(TSeries a, const TSeries& b) { return a -= b; }
    friend TSeries operator*(TSeries a, Complex s) { return a *= s; }
    friend TSeries operator*(Complex s, TSeries a) { return a *= s; }
    TSeries operator-() const { return *this * Complex{-1.0}; }

    /// Keep only monomials with val(alpha) <= cap.
    TSeries restrict_val(int cap) const;
    /// Lowest valuation carrying a nonzero coefficient (INT_MAX for zero).
    int min_val() const;

    /// Growth condition order(X_alpha) <= max(val(alpha), base).
    bool growth_ok() const;
    /// Weaker bound order(X_alpha) <= val(alpha) + base, stable under products and ddt.
    bool additive_growth_ok() const;

private:
    void require_compatible(const TSeries& b, const char* op) const;

    TruncParams p_{};
    int base_ = 0;
    TermMap terms_;
    Symbol zero_;
};

/// Cauchy product with coefficients composed; valuations above V dropped.
TSeries tmul(const TSeries& x, const TSeries& y);
/// x^n by repeated tmul.
TSeries tpower(const TSeries& x, int n);
/// sum_k x^k/k!; x must have no valuation-0 term.
TSeries texp(const TSeries& x);
/// Inverse of a unit (valuation-0 coefficient invertible in the symbol algebra).
TSeries tinverse(const TSeries& x);
/// s x s^{-1}
TSeries conj_T(const TSeries& s, const TSeries& x);
/// Termwise d/dt_n.
TSeries ddt(const TSeries& x, int n);
/// Termwise commutator via tmul.
TSeries tcommutator(const TSeries& x, const TSeries& y);
TSeries project_D(const TSeries& x);
TSeries project_S(const TSeries& x);
/// sum_alpha t^alpha X_alpha at numeric times (t has K entries).
Symbol eval_t(const TSeries& x, std::span<const double> t);
/// t_n -> h^n t_n together with xi -> h xi.
TSeries scale_h(const TSeries& x, double h);

/// Max over monomials with val <= val_cap of the coefficient norm.
double norm(const TSeries& x, int val_cap = INT_MAX);
double distance(const TSeries& x, const TSeries& y, int val_cap = INT_MAX);

/// A path s in [0, 1] -> series with valuation >= 1.
using Path = std::function<TSeries(double)>;

/// Left-endpoint product integral
///   u_n(s) = (1 + (s - j/n) v(j/n)) prod_{i=1}^{j} (1 + v((j - i)/n)/n),  j = floor(n s),
/// factors with later times on the left.
TSeries product_integral(const Path& v, int steps, double s = 1.0);

}  // namespace nfkp
