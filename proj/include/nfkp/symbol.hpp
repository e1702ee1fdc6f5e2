#pragma once

#include <climits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nfkp/loopfn.hpp"

namespace nfkp {

/// Truncation parameters shared by every symbol and series in one computation.
///
/// Orders are reported on [F, N]; the guard band carries `guard` additional
/// low orders so that products with positive-order factors stay exact on the
/// reported range. `hbar` deforms the composition law (hbar = 1 is the
/// ordinary calculus of d/dx).
struct TruncParams {
    int d = 1;        ///< matrix dimension
    int M = 32;       ///< Fourier mode cutoff
    int F = -10;      ///< lowest reported order
    int N = 16;       ///< highest order kept; compositions drop anything above
    int V = 6;        ///< T-valuation cap
    int K = 3;        ///< number of active times t_1..t_K
    int guard = 8;    ///< extra low orders carried internally
    double hbar = 1.0;

    int working_floor() const { return F - guard; }
    void validate() const;

    /// Same algebra: everything except the series caps V and K must agree.
    bool same_algebra(const TruncParams& o) const {
        return d == o.d && M == o.M && F == o.F && N == o.N && guard == o.guard && hbar == o.hbar;
    }
    bool operator==(const TruncParams&) const = default;
};

/// Truncated odd-class symbol sum_n a_n(x) xi^n, xi the symbol of d/dx.
///
/// One coefficient function per integer order; the representation is odd
/// class by construction. Orders below the working floor are never stored.
class Symbol {
public:
    Symbol() = default;
    explicit Symbol(const TruncParams& p);

    static Symbol identity(const TruncParams& p);
    /// xi^n with unit (identity-matrix) coefficient.
    static Symbol xi(const TruncParams& p, int n = 1);
    static Symbol monomial(const TruncParams& p, int n, LoopFn f);

    const TruncParams& params() const { return p_; }

    bool empty() const { return c_.empty(); }
    /// Stored order range; meaningless when empty().
    int lowest() const { return lo_; }
    int highest() const { return lo_ + static_cast<int>(c_.size()) - 1; }
    /// Highest order with a nonzero coefficient, INT_MIN for the zero symbol.
    int order() const;
    bool is_zero() const { return order() == INT_MIN; }

    /// Coefficient of xi^n (zero function when absent).
    const LoopFn& coeff(int n) const;
    /// Mutable coefficient, extending the stored range; n must lie in [working floor, N].
    LoopFn& coeff_mut(int n);
    void set(int n, LoopFn f) { coeff_mut(n) = std::move(f); }

    Symbol& operator+=(const Symbol& b);
    Symbol& operator-=(const Symbol& b);
    Symbol& operator*=(Complex s);
    Symbol& axpy(Complex s, const Symbol& b);
    friend Symbol operator+(Symbol a, const Symbol& b) { return a += b; }
    friend Symbol operator-(Symbol a, const Symbol& b) { return a -= b; }
    friend Symbol operator*(Symbol a, Complex s) { return a *= s; }
    friend Symbol operator*(Complex s, Symbol a) { return a *= s; }
    Symbol operator-() const { return *this * Complex{-1.0}; }

    /// Drop stored zero coefficients at both ends.
    void trim();

private:
    void require_compatible(const Symbol& b, const char* op) const;

    TruncParams p_{};
    int lo_ = 0;
    std::vector<LoopFn> c_;
    LoopFn zero_;
};

/// (A o B)(x, xi) = sum_k hbar^k/k! d_xi^k A . d_x^k B, truncated at the working floor.
Symbol compose(const Symbol& a, const Symbol& b);
/// Only the orders >= min_order of the product.
Symbol compose(const Symbol& a, const Symbol& b, int min_order);
Symbol commutator(const Symbol& a, const Symbol& b);

/// Differential part (orders >= 0).
Symbol project_D(const Symbol& a);
/// Negative-order part (orders <= -1).
Symbol project_S(const Symbol& a);
std::pair<Symbol, Symbol> split_DS(const Symbol& a);

Symbol power(const Symbol& a, int n);

/// Inverse of an order-0 symbol whose leading coefficient is pointwise
/// invertible: the leading coefficient is inverted at collocation points and
/// the negative-order remainder by a Neumann series, which terminates at the
/// working floor.
Symbol invert(const Symbol& a);

/// s o a o s^{-1}
Symbol conj(const Symbol& s, const Symbol& a);

/// Matrix of the operator on Fourier modes m in [-Mr, Mr] \ {0} (blocks of
/// size d), xi acting on e^{imx} as i*hbar*m. Only orders >= F enter.
Eigen::MatrixXcd realize_matrix(const Symbol& a, int Mr);

/// Hilbert-Schmidt pairing trace(R(A) R(B)^*) of the realizations.
Complex hs_inner(const Symbol& a, const Symbol& b, int Mr);

/// l2 norm over the reported orders n >= F.
double norm(const Symbol& a);
double distance(const Symbol& a, const Symbol& b);

/// Order-n coefficient multiplied by factor^n (the substitution xi -> factor * xi).
Symbol scale_xi(const Symbol& a, double factor);

/// Top coefficient of a, i.e. the principal symbol coefficient of the given order.
const LoopFn& sigma(const Symbol& a, int n);

}  // namespace nfkp
