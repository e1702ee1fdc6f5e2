#pragma once

#include <map>

#include "nfkp/factorization.hpp"

namespace nfkp {

/// Truncated series in the times with function coefficients: a jet of a
/// time-dependent function on the circle.
class FnJet {
public:
    FnJet() = default;
    explicit FnJet(const TruncParams& p) : p_(p) {}

    /// sigma_order of every coefficient of X.
    static FnJet coefficient(const TSeries& X, int order);

    const TruncParams& params() const { return p_; }
    const std::map<TMono, LoopFn>& terms() const { return terms_; }
    /// Zero function when absent.
    LoopFn coeff(const TMono& alpha) const;
    void add_term(const TMono& alpha, const LoopFn& f, Complex factor = 1.0);

    FnJet& operator+=(const FnJet& o);
    FnJet& operator-=(const FnJet& o);
    FnJet& operator*=(Complex s);
    friend FnJet operator+(FnJet a, const FnJet& b) { return a += b; }
    friend FnJet operator-(FnJet a, const FnJet& b) { return a -= b; }
    friend FnJet operator*(FnJet a, Complex s) { return a *= s; }
    friend FnJet operator*(Complex s, FnJet a) { return a *= s; }
    /// Cauchy product with pointwise products of coefficients.
    friend FnJet operator*(const FnJet& a, const FnJet& b);

    FnJet ddt(int n) const;
    FnJet dx(int k = 1) const;
    /// Numeric value at concrete times.
    LoopFn eval(std::span<const double> t) const;

    /// Max over monomials with val <= cap of the coefficient l2 norms.
    double norm(int val_cap) const;

private:
    TruncParams p_{};
    std::map<TMono, LoopFn> terms_;
};

/// The two leading lower coefficients of L = xi + u1 xi^-1 + u2 xi^-2 + ...
struct UPair {
    LoopFn u1;
    LoopFn u2;
};

struct UJet {
    FnJet u1;
    FnJet u2;
};

/// Throws std::invalid_argument unless L has order 1 with unit leading
/// coefficient; warns on std::clog if sigma_0(L) exceeds tol.
UPair extract_u(const Symbol& L, double tol = 1e-10);
UJet extract_u(const TSeries& L, double tol = 1e-10);
/// xi + u1 xi^-1 + u2 xi^-2.
Symbol embed_u(const UPair& u, const TruncParams& p);

struct PairResidual {
    double first = 0.0;
    double second = 0.0;
    double max() const { return first > second ? first : second; }
};

/// du1/dt1 = u1' over val <= V - 1.
double check_t12(const UJet& u);
double check_t12(const KPJet& jet);
/// du1/dt1 = u1' and du2/dt1 = u2' over val <= V - 1.
PairResidual check_t13(const UJet& u);
PairResidual check_t13(const KPJet& jet);
/// du1/dt2 = u1'' + 2 u2' and
/// 3 du2/dt2 - 2 du1/dt3 = -6 u1' u1 - 2 u1''' - 3 u2'' over val <= V - 3.
PairResidual check_t23(const UJet& u);
PairResidual check_t23(const KPJet& jet);

struct Equivalence {
    double discrepancy = 0.0;   ///< |unreduced second equation - reduced second equation|
    double eq1_residual = 0.0;  ///< |du1/dt2 - u1'' - 2 u2'|
    bool eq1_holds = true;
};

/// Compares the second equation before and after eliminating the mixed
/// derivative d^2 u1/(dt2 dx) with the first equation. The two agree exactly
/// when the first equation holds; otherwise the discrepancy is 3 d/dx of the
/// first-equation residual.
Equivalence equiv_t23(const UJet& u, double tol = 1e-10);

enum class FlowForm {
    S,              ///< dL/dt = -[(L^n)_S, L]
    SFromD,         ///< the same right-hand side evaluated as ([(L^n)_D, L])_S
    D,              ///< dL/dt = [(L^n)_D, L]
    DSignFlipped,   ///< dL/dt = -[(L^n)_D, L], negative control
};

struct FlowOptions {
    FlowForm form = FlowForm::SFromD;
    double blowup = 1e6;  ///< bound on coefficient sup norms, orders >= F
};

struct FlowState {
    Symbol L;
    double t = 0.0;
    int n = 1;
    double dt = 0.0;
    int steps = 0;
    double lead_drift = 0.0;  ///< max over steps of |sigma_1(L) - 1|
    double order0_max = 0.0;  ///< max over steps of |sigma_0(L)|
};

/// (L^n)_D, computing only the orders of L^n that reach it.
Symbol differential_power(const Symbol& L, int n);

/// Right-hand side of the n-th flow at L.
Symbol flow_rhs(const Symbol& L, int n, FlowForm form = FlowForm::S);

/// Classical RK4 in t_n from 0 to t_end with step dt (last step shortened).
/// Throws std::runtime_error when a coefficient exceeds the blow-up bound.
FlowState flow_delinearized(const Symbol& L0, int n, double t_end, double dt, const FlowOptions& opts = {});

/// |flow_m flow_n L0 - flow_n flow_m L0| where direction k runs for time t^k
/// (weighted) or t, with steps of size time/steps. `control` replaces the
/// right-hand side of the n-flow in the first ordering only; a globally
/// flipped sign is time reversal and would leave the flows commuting.
double flows_commute(const Symbol& L0, int n, int m, double t, int steps = 256, bool weighted = true,
                     FlowForm control = FlowForm::SFromD, double blowup = 1e6);

struct FlowJetComparison {
    double tau = 0.0;    ///< flow time in direction n
    double error = 0.0;  ///< |flow(tau) - jet L at t_n = tau|
    double lead_drift = 0.0;
    double order0_max = 0.0;
};

/// Flows L0 in direction n for time tau = t^n (weighted) or tau = t, with
/// dt = tau / steps, and compares with the jet evaluated at t_n = tau.
FlowJetComparison compare_flow_jet(const KPJet& jet, int n, double t, bool weighted = true, int steps = 256,
                                   double blowup = 1e6);

}  // namespace nfkp
