#pragma once

#include <utility>

#include "nfkp/tseries.hpp"

namespace nfkp {

/// A solved KP jet: dressing datum, initial Lax operator, the Birkhoff-Mulase
/// factors of U = exp(sum t_n L0^n) = S^{-1} Y, and the Lax operator computed
/// from either factor.
struct KPJet {
    TruncParams params;
    Symbol S0;
    Symbol L0;
    TSeries U;
    TSeries S;
    TSeries Y;
    TSeries L;         ///< S L0 S^{-1}
    TSeries L_from_Y;  ///< Y L0 Y^{-1}
};

/// U = exp(sum_{n <= K} t_n L0^n). L0 must have order 1 with unit leading coefficient.
/// `time_weight` multiplies t_n by time_weight^n (used by the h-scaled problem).
TSeries build_U(const Symbol& L0, const TruncParams& params, double time_weight = 1.0);

/// Birkhoff-Mulase splitting U = S^{-1} Y, solved level by level in the
/// valuation: W_a = U_a + sum_{b+c=a, b,c != 1} S_b U_c, Y_a = pi_D W_a, S_a = -pi_S W_a.
/// Returns (S, Y).
std::pair<TSeries, TSeries> mulase_factorize(const TSeries& U);

/// Full jet for the dressing S0 (S0 - 1 of order <= -1).
KPJet kp_solve(const Symbol& S0, const TruncParams& params);

/// The h-scaled problem: the deformed calculus with hbar = 1/h, dressing
/// xi -> h xi applied to S0, derivative h xi and times weighted by h^n. Its
/// jet equals scale_h applied to the jet of kp_solve(S0, params).
KPJet kp_solve_scaled(const Symbol& S0, const TruncParams& params, double h);

struct KPResidual {
    double d_form = 0.0;      ///< |d L/dt_n - [(L^n)_D, L]|
    double s_form = 0.0;      ///< |d L/dt_n + [(L^n)_S, L]|
    double forms_agree = 0.0; ///< |[(L^n)_D, L] + [(L^n)_S, L]|
    double max() const;
};

/// Residuals of d L/dt_n = [(L^n)_D, L] = -[(L^n)_S, L] over valuations <= V - n,
/// aggregated as the max over monomials of coefficient norms.
KPResidual kp_residual(const KPJet& jet, int n);

/// |S L0 S^{-1} - Y L0 Y^{-1}| over valuations <= V.
double conj_consistency(const KPJet& jet);

/// Structural checks: S - 1 has only negative orders, Y is differential with
/// order <= valuation, growth condition for U, S, Y, L.
bool dressing_is_S_type(const TSeries& S);
bool is_differential_series(const TSeries& Y);

}  // namespace nfkp
