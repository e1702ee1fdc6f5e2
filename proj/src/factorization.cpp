#include "nfkp/factorization.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <stdexcept>

namespace nfkp {

namespace {

Symbol rebind(const Symbol& s, const TruncParams& p) {
    Symbol out(p);
    if (s.empty()) return out;
    for (int n = s.lowest(); n <= s.highest(); ++n) {
        if (!s.coeff(n).is_zero()) out.set(n, s.coeff(n));
    }
    return out;
}

bool is_unit_coefficient(const LoopFn& f, double tol) {
    return distance(f, LoopFn::constant(f.dim(), f.cutoff(), 1.0)) <= tol;
}

TSeries exp_of_flows(const Symbol& L0, const TruncParams& params, double time_weight) {
    TSeries generator(params, 0);
    Symbol Ln = L0;
    double weight = time_weight;
    for (int n = 1; n <= params.K && n <= params.V; ++n) {
        if (n > 1) {
            Ln = compose(Ln, L0);
            weight *= time_weight;
        }
        generator.add_term(TMono::t(params.K, n), Ln, weight);
    }
    return texp(generator);
}

void require_dressing(const Symbol& S0) {
    if (S0.order() > 0) throw std::invalid_argument("kp_solve: S0 has positive order");
    if (!is_unit_coefficient(S0.coeff(0), 1e-14)) {
        throw std::invalid_argument("kp_solve: S0 - 1 must have order <= -1");
    }
}

KPJet solve_with(const Symbol& S0, const Symbol& derivative, const TruncParams& params, double time_weight) {
    KPJet jet;
    jet.params = params;
    jet.S0 = S0;
    jet.L0 = conj(S0, derivative);
    jet.U = exp_of_flows(jet.L0, params, time_weight);
    auto [S, Y] = mulase_factorize(jet.U);
    jet.S = std::move(S);
    jet.Y = std::move(Y);
    const TSeries L0_series = TSeries::constant(jet.L0, 1);
    jet.L = conj_T(jet.S, L0_series);
    jet.L_from_Y = conj_T(jet.Y, L0_series);
    return jet;
}

}  // namespace

TSeries build_U(const Symbol& L0, const TruncParams& params, double time_weight) {
    if (!L0.params().same_algebra(params)) throw std::invalid_argument("build_U: parameter mismatch");
    if (L0.order() != 1 || !is_unit_coefficient(L0.coeff(1), 1e-12)) {
        throw std::invalid_argument("build_U: L0 must have order 1 with unit leading coefficient");
    }
    return exp_of_flows(rebind(L0, params), params, time_weight);
}

std::pair<TSeries, TSeries> mulase_factorize(const TSeries& U) {
    const TruncParams& p = U.params();
    const TMono one(p.K);
    if (distance(U.coeff(one), Symbol::identity(p)) > 1e-12) {
        throw std::invalid_argument("mulase_factorize: valuation-0 term of U must be 1");
    }
    if (!U.growth_ok()) {
        throw std::domain_error("mulase_factorize: U violates the growth condition");
    }

    TSeries S = TSeries::one(p);
    TSeries Y = TSeries::one(p);
    for (const TMono& alpha : monomials_up_to(p.K, p.V)) {
        if (alpha.is_one()) continue;
        Symbol W = U.coeff(alpha);
        for (const auto& [beta, s_beta] : S.terms()) {
            if (beta.is_one()) continue;
            if (beta.val() >= alpha.val()) break;
            TMono gamma(p.K);
            bool divides = true;
            for (int n = 1; n <= p.K; ++n) {
                gamma.exp(n) = alpha.exp(n) - beta.exp(n);
                if (gamma.exp(n) < 0) divides = false;
            }
            if (!divides) continue;
            const Symbol& u_gamma = U.coeff(gamma);
            if (u_gamma.is_zero()) continue;
            W += compose(s_beta, u_gamma);
        }
        Y.add_term(alpha, project_D(W));
        S.add_term(alpha, project_S(W), -1.0);
    }
    return {std::move(S), std::move(Y)};
}

KPJet kp_solve(const Symbol& S0, const TruncParams& params) {
    params.validate();
    const Symbol dressing = rebind(S0, params);
    require_dressing(dressing);
    return solve_with(dressing, Symbol::xi(params), params, 1.0);
}

KPJet kp_solve_scaled(const Symbol& S0, const TruncParams& params, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("kp_solve_scaled: h must be positive");
    params.validate();
    TruncParams scaled = params;
    scaled.hbar = params.hbar / h;
    const Symbol dressing = scale_xi(rebind(S0, scaled), h);
    require_dressing(dressing);
    return solve_with(dressing, Symbol::xi(scaled) * Complex{h}, scaled, h);
}

double KPResidual::max() const { return std::max({d_form, s_form, forms_agree}); }

KPResidual kp_residual(const KPJet& jet, int n) {
    const TruncParams& p = jet.params;
    if (n < 1 || n > p.K) throw std::invalid_argument("kp_residual: flow index out of range");
    const int cap = p.V - n;
    const TSeries Ln = tpower(jet.L, n);
    const TSeries lhs = ddt(jet.L, n);
    const TSeries d_rhs = tcommutator(project_D(Ln), jet.L);
    const TSeries s_rhs = -tcommutator(project_S(Ln), jet.L);
    KPResidual r;
    r.d_form = distance(lhs, d_rhs, cap);
    r.s_form = distance(lhs, s_rhs, cap);
    r.forms_agree = distance(d_rhs, s_rhs, cap);
    return r;
}

double conj_consistency(const KPJet& jet) { return distance(jet.L, jet.L_from_Y, jet.params.V); }

bool dressing_is_S_type(const TSeries& S) {
    const TMono one(S.params().K);
    for (const auto& [alpha, s] : S.terms()) {
        if (alpha.is_one()) {
            if (distance(project_D(s), Symbol::identity(S.params())) != 0.0) return false;
            if (!project_S(s).is_zero()) return false;
            continue;
        }
        if (s.order() >= 0) return false;
    }
    return true;
}

bool is_differential_series(const TSeries& Y) {
    for (const auto& [alpha, s] : Y.terms()) {
        if (s.is_zero()) continue;
        if (!s.empty() && s.lowest() < 0) {
            for (int n = s.lowest(); n < 0; ++n)
                if (!s.coeff(n).is_zero()) return false;
        }
        if (s.order() > alpha.val()) return false;
    }
    return true;
}

}  // namespace nfkp
