#include "nfkp/kp2.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace nfkp {

FnJet FnJet::coefficient(const TSeries& X, int order) {
    FnJet out(X.params());
    for (const auto& [alpha, s] : X.terms()) out.add_term(alpha, s.coeff(order));
    return out;
}

LoopFn FnJet::coeff(const TMono& alpha) const {
    auto it = terms_.find(alpha);
    return it == terms_.end() ? LoopFn(p_.d, p_.M) : it->second;
}

void FnJet::add_term(const TMono& alpha, const LoopFn& f, Complex factor) {
    if (alpha.num_times() != p_.K) throw std::invalid_argument("FnJet: monomial has wrong number of times");
    if (alpha.val() > p_.V || f.is_zero()) return;
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        terms_.emplace(alpha, f * factor);
    } else {
        it->second.axpy(factor, f);
    }
}

FnJet& FnJet::operator+=(const FnJet& o) {
    for (const auto& [alpha, f] : o.terms_) add_term(alpha, f);
    return *this;
}

FnJet& FnJet::operator-=(const FnJet& o) {
    for (const auto& [alpha, f] : o.terms_) add_term(alpha, f, -1.0);
    return *this;
}

FnJet& FnJet::operator*=(Complex s) {
    for (auto& [alpha, f] : terms_) f *= s;
    return *this;
}

FnJet operator*(const FnJet& a, const FnJet& b) {
    FnJet out(a.p_);
    for (const auto& [x, f] : a.terms_)
        for (const auto& [y, g] : b.terms_) {
            if (x.val() + y.val() > a.p_.V) continue;
            out.add_term(x * y, f * g);
        }
    return out;
}

FnJet FnJet::ddt(int n) const {
    if (n < 1 || n > p_.K) throw std::invalid_argument("FnJet::ddt: time index out of range");
    FnJet out(p_);
    for (const auto& [alpha, f] : terms_) {
        const int e = alpha.exp(n);
        if (e == 0) continue;
        TMono lowered = alpha;
        lowered.exp(n) = e - 1;
        out.add_term(lowered, f, static_cast<Real>(e));
    }
    return out;
}

FnJet FnJet::dx(int k) const {
    FnJet out(p_);
    for (const auto& [alpha, f] : terms_) out.add_term(alpha, f.dx(k));
    return out;
}

LoopFn FnJet::eval(std::span<const double> t) const {
    LoopFn out(p_.d, p_.M);
    for (const auto& [alpha, f] : terms_) out.axpy(alpha.evaluate(t), f);
    return out;
}

double FnJet::norm(int val_cap) const {
    double m = 0.0;
    for (const auto& [alpha, f] : terms_)
        if (alpha.val() <= val_cap) m = std::max(m, f.norm());
    return m;
}

namespace {

void require_lax_form(const Symbol& L, double tol) {
    if (L.order() != 1 || distance(L.coeff(1), LoopFn::constant(L.params().d, L.params().M, 1.0)) > tol) {
        throw std::invalid_argument("extract_u: expected order 1 with unit leading coefficient");
    }
    if (L.coeff(0).norm() > tol) {
        std::clog << "nfkp: extract_u: sigma_0 is nonzero (" << L.coeff(0).norm() << ")\n";
    }
}

// 3 du2/dt2 - 2 du1/dt3 + 6 u1' u1 + 2 u1''' + 3 u2''
FnJet reduced_second(const UJet& u) {
    FnJet r = u.u2.ddt(2) * Complex{3} - u.u1.ddt(3) * Complex{2};
    r += (u.u1.dx() * u.u1) * Complex{6};
    r += u.u1.dx(3) * Complex{2};
    r += u.u2.dx(2) * Complex{3};
    return r;
}

FnJet first_t23(const UJet& u) {
    return u.u1.ddt(2) - u.u1.dx(2) - u.u2.dx() * Complex{2};
}

}  // namespace

UPair extract_u(const Symbol& L, double tol) {
    require_lax_form(L, tol);
    return {L.coeff(-1), L.coeff(-2)};
}

UJet extract_u(const TSeries& L, double tol) {
    const TruncParams& p = L.params();
    require_lax_form(L.coeff(TMono(p.K)), tol);
    for (const auto& [alpha, s] : L.terms()) {
        if (alpha.is_one()) continue;
        if (s.order() >= 1 && s.coeff(1).norm() > tol) {
            throw std::invalid_argument("extract_u: leading coefficient depends on the times");
        }
    }
    return {FnJet::coefficient(L, -1), FnJet::coefficient(L, -2)};
}

Symbol embed_u(const UPair& u, const TruncParams& p) {
    Symbol L = Symbol::xi(p);
    L.set(-1, u.u1);
    L.set(-2, u.u2);
    L.trim();
    return L;
}

double check_t12(const UJet& u) {
    const TruncParams& p = u.u1.params();
    if (p.K < 2) throw std::invalid_argument("check_t12: need K >= 2");
    return (u.u1.ddt(1) - u.u1.dx()).norm(p.V - 1);
}

double check_t12(const KPJet& jet) { return check_t12(extract_u(jet.L)); }

PairResidual check_t13(const UJet& u) {
    const TruncParams& p = u.u1.params();
    if (p.K < 3) throw std::invalid_argument("check_t13: need K >= 3");
    return {(u.u1.ddt(1) - u.u1.dx()).norm(p.V - 1), (u.u2.ddt(1) - u.u2.dx()).norm(p.V - 1)};
}

PairResidual check_t13(const KPJet& jet) { return check_t13(extract_u(jet.L)); }

PairResidual check_t23(const UJet& u) {
    const TruncParams& p = u.u1.params();
    if (p.K < 3) throw std::invalid_argument("check_t23: need K >= 3");
    return {first_t23(u).norm(p.V - 3), reduced_second(u).norm(p.V - 3)};
}

PairResidual check_t23(const KPJet& jet) { return check_t23(extract_u(jet.L)); }

Equivalence equiv_t23(const UJet& u, double tol) {
    const TruncParams& p = u.u1.params();
    if (p.K < 3) throw std::invalid_argument("equiv_t23: need K >= 3");
    const int cap = p.V - 3;
    // 3 du2/dt2 + 3 d/dx du1/dt2 - 2 du1/dt3 + 6 u1' u1 - u1''' - 3 u2''
    FnJet unreduced = u.u2.ddt(2) * Complex{3} + u.u1.ddt(2).dx() * Complex{3} - u.u1.ddt(3) * Complex{2};
    unreduced += (u.u1.dx() * u.u1) * Complex{6};
    unreduced -= u.u1.dx(3);
    unreduced -= u.u2.dx(2) * Complex{3};
    Equivalence e;
    e.discrepancy = (unreduced - reduced_second(u)).norm(cap);
    e.eq1_residual = first_t23(u).norm(cap);
    e.eq1_holds = e.eq1_residual <= tol;
    return e;
}

Symbol differential_power(const Symbol& L, int n) {
    if (n <= 0) throw std::invalid_argument("differential_power: exponent must be positive");
    // (L^j)_D only needs L^(j-1) down to order -1 when L has order 1; -n is a safe margin
    Symbol out = L;
    for (int j = 1; j < n; ++j) out = compose(out, L, -n);
    return project_D(out);
}

Symbol flow_rhs(const Symbol& L, int n, FlowForm form) {
    switch (form) {
        case FlowForm::S: return -commutator(project_S(power(L, n)), L);
        case FlowForm::SFromD: return project_S(commutator(differential_power(L, n), L));
        case FlowForm::D: return commutator(differential_power(L, n), L);
        case FlowForm::DSignFlipped: return -commutator(differential_power(L, n), L);
    }
    throw std::invalid_argument("flow_rhs: unknown form");
}

FlowState flow_delinearized(const Symbol& L0, int n, double t_end, double dt, const FlowOptions& opts) {
    const TruncParams& p = L0.params();
    if (n < 1) throw std::invalid_argument("flow_delinearized: direction must be >= 1");
    if (!(dt > 0.0)) throw std::invalid_argument("flow_delinearized: dt must be positive");
    if (!(t_end >= 0.0)) throw std::invalid_argument("flow_delinearized: t_end must be >= 0");
    require_lax_form(L0, 1e-10);

    FlowState st{L0, 0.0, n, dt, 0, 0.0, 0.0};
    const LoopFn one = LoopFn::constant(p.d, p.M, 1.0);
    auto check = [&](const Symbol& L) {
        if (L.empty()) return;
        for (int k = std::max(L.lowest(), p.F); k <= L.highest(); ++k) {
            const double s = L.coeff(k).sup_bound();
            if (!(s <= opts.blowup)) {
                throw std::runtime_error("flow_delinearized: coefficient of order " + std::to_string(k) +
                                         " exceeds the blow-up bound at t = " + std::to_string(st.t));
            }
        }
        st.lead_drift = std::max(st.lead_drift, distance(L.coeff(1), one));
        st.order0_max = std::max(st.order0_max, L.coeff(0).norm());
    };

    const int steps = std::max(1, static_cast<int>(std::ceil(t_end / dt - 1e-9)));
    for (int i = 0; i < steps; ++i) {
        const double h = std::min(dt, t_end - i * dt);
        if (h <= 0.0) break;
        const Complex hc{static_cast<Real>(h)};
        const Symbol k1 = flow_rhs(st.L, n, opts.form);
        const Symbol k2 = flow_rhs(st.L + k1 * (hc / Real{2}), n, opts.form);
        const Symbol k3 = flow_rhs(st.L + k2 * (hc / Real{2}), n, opts.form);
        const Symbol k4 = flow_rhs(st.L + k3 * hc, n, opts.form);
        Symbol incr = k1 + k4;
        incr.axpy(2.0, k2);
        incr.axpy(2.0, k3);
        st.L.axpy(hc / Real{6}, incr);
        st.L.trim();
        st.t = i * dt + h;
        ++st.steps;
        check(st.L);
    }
    return st;
}

double flows_commute(const Symbol& L0, int n, int m, double t, int steps, bool weighted, FlowForm control,
                     double blowup) {
    if (steps < 1) throw std::invalid_argument("flows_commute: need at least one step");
    const double tn = weighted ? std::pow(t, n) : t;
    const double tm = weighted ? std::pow(t, m) : t;
    FlowOptions good{};
    good.blowup = blowup;
    FlowOptions first_n = good;
    first_n.form = control;
    const Symbol nm = flow_delinearized(flow_delinearized(L0, n, tn, tn / steps, first_n).L, m, tm, tm / steps, good).L;
    const Symbol mn = flow_delinearized(flow_delinearized(L0, m, tm, tm / steps, good).L, n, tn, tn / steps, good).L;
    return distance(nm, mn);
}

FlowJetComparison compare_flow_jet(const KPJet& jet, int n, double t, bool weighted, int steps, double blowup) {
    const int K = jet.params.K;
    if (n < 1 || n > K) throw std::invalid_argument("compare_flow_jet: direction out of range");
    if (steps < 1) throw std::invalid_argument("compare_flow_jet: need at least one step");
    FlowJetComparison c;
    c.tau = weighted ? std::pow(t, n) : t;
    FlowOptions opts;
    opts.blowup = blowup;
    const FlowState st = flow_delinearized(jet.L0, n, c.tau, c.tau / steps, opts);
    std::vector<double> times(static_cast<std::size_t>(K), 0.0);
    times[static_cast<std::size_t>(n - 1)] = c.tau;
    c.error = distance(st.L, eval_t(jet.L, times));
    c.lead_drift = st.lead_drift;
    c.order0_max = st.order0_max;
    return c;
}

}  // namespace nfkp
