#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <sstream>

#include "nfkp/kp2.hpp"
#include "oracles.hpp"

using namespace nfkp;

namespace {

TruncParams small() {
    TruncParams p;
    p.M = 16;
    p.F = -6;
    p.N = 12;
    p.V = 5;
    p.K = 3;
    p.guard = 6;
    return p;
}

Symbol cos_dressing(const TruncParams& p) {
    Symbol s = Symbol::identity(p);
    s.set(-1, LoopFn::cos_mode(p.M, 1));
    return s;
}

const KPJet& cos_jet() {
    static const KPJet jet = kp_solve(cos_dressing(small()), small());
    return jet;
}

// Random (u1, u2) jets; with `consistent` the t2-coefficients of u1 are
// generated from du1/dt2 = u1'' + 2 u2' level by level.
UJet random_ujet(std::mt19937_64& rng, const TruncParams& p, bool consistent) {
    UJet u{FnJet(p), FnJet(p)};
    const auto monos = monomials_up_to(p.K, p.V);
    for (const auto& a : monos) u.u2.add_term(a, oracle::random_trig(rng, p.M, 3, 0.5));
    for (const auto& a : monos) {
        if (!consistent || a.exp(2) == 0) {
            u.u1.add_term(a, oracle::random_trig(rng, p.M, 3, 0.5));
            continue;
        }
        TMono prev = a;
        prev.exp(2) -= 1;
        const LoopFn f = u.u1.coeff(prev).dx(2) + u.u2.coeff(prev).dx() * Complex{2};
        u.u1.add_term(a, f, Complex{1.0 / a.exp(2)});
    }
    return u;
}

}  // namespace

TEST_CASE("extract and embed are inverse") {
    const TruncParams p = small();
    const UPair u{LoopFn::cos_mode(p.M, 1), LoopFn::sin_mode(p.M, 2, 0.5)};
    const Symbol L = embed_u(u, p);
    CHECK(L.order() == 1);
    const UPair back = extract_u(L);
    CHECK(distance(back.u1, u.u1) == 0.0);
    CHECK(distance(back.u2, u.u2) == 0.0);

    CHECK_THROWS_AS(extract_u(Symbol::xi(p, 2)), std::invalid_argument);
    CHECK_THROWS_AS(extract_u(Symbol::xi(p) * Complex{2.0}), std::invalid_argument);

    Symbol with0 = L;
    with0.set(0, LoopFn::cos_mode(p.M, 1));
    std::ostringstream captured;
    auto* old = std::clog.rdbuf(captured.rdbuf());
    extract_u(with0);
    std::clog.rdbuf(old);
    CHECK(captured.str().find("sigma_0") != std::string::npos);
}

TEST_CASE("derived jet: u1 at t = 0 and its t1 coefficient") {
    const UJet u = extract_u(cos_jet().L);
    const TMono one(3);
    CHECK(distance(u.u1.coeff(one), LoopFn::sin_mode(16, 1)) < 1e-14);
    CHECK(distance(u.u1.coeff(TMono::t(3, 1)), LoopFn::cos_mode(16, 1)) < 1e-12);
}

TEST_CASE("KP-II residuals vanish on solved jets") {
    std::mt19937_64 rng(31);
    const TruncParams p = small();
    for (int trial = 0; trial < 3; ++trial) {
        const Symbol S0 = trial == 0 ? cos_dressing(p) : oracle::random_dressing(rng, p, 3, 0.5);
        const KPJet jet = kp_solve(S0, p);
        CHECK(check_t12(jet) < 1e-9);
        CHECK(check_t13(jet).max() < 1e-9);
        const PairResidual r = check_t23(jet);
        CHECK(r.first < 1e-9);
        CHECK(r.second < 1e-9);
    }
}

TEST_CASE("a corrupted coefficient is detected at its own size") {
    UJet u = extract_u(cos_jet().L);
    const double eps = 1e-3;
    u.u1.add_term(TMono::t(3, 1), LoopFn::cos_mode(16, 3), Complex{eps});
    const double r = check_t12(u);
    CHECK(r > 0.5 * eps);
    CHECK(r < 10 * eps);
    CHECK(check_t13(u).first == doctest::Approx(r));

    UJet v = extract_u(cos_jet().L);
    v.u2.add_term(TMono::t(3, 2), LoopFn::cos_mode(16, 1), Complex{eps});
    CHECK(check_t23(v).second > eps);
}

TEST_CASE("unreduced and reduced second equations agree exactly when the first holds") {
    std::mt19937_64 rng(32);
    const TruncParams p = small();
    for (int trial = 0; trial < 5; ++trial) {
        const UJet good = random_ujet(rng, p, true);
        const Equivalence e = equiv_t23(good);
        CHECK(e.eq1_holds);
        CHECK(e.eq1_residual < 1e-12);
        CHECK(e.discrepancy < 1e-11);

        const UJet bad = random_ujet(rng, p, false);
        const Equivalence f = equiv_t23(bad);
        CHECK_FALSE(f.eq1_holds);
        // discrepancy = 3 d/dx of the first-equation residual
        const FnJet r1 = bad.u1.ddt(2) - bad.u1.dx(2) - bad.u2.dx() * Complex{2};
        CHECK(f.discrepancy == doctest::Approx((r1.dx() * Complex{3}).norm(p.V - 3)).epsilon(1e-10));
        CHECK(f.discrepancy > 1e-3);
    }
}

TEST_CASE("differential power and right-hand-side forms") {
    const Symbol& L = cos_jet().L0;
    for (int n = 1; n <= 3; ++n) {
        CAPTURE(n);
        CHECK(distance(differential_power(L, n), project_D(power(L, n))) < 1e-12);
        const Symbol s = flow_rhs(L, n, FlowForm::S);
        CHECK(distance(flow_rhs(L, n, FlowForm::SFromD), s) < 1e-9);
        CHECK(distance(flow_rhs(L, n, FlowForm::D), s) < 1e-9);
        CHECK(distance(flow_rhs(L, n, FlowForm::DSignFlipped), -s) < 1e-9);
        CHECK(flow_rhs(L, n, FlowForm::S).order() <= -1);
    }
    CHECK_THROWS_AS(differential_power(L, 0), std::invalid_argument);
}

TEST_CASE("the vacuum L = xi is stationary") {
    const TruncParams p = small();
    for (int n = 1; n <= 3; ++n) {
        const FlowState st = flow_delinearized(Symbol::xi(p), n, 0.1, 0.01);
        CHECK(distance(st.L, Symbol::xi(p)) == 0.0);
        CHECK(st.steps == 10);
        CHECK(st.t == doctest::Approx(0.1));
    }
}

TEST_CASE("the first flow translates every coefficient") {
    const Symbol& L0 = cos_jet().L0;
    const double t = 0.3;
    const FlowState st = flow_delinearized(L0, 1, t, t / 64);
    CHECK(st.lead_drift < 1e-14);
    CHECK(st.order0_max < 1e-14);
    double err = 0.0;
    for (int k = L0.params().F; k <= -1; ++k) err = std::max(err, distance(st.L.coeff(k), L0.coeff(k).translate(t)));
    CHECK(err < 1e-7);
}

TEST_CASE("the last step is shortened") {
    const FlowState st = flow_delinearized(Symbol::xi(small()), 2, 0.025, 0.01);
    CHECK(st.steps == 3);
    CHECK(st.t == doctest::Approx(0.025));
}

TEST_CASE("flow agrees with the jet at small weighted time") {
    const KPJet& jet = cos_jet();
    for (int n = 2; n <= 3; ++n) {
        CAPTURE(n);
        const FlowJetComparison a = compare_flow_jet(jet, n, 0.05, true, 64);
        const FlowJetComparison b = compare_flow_jet(jet, n, 0.025, true, 64);
        CHECK(a.tau == doctest::Approx(std::pow(0.05, n)));
        CHECK(b.error < 1e-6);
        // truncation error of the jet is O(t^(V+1)) in the weighted time
        CHECK(a.error / b.error > 16.0);
    }
    CHECK_THROWS_AS(compare_flow_jet(jet, 4, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(compare_flow_jet(jet, 2, 0.1, true, 0), std::invalid_argument);
}

TEST_CASE("flows commute; a mis-signed flow does not") {
    const Symbol& L0 = cos_jet().L0;
    const double good = flows_commute(L0, 2, 3, 0.05, 32);
    const double bad = flows_commute(L0, 2, 3, 0.05, 32, true, FlowForm::DSignFlipped);
    CHECK(good < 1e-6);
    CHECK(bad > 1e-2);
    CHECK(bad > 1e4 * good);
    CHECK_THROWS_AS(flows_commute(L0, 2, 3, 0.2, 0), std::invalid_argument);
}

TEST_CASE("blow-up is reported") {
    FlowOptions tight;
    tight.blowup = 1e-3;
    CHECK_THROWS_AS(flow_delinearized(cos_jet().L0, 2, 0.01, 0.005, tight), std::runtime_error);
}

TEST_CASE("argument validation") {
    const Symbol& L0 = cos_jet().L0;
    CHECK_THROWS_AS(flow_delinearized(L0, 0, 0.1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(flow_delinearized(L0, 2, 0.1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(flow_delinearized(L0, 2, -0.1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(flow_delinearized(Symbol::xi(small(), 2), 2, 0.1, 0.01), std::invalid_argument);
    TruncParams q = small();
    q.K = 2;
    const KPJet jet2 = kp_solve(cos_dressing(q), q);
    CHECK_THROWS_AS(check_t13(jet2), std::invalid_argument);
    CHECK_THROWS_AS(check_t23(jet2), std::invalid_argument);
    CHECK_NOTHROW(check_t12(jet2));
}
