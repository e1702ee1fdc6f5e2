#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "common.hpp"
#include "nfkp/cli.hpp"

namespace nfkp::cli {

namespace {

using detail::num;

constexpr double kIdentity = 1e-10;   // exact algebraic identities
constexpr double kResidual = 1e-9;    // residuals of equations on the jet
constexpr double kControl = 1e-2;     // lower bound for deliberately broken variants
constexpr double kYMRatio = 1e-4;
constexpr double kDrift = 1e-10;
constexpr double kCommute = 1e-6;

std::string pair_name(int m, int n) { return std::to_string(m) + std::to_string(n); }

Json symbol_to_json(const Symbol& s) {
    Json orders = Json::array();
    if (s.empty()) return orders;
    for (int n = s.lowest(); n <= s.highest(); ++n) {
        const LoopFn& f = s.coeff(n);
        if (f.is_zero()) continue;
        Json entries = Json::array();
        for (int m = -f.cutoff(); m <= f.cutoff(); ++m)
            for (int r = 0; r < f.dim(); ++r)
                for (int c = 0; c < f.dim(); ++c) {
                    const Complex z = f.at(m, r, c);
                    if (z == Complex{}) continue;
                    entries.push_back(Json::array({m, r, c, static_cast<double>(z.real()), static_cast<double>(z.imag())}));
                }
        orders.push_back({{"order", n}, {"coeffs", entries}});
    }
    return orders;
}

Json series_to_json(const TSeries& x) {
    Json terms = Json::array();
    for (const auto& [alpha, s] : x.terms()) {
        std::vector<int> e;
        for (int k = 1; k <= alpha.num_times(); ++k) e.push_back(alpha.exp(k));
        terms.push_back({{"t", e}, {"symbol", symbol_to_json(s)}});
    }
    return terms;
}

}  // namespace

Report cmd_factorize(const RunConfig& c) {
    Report rep("factorize", c);
    const TruncParams& p = c.params;
    const KPJet jet = kp_solve(build_S0(c), p);

    rep.le("factor_residual", "factorization", distance(tmul(jet.S, jet.U), jet.Y, p.V), kIdentity);
    rep.holds("dressing_is_S_type", "factorization", dressing_is_S_type(jet.S));
    rep.holds("Y_is_differential", "factorization", is_differential_series(jet.Y));
    rep.holds("growth_U", "structure", jet.U.growth_ok());
    rep.holds("growth_S", "structure", jet.S.growth_ok());
    rep.holds("growth_Y", "structure", jet.Y.growth_ok());
    rep.holds("growth_L", "structure", jet.L.growth_ok());
    rep.le("conj_consistency", "hierarchy", conj_consistency(jet), kResidual);

    // Smooth dependence on the data: |L(S0 + eps A) - L(S0)| / eps for a unit A.
    std::mt19937_64 rng(c.seed);
    const double eps = 1e-6;
    const Symbol A = detail::random_negative_symbol(rng, p, std::max(-3, p.F), 4);
    const KPJet moved = kp_solve(build_S0(c) + A * Complex{eps}, p);
    rep.info("lipschitz_probe", "smoothness", distance(moved.L, jet.L, p.V) / eps);

    if (!c.out_dir.empty()) {
        Json f;
        f["config_hash"] = rep.hash();
        f["S"] = series_to_json(jet.S);
        f["Y"] = series_to_json(jet.Y);
        detail::write_file(c.out_dir, "factors.json", f.dump(1) + "\n");
    }
    return rep;
}

Report cmd_check(const RunConfig& c, const Selection& only) {
    Report rep("check", c);
    const TruncParams& p = c.params;
    const KPJet jet = kp_solve(build_S0(c), p);
    const int top = std::min(p.K, 3);

    if (only.wants("hierarchy")) {
        for (int n = 1; n <= top; ++n) {
            const KPResidual r = kp_residual(jet, n);
            const std::string s = std::to_string(n);
            rep.le("kp_residual_D_t" + s, "hierarchy", r.d_form, kResidual);
            rep.le("kp_residual_S_t" + s, "hierarchy", r.s_form, kResidual);
            rep.le("kp_forms_agree_t" + s, "hierarchy", r.forms_agree, kResidual);
        }
        rep.le("conj_consistency", "hierarchy", conj_consistency(jet), kResidual);
    }

    const bool need_Z = only.wants("zs") || only.wants("curvature") || only.wants("ym");
    if (need_Z) {
        const auto [ZD, ZS] = build_Z(jet);
        if (only.wants("zs")) {
            for (int m = 1; m <= top; ++m)
                for (int n = m + 1; n <= top; ++n) {
                    const std::string s = pair_name(m, n);
                    rep.le("zs_D_" + s, "zero-curvature", zs_residual(ZD, m, n, +1), kResidual);
                    rep.le("zs_S_" + s, "zero-curvature", zs_residual(ZS, m, n, +1), kResidual);
                    rep.ge("zs_sign_control_" + s, "zero-curvature", zs_residual(ZS, m, n, -1), kControl);
                }
        }
        if (only.wants("curvature")) {
            const Curvature2Form F = curvature(ZS);
            for (const auto& [ij, f] : F.entries)
                rep.le("curvature_S_" + pair_name(ij.first, ij.second), "zero-curvature", norm(f), kResidual);
        }
        if (only.wants("ym")) {
            const double flat = ym_value(ZS, c.ym_i, c.ym_j, c.ym);
            rep.info("ym_flat", "yang-mills", flat);
            std::mt19937_64 rng(c.seed ^ 0x9e3779b97f4a7c15ULL);
            double lowest = flat;
            for (int k = 0; k < c.perturbations; ++k) {
                // eps t_i A dt_j bends exactly the (i, j) component
                ConnForm bump(p);
                const Symbol A = detail::random_negative_symbol(rng, p, -1, 4);
                bump[c.ym_j].add_term(TMono::t(p.K, c.ym_i), A, Complex{c.perturbation_size});
                const double v = ym_value(ZS + bump, c.ym_i, c.ym_j, c.ym);
                lowest = std::min(lowest, v);
                const std::string s = std::to_string(k);
                rep.info("ym_perturbed_" + s, "yang-mills", v);
                rep.le("ym_ratio_" + s, "yang-mills", v > 0.0 ? flat / v : std::numeric_limits<double>::infinity(),
                       kYMRatio);
            }
            rep.ge("ym_nonnegative", "yang-mills", lowest, -1e-14);
        }
    }

    if (only.wants("kp2")) {
        const UJet u = extract_u(jet.L);
        rep.le("kp2_t12", "kp2", check_t12(u), kResidual);
        const PairResidual r13 = check_t13(u);
        rep.le("kp2_t13_u1", "kp2", r13.first, kResidual);
        rep.le("kp2_t13_u2", "kp2", r13.second, kResidual);
        const PairResidual r23 = check_t23(u);
        rep.le("kp2_t23_first", "kp2", r23.first, kResidual);
        rep.le("kp2_t23_second", "kp2", r23.second, kResidual);
        const Equivalence e = equiv_t23(u);
        rep.holds("kp2_first_equation_holds", "kp2", e.eq1_holds);
        rep.le("kp2_reduction_discrepancy", "kp2", e.discrepancy, kResidual);
    }
    return rep;
}

Report cmd_flow(const RunConfig& c, const Selection& only) {
    Report rep("flow", c);
    const TruncParams& p = c.params;
    const FlowConfig& f = c.flow;
    const KPJet jet = kp_solve(build_S0(c), p);
    const double t_half = f.t_end / 2;
    const double ratio_floor = 0.7 * std::pow(2.0, p.V + 1);
    const double inf = std::numeric_limits<double>::infinity();

    if (only.wants("compare")) {
        for (int n : f.directions) {
            const std::string s = "t" + std::to_string(n);
            try {
                const FlowJetComparison a = compare_flow_jet(jet, n, f.t_end, f.weighted, f.steps, f.blowup);
                const FlowJetComparison b = compare_flow_jet(jet, n, t_half, f.weighted, f.steps, f.blowup);
                rep.info("flow_error_" + s + "_t_end", "flow", a.error);
                rep.info("flow_error_" + s + "_t_half", "flow", b.error);
                rep.ge("flow_error_ratio_" + s, "flow", b.error > 0.0 ? a.error / b.error : inf, ratio_floor);
                rep.le("flow_lead_drift_" + s, "flow", std::max(a.lead_drift, b.lead_drift), kDrift);
                rep.info("flow_order0_max_" + s, "flow", std::max(a.order0_max, b.order0_max));
                if (!c.out_dir.empty()) {
                    std::ostringstream tsv;
                    tsv << "t\ttau\terror\n";
                    tsv << num(t_half) << '\t' << num(b.tau) << '\t' << num(b.error) << '\n';
                    tsv << num(f.t_end) << '\t' << num(a.tau) << '\t' << num(a.error) << '\n';
                    detail::write_file(c.out_dir, "flow_error_" + s + ".tsv", tsv.str());
                }
            } catch (const std::runtime_error&) {
                rep.le("flow_blowup_" + s, "flow", inf, f.blowup);
            }
        }
    }

    const bool control = std::find(only.groups.begin(), only.groups.end(), "control") != only.groups.end();
    for (std::size_t a = 0; a < f.directions.size(); ++a)
        for (std::size_t b = a + 1; b < f.directions.size(); ++b) {
            const int n = f.directions[a];
            const int m = f.directions[b];
            const std::string s = pair_name(n, m);
            try {
                if (only.wants("commute"))
                    rep.le("flows_commute_" + s, "flow",
                           flows_commute(jet.L0, n, m, t_half, f.steps, f.weighted, FlowForm::SFromD, f.blowup), kCommute);
                if (control)
                    rep.info("flows_commute_control_" + s, "flow",
                             flows_commute(jet.L0, n, m, t_half, f.steps, f.weighted, FlowForm::DSignFlipped, f.blowup));
            } catch (const std::runtime_error&) {
                rep.le("flows_commute_blowup_" + s, "flow", inf, f.blowup);
            }
        }
    return rep;
}

}  // namespace nfkp::cli
