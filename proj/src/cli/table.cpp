#include <algorithm>
#include <random>
#include <sstream>

#include "common.hpp"
#include "nfkp/cli.hpp"

namespace nfkp::cli {

std::vector<TableRow> closed_form_rows(const LoopFn& u1, const LoopFn& u2) {
    const int d = u1.dim();
    const int M = u1.cutoff();
    const LoopFn one = LoopFn::constant(d, M, Complex{1.0});
    const LoopFn zero(d, M);
    const LoopFn d1 = u1.dx();
    return {
        {"L2_order2", 2, 2, one},
        {"L2_order1", 2, 1, zero},
        {"L2_order0", 2, 0, u1 * Complex{2.0}},
        {"L3_order3", 3, 3, one},
        {"L3_order2", 3, 2, zero},
        {"L3_order1", 3, 1, u1 * Complex{3.0}},
        {"L3_order0", 3, 0, u2 * Complex{3.0} + d1 * Complex{3.0}},
        {"comm_order2", 0, 2, zero},
        {"comm_order1", 0, 1, u1.dx(2) * Complex{3.0} + u2.dx() * Complex{6.0}},
        {"comm_order0", 0, 0, d1 * u1 * Complex{-6.0} + u1.dx(3) + u2.dx(2) * Complex{3.0}},
    };
}

Report cmd_paper_table(const RunConfig& c) {
    Report rep("paper-table", c);
    const TruncParams& p = c.params;

    std::vector<std::pair<LoopFn, LoopFn>> inputs;
    if (c.table.u1) {
        inputs.emplace_back(loop_from_table(*c.table.u1, p.d, p.M), loop_from_table(*c.table.u2, p.d, p.M));
    } else {
        std::mt19937_64 rng(c.seed);
        for (int k = 0; k < c.table.pairs; ++k) {
            LoopFn u1 = detail::random_trig(rng, p.d, p.M, c.table.modes, 1.0);
            LoopFn u2 = detail::random_trig(rng, p.d, p.M, c.table.modes, 1.0);
            inputs.emplace_back(std::move(u1), std::move(u2));
        }
    }

    std::vector<std::string> names;
    std::vector<double> worst;
    std::ostringstream tsv;
    tsv << "pair\trow\tmode\tengine_re\tengine_im\tclosed_re\tclosed_im\n";
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const auto& [u1, u2] = inputs[k];
        const Symbol L = embed_u({u1, u2}, p);
        const Symbol L2 = power(L, 2);
        const Symbol L3 = power(L, 3);
        const Symbol C = commutator(project_D(L2), project_D(L3));
        const auto rows = closed_form_rows(u1, u2);
        if (names.empty())
            for (const auto& r : rows) {
                names.push_back(r.name);
                worst.push_back(0.0);
            }
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const TableRow& r = rows[i];
            const Symbol& src = r.power == 2 ? L2 : r.power == 3 ? L3 : C;
            const LoopFn& engine = src.coeff(r.order);
            worst[i] = std::max(worst[i], distance(engine, r.closed));
            if (c.out_dir.empty()) continue;
            for (int m = -p.M; m <= p.M; ++m) {
                const Complex e = engine.at(m);
                const Complex f = r.closed.at(m);
                if (e == Complex{} && f == Complex{}) continue;
                tsv << k << '\t' << r.name << '\t' << m << '\t' << detail::num(static_cast<double>(e.real())) << '\t'
                    << detail::num(static_cast<double>(e.imag())) << '\t' << detail::num(static_cast<double>(f.real()))
                    << '\t' << detail::num(static_cast<double>(f.imag())) << '\n';
            }
        }
    }
    double overall = 0.0;
    for (std::size_t i = 0; i < names.size(); ++i) {
        rep.le(names[i], "symbol-table", worst[i], 1e-10);
        overall = std::max(overall, worst[i]);
    }
    rep.le("table_max", "symbol-table", overall, 1e-10);
    rep.info("pairs", "plumbing", static_cast<double>(inputs.size()));
    if (!c.out_dir.empty()) detail::write_file(c.out_dir, "paper_table.tsv", tsv.str());
    return rep;
}

}  // namespace nfkp::cli
