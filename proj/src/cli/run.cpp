#include <algorithm>
#include <optional>
#include <ostream>

#include "CLI11.hpp"
#include "common.hpp"
#include "nfkp/cli.hpp"

namespace nfkp::cli {

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for the KP hierarchy on the circle", "nfkp-cli"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::vector<std::string> only;
    bool verbose = false;
    app.add_option("--config", config_path, "JSON configuration file");
    auto* seed_opt = app.add_option("--seed", seed, "seed for randomized inputs (overrides the config)");
    app.add_option("--out", out_dir, "directory for report, factors and plot data");
    app.add_option("--only", only, "comma-separated check groups")->delimiter(',');
    app.add_flag("--verbose", verbose, "one line per record on stderr");

    const char* names[] = {"factorize", "check", "flow", "paper-table"};
    const char* help[] = {"factorize U = S^-1 Y and check the factors",
                          "hierarchy, zero-curvature, Yang-Mills and KP-II residuals",
                          "numerical flows against the jet, and flow commutation",
                          "symbols of L^2, L^3 and [L^2_D, L^3_D] against closed forms"};
    for (int k = 0; k < 4; ++k) app.add_subcommand(names[k], help[k])->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    const int min_K = (cmd == "check" || cmd == "flow") ? 3 : 1;
    RunConfig c;
    try {
        c = config_path.empty() ? parse_config("{}", "<defaults>", min_K) : load_config(config_path, min_K);
    } catch (const ConfigError& e) {
        err << e.what() << "\n";
        return 2;
    }
    if (*seed_opt) c.seed = seed;
    if (!out_dir.empty()) c.out_dir = out_dir;

    static const std::vector<std::string> check_groups{"hierarchy", "zs", "curvature", "ym", "kp2"};
    static const std::vector<std::string> flow_groups{"compare", "commute", "control"};
    if (!only.empty()) {
        const auto& allowed = cmd == "check" ? check_groups : flow_groups;
        if (cmd != "check" && cmd != "flow") {
            err << "error: --only applies to check and flow\n";
            return 2;
        }
        for (const auto& g : only)
            if (std::find(allowed.begin(), allowed.end(), g) == allowed.end()) {
                err << "error: unknown group '" << g << "' for " << cmd << "\n";
                return 2;
            }
    }
    const Selection sel{only};

    std::optional<Report> rep;
    try {
        if (cmd == "factorize") rep = cmd_factorize(c);
        else if (cmd == "check") rep = cmd_check(c, sel);
        else if (cmd == "flow") rep = cmd_flow(c, sel);
        else rep = cmd_paper_table(c);
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }

    const std::string text = rep->dump();
    out << text;
    if (!c.out_dir.empty()) detail::write_file(c.out_dir, "report_" + cmd + ".json", text);
    if (verbose)
        for (const auto& r : rep->records()) {
            const char* rel = r.relation == Relation::LE ? "<=" : r.relation == Relation::GE ? ">=" : "  ";
            err << (r.pass ? "pass " : "FAIL ") << r.name << " = " << detail::num(r.value);
            if (r.relation != Relation::Info) err << ' ' << rel << ' ' << detail::num(r.tolerance);
            err << "\n";
        }
    return rep->all_pass() ? 0 : 1;
}

}  // namespace nfkp::cli
