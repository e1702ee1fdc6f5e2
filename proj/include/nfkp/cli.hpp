#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "nfkp/kp2.hpp"
#include "nfkp/zerocurv.hpp"

namespace nfkp::cli {

using Json = nlohmann::ordered_json;

/// Configuration problem, message formatted as "<source>:<line>: <what>".
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& what);
    int line() const { return line_; }

private:
    int line_;
};

/// Fourier table of a scalar function: (mode, coefficient) pairs.
using ModeTable = std::vector<std::pair<int, std::complex<double>>>;

struct S0Term {
    int order = -1;
    ModeTable modes;
};

struct FlowConfig {
    double t_end = 0.02;        ///< largest comparison time; t_end/2 is the second point
    int steps = 256;            ///< RK4 steps per flow, dt = tau/steps
    bool weighted = true;       ///< direction n runs for tau = t^n
    std::vector<int> directions{2, 3};
    double blowup = 1e6;
};

struct TableConfig {
    int pairs = 20;             ///< random (u1, u2) pairs when none are given
    int modes = 8;
    std::optional<ModeTable> u1;
    std::optional<ModeTable> u2;
};

struct RunConfig {
    TruncParams params;
    YMQuadrature ym;            ///< cube, realization cutoff and nodes
    int ym_i = 2;
    int ym_j = 3;
    int perturbations = 10;
    double perturbation_size = 1e-2;
    FlowConfig flow;
    TableConfig table;
    /// Dressing S0 - 1; absent means the reference dressing 1 + cos x xi^-1.
    std::optional<std::vector<S0Term>> s0;
    std::uint64_t seed = 1;
    std::string out_dir;
};

/// Parses and validates a JSON config; `source` names the input in messages.
/// `min_K` is the least number of times the calling command needs.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>", int min_K = 1);
RunConfig load_config(const std::string& path, int min_K = 1);
/// Normalized echo of every field (defaults filled in).
Json config_to_json(const RunConfig& c);
/// FNV-1a 64 of the normalized echo, as 16 hex digits.
std::string config_hash(const RunConfig& c);

LoopFn loop_from_table(const ModeTable& t, int d, int M);
Symbol build_S0(const RunConfig& c);

enum class Relation { LE, GE, Info };

struct Record {
    std::string name;
    std::string tag;
    double value = 0.0;
    double tolerance = 0.0;
    Relation relation = Relation::Info;
    bool pass = true;
};

class Report {
public:
    Report(std::string command, const RunConfig& c);

    /// value <= tol
    void le(const std::string& name, const std::string& tag, double value, double tol);
    /// value >= tol
    void ge(const std::string& name, const std::string& tag, double value, double tol);
    /// structural assertion, recorded as 0 (holds) or 1
    void holds(const std::string& name, const std::string& tag, bool ok);
    void info(const std::string& name, const std::string& tag, double value);

    const std::vector<Record>& records() const { return records_; }
    bool all_pass() const;
    const std::string& hash() const { return hash_; }
    Json to_json() const;
    std::string dump() const;

private:
    std::string command_;
    std::string hash_;
    std::uint64_t seed_;
    Json echo_;
    std::vector<Record> records_;
};

/// Subset of check groups to run; empty means all.
struct Selection {
    std::vector<std::string> groups;
    bool wants(const std::string& group) const;
};

Report cmd_factorize(const RunConfig& c);
Report cmd_check(const RunConfig& c, const Selection& only = {});
Report cmd_flow(const RunConfig& c, const Selection& only = {});
Report cmd_paper_table(const RunConfig& c);

/// Closed-form symbol rows of L^2, L^3 and [L^2_D, L^3_D] for L = xi + u1 xi^-1 + u2 xi^-2.
struct TableRow {
    std::string name;
    int power;      ///< 2, 3, or 0 for the commutator
    int order;
    LoopFn closed;
};
std::vector<TableRow> closed_form_rows(const LoopFn& u1, const LoopFn& u2);

/// Entry point shared by the executable and the tests. Exit codes: 0 all
/// checks pass, 1 some check fails, 2 configuration or usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace nfkp::cli
