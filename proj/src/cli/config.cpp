#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "nfkp/cli.hpp"

namespace nfkp::cli {

ConfigError::ConfigError(const std::string& source, int line, const std::string& what)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

namespace {

// Line of every value in already-validated JSON text, keyed by JSON pointer.
class LineIndex {
public:
    explicit LineIndex(const std::string& text) : s_(text) {
        skip_ws();
        value("");
    }
    int line(const std::string& ptr) const {
        std::string p = ptr;
        while (true) {
            auto it = lines_.find(p);
            if (it != lines_.end()) return it->second;
            const auto cut = p.rfind('/');
            if (cut == std::string::npos || p.empty()) return 1;
            p = p.substr(0, cut);
        }
    }

private:
    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) {
            if (s_[i_] == '\n') ++line_;
            ++i_;
        }
    }
    std::string string_token() {
        std::string out;
        ++i_;
        while (i_ < s_.size() && s_[i_] != '"') {
            if (s_[i_] == '\\') ++i_;
            out += s_[i_++];
        }
        ++i_;
        return out;
    }
    void value(const std::string& ptr) {
        lines_[ptr] = line_;
        if (i_ >= s_.size()) return;
        const char c = s_[i_];
        if (c == '{') {
            ++i_;
            skip_ws();
            while (i_ < s_.size() && s_[i_] != '}') {
                const int key_line = line_;
                const std::string key = string_token();
                skip_ws();
                ++i_;  // ':'
                skip_ws();
                value(ptr + "/" + key);
                lines_[ptr + "/" + key] = key_line;
                skip_ws();
                if (s_[i_] == ',') ++i_;
                skip_ws();
            }
            ++i_;
        } else if (c == '[') {
            ++i_;
            skip_ws();
            int k = 0;
            while (i_ < s_.size() && s_[i_] != ']') {
                value(ptr + "/" + std::to_string(k++));
                skip_ws();
                if (s_[i_] == ',') ++i_;
                skip_ws();
            }
            ++i_;
        } else if (c == '"') {
            string_token();
        } else {
            while (i_ < s_.size() && s_[i_] != ',' && s_[i_] != '}' && s_[i_] != ']' &&
                   !std::isspace(static_cast<unsigned char>(s_[i_])))
                ++i_;
        }
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
    std::map<std::string, int> lines_;
};

class Reader {
public:
    Reader(const Json& root, const LineIndex& idx, std::string source) : root_(root), idx_(idx), src_(std::move(source)) {}

    [[noreturn]] void fail(const std::string& ptr, const std::string& what) const {
        throw ConfigError(src_, idx_.line(ptr), what);
    }

    void allow_keys(const Json& obj, const std::string& ptr, std::initializer_list<const char*> keys) const {
        if (!obj.is_object()) fail(ptr, "'" + name(ptr) + "' must be an object");
        for (const auto& [k, v] : obj.items()) {
            bool known = false;
            for (const char* a : keys) known = known || k == a;
            if (!known) fail(ptr + "/" + k, "unknown key '" + k + "'");
        }
    }

    int get_int(const Json& obj, const std::string& ptr, const char* key, int fallback) const {
        if (!obj.contains(key)) return fallback;
        const Json& v = obj.at(key);
        if (!v.is_number_integer()) fail(ptr + "/" + key, std::string("'") + key + "' must be an integer");
        return v.get<int>();
    }
    double get_num(const Json& obj, const std::string& ptr, const char* key, double fallback) const {
        if (!obj.contains(key)) return fallback;
        const Json& v = obj.at(key);
        if (!v.is_number()) fail(ptr + "/" + key, std::string("'") + key + "' must be a number");
        return v.get<double>();
    }
    bool get_bool(const Json& obj, const std::string& ptr, const char* key, bool fallback) const {
        if (!obj.contains(key)) return fallback;
        const Json& v = obj.at(key);
        if (!v.is_boolean()) fail(ptr + "/" + key, std::string("'") + key + "' must be true or false");
        return v.get<bool>();
    }

    ModeTable modes(const Json& arr, const std::string& ptr) const {
        if (!arr.is_array()) fail(ptr, "mode table must be an array of [m, re] or [m, re, im]");
        ModeTable out;
        for (std::size_t k = 0; k < arr.size(); ++k) {
            const std::string p = ptr + "/" + std::to_string(k);
            const Json& e = arr[k];
            if (!e.is_array() || e.size() < 2 || e.size() > 3 || !e[0].is_number_integer() || !e[1].is_number() ||
                (e.size() == 3 && !e[2].is_number()))
                fail(p, "mode entry must be [m, re] or [m, re, im] with integer m");
            const double im = e.size() == 3 ? e[2].get<double>() : 0.0;
            out.emplace_back(e[0].get<int>(), std::complex<double>(e[1].get<double>(), im));
        }
        return out;
    }

    const Json& root() const { return root_; }

private:
    static std::string name(const std::string& ptr) {
        const auto cut = ptr.rfind('/');
        return cut == std::string::npos ? ptr : ptr.substr(cut + 1);
    }
    const Json& root_;
    const LineIndex& idx_;
    std::string src_;
};

// 1 + cos x xi^-1
S0Term default_s0() { return {-1, {{1, 0.5}, {-1, 0.5}}}; }

Json modes_to_json(const ModeTable& t) {
    Json a = Json::array();
    for (const auto& [m, c] : t) a.push_back(Json::array({m, c.real(), c.imag()}));
    return a;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source, int min_K) {
    Json root;
    try {
        root = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // byte offset -> line
        int line = 1;
        for (std::size_t k = 0; k < e.byte && k < text.size(); ++k)
            if (text[k] == '\n') ++line;
        std::string what = e.what();
        if (const auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
        throw ConfigError(source, line, "invalid JSON: " + what);
    }
    const LineIndex idx(text);
    const Reader r(root, idx, source);
    r.allow_keys(root, "", {"truncation", "yang_mills", "flow", "table", "s0", "seed", "out_dir"});

    RunConfig c;
    if (root.contains("truncation")) {
        const Json& t = root["truncation"];
        const std::string p = "/truncation";
        r.allow_keys(t, p, {"d", "M", "F", "N", "V", "K", "guard", "hbar"});
        TruncParams& q = c.params;
        q.d = r.get_int(t, p, "d", q.d);
        q.M = r.get_int(t, p, "M", q.M);
        q.F = r.get_int(t, p, "F", q.F);
        q.N = r.get_int(t, p, "N", q.N);
        q.V = r.get_int(t, p, "V", q.V);
        q.K = r.get_int(t, p, "K", q.K);
        q.guard = r.get_int(t, p, "guard", q.guard);
        q.hbar = r.get_num(t, p, "hbar", q.hbar);
        if (q.d < 1) r.fail(p + "/d", "d must be >= 1");
        if (q.M < 1) r.fail(p + "/M", "M must be >= 1");
        if (q.F > -1) r.fail(p + "/F", "F must be <= -1");
        if (q.N < 1) r.fail(p + "/N", "N must be >= 1");
        if (q.V < 1) r.fail(p + "/V", "V must be >= 1");
        if (q.K < min_K) r.fail(p + "/K", "K must be >= " + std::to_string(min_K) + " for this command");
        if (q.guard < 0) r.fail(p + "/guard", "guard must be >= 0");
        if (!(q.hbar > 0.0)) r.fail(p + "/hbar", "hbar must be positive");
    }
    if (root.contains("yang_mills")) {
        const Json& y = root["yang_mills"];
        const std::string p = "/yang_mills";
        r.allow_keys(y, p, {"half_width", "cube_dim", "Mr", "nodes", "i", "j", "perturbations", "perturbation_size"});
        c.ym.half_width = r.get_num(y, p, "half_width", c.ym.half_width);
        c.ym.cube_dim = r.get_int(y, p, "cube_dim", c.ym.cube_dim);
        c.ym.Mr = r.get_int(y, p, "Mr", c.ym.Mr);
        c.ym.nodes = r.get_int(y, p, "nodes", c.ym.nodes);
        c.ym_i = r.get_int(y, p, "i", c.ym_i);
        c.ym_j = r.get_int(y, p, "j", c.ym_j);
        c.perturbations = r.get_int(y, p, "perturbations", c.perturbations);
        c.perturbation_size = r.get_num(y, p, "perturbation_size", c.perturbation_size);
        if (!(c.ym.half_width > 0.0)) r.fail(p + "/half_width", "half_width must be positive");
        if (c.ym.cube_dim < 1 || c.ym.cube_dim > c.params.K) r.fail(p + "/cube_dim", "cube_dim must lie in [1, K]");
        if (c.ym.Mr < 1 || c.ym.Mr > c.params.M) r.fail(p + "/Mr", "Mr must lie in [1, M]");
        if (c.ym.nodes < 1) r.fail(p + "/nodes", "nodes must be >= 1");
        if (!(1 <= c.ym_i && c.ym_i < c.ym_j && c.ym_j <= c.params.K)) r.fail(p + "/i", "need 1 <= i < j <= K");
        if (c.perturbations < 1) r.fail(p + "/perturbations", "perturbations must be >= 1");
    }
    if (root.contains("flow")) {
        const Json& f = root["flow"];
        const std::string p = "/flow";
        r.allow_keys(f, p, {"t_end", "steps", "weighted", "directions", "blowup"});
        c.flow.t_end = r.get_num(f, p, "t_end", c.flow.t_end);
        c.flow.steps = r.get_int(f, p, "steps", c.flow.steps);
        c.flow.weighted = r.get_bool(f, p, "weighted", c.flow.weighted);
        c.flow.blowup = r.get_num(f, p, "blowup", c.flow.blowup);
        if (f.contains("directions")) {
            const Json& d = f["directions"];
            if (!d.is_array() || d.empty()) r.fail(p + "/directions", "directions must be a non-empty array");
            c.flow.directions.clear();
            for (std::size_t k = 0; k < d.size(); ++k) {
                const std::string q = p + "/directions/" + std::to_string(k);
                if (!d[k].is_number_integer()) r.fail(q, "direction must be an integer");
                const int n = d[k].get<int>();
                if (n < 1 || n > c.params.K) r.fail(q, "direction must lie in [1, K]");
                c.flow.directions.push_back(n);
            }
        }
        if (!(c.flow.t_end > 0.0)) r.fail(p + "/t_end", "t_end must be positive");
        if (c.flow.steps < 1) r.fail(p + "/steps", "steps must be >= 1");
        if (!(c.flow.blowup > 0.0)) r.fail(p + "/blowup", "blowup must be positive");
    }
    if (root.contains("table")) {
        const Json& t = root["table"];
        const std::string p = "/table";
        r.allow_keys(t, p, {"pairs", "modes", "u1", "u2"});
        c.table.pairs = r.get_int(t, p, "pairs", c.table.pairs);
        c.table.modes = r.get_int(t, p, "modes", c.table.modes);
        if (c.table.pairs < 1) r.fail(p + "/pairs", "pairs must be >= 1");
        if (c.table.modes < 1 || c.table.modes > c.params.M) r.fail(p + "/modes", "modes must lie in [1, M]");
        for (const char* key : {"u1", "u2"}) {
            if (!t.contains(key)) continue;
            const std::string q = p + "/" + key;
            ModeTable m = r.modes(t[key], q);
            for (std::size_t k = 0; k < m.size(); ++k)
                if (std::abs(m[k].first) > c.params.M) r.fail(q + "/" + std::to_string(k), "mode exceeds M");
            (std::string(key) == "u1" ? c.table.u1 : c.table.u2) = std::move(m);
        }
        if (c.table.u1.has_value() != c.table.u2.has_value()) r.fail(p, "give both u1 and u2 or neither");
    }
    if (root.contains("s0")) {
        const Json& s = root["s0"];
        if (!s.is_array()) r.fail("/s0", "'s0' must be an array of {order, modes}");
        std::vector<S0Term> terms;
        for (std::size_t k = 0; k < s.size(); ++k) {
            const std::string p = "/s0/" + std::to_string(k);
            r.allow_keys(s[k], p, {"order", "modes"});
            if (!s[k].contains("order")) r.fail(p, "s0 entry needs 'order'");
            if (!s[k].contains("modes")) r.fail(p, "s0 entry needs 'modes'");
            S0Term term;
            term.order = r.get_int(s[k], p, "order", 0);
            if (term.order > -1) r.fail(p + "/order", "s0 orders must be <= -1 (got " + std::to_string(term.order) + ")");
            if (term.order < c.params.working_floor())
                r.fail(p + "/order", "s0 order below the working floor F - guard");
            for (const auto& prev : terms)
                if (prev.order == term.order) r.fail(p + "/order", "duplicate s0 order");
            term.modes = r.modes(s[k]["modes"], p + "/modes");
            for (std::size_t m = 0; m < term.modes.size(); ++m)
                if (std::abs(term.modes[m].first) > c.params.M)
                    r.fail(p + "/modes/" + std::to_string(m), "mode exceeds M");
            terms.push_back(std::move(term));
        }
        c.s0 = std::move(terms);
    }
    if (c.params.K < min_K) r.fail("/truncation/K", "K must be >= " + std::to_string(min_K) + " for this command");
    // cross-section limits, checked once every section is in
    if (c.ym.Mr > c.params.M) r.fail(root.contains("yang_mills") ? "/yang_mills/Mr" : "/truncation/M", "Mr must not exceed M");
    if (c.ym.cube_dim > c.params.K || c.ym_j > c.params.K)
        r.fail(root.contains("yang_mills") ? "/yang_mills" : "/truncation/K", "Yang-Mills indices exceed K");
    for (int n : c.flow.directions)
        if (n > c.params.K) r.fail(root.contains("flow") ? "/flow/directions" : "/truncation/K", "flow direction exceeds K");
    if (c.table.modes > c.params.M) r.fail(root.contains("table") ? "/table/modes" : "/truncation/M", "table modes exceed M");

    if (root.contains("seed")) {
        const Json& v = root["seed"];
        if (!v.is_number_unsigned()) r.fail("/seed", "'seed' must be a non-negative integer");
        c.seed = v.get<std::uint64_t>();
    }
    if (root.contains("out_dir")) {
        if (!root["out_dir"].is_string()) r.fail("/out_dir", "'out_dir' must be a string");
        c.out_dir = root["out_dir"].get<std::string>();
    }
    return c;
}

RunConfig load_config(const std::string& path, int min_K) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, 0, "cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path, min_K);
}

Json config_to_json(const RunConfig& c) {
    const TruncParams& q = c.params;
    Json j;
    j["truncation"] = {{"d", q.d}, {"M", q.M}, {"F", q.F}, {"N", q.N}, {"V", q.V}, {"K", q.K}, {"guard", q.guard}, {"hbar", q.hbar}};
    j["yang_mills"] = {{"half_width", c.ym.half_width}, {"cube_dim", c.ym.cube_dim}, {"Mr", c.ym.Mr},
                       {"nodes", c.ym.nodes}, {"i", c.ym_i}, {"j", c.ym_j},
                       {"perturbations", c.perturbations}, {"perturbation_size", c.perturbation_size}};
    j["flow"] = {{"t_end", c.flow.t_end}, {"steps", c.flow.steps}, {"weighted", c.flow.weighted},
                 {"directions", c.flow.directions}, {"blowup", c.flow.blowup}};
    Json t = {{"pairs", c.table.pairs}, {"modes", c.table.modes}};
    if (c.table.u1) t["u1"] = modes_to_json(*c.table.u1);
    if (c.table.u2) t["u2"] = modes_to_json(*c.table.u2);
    j["table"] = t;
    const std::vector<S0Term> terms = c.s0 ? *c.s0 : std::vector<S0Term>{default_s0()};
    Json s = Json::array();
    for (const auto& term : terms) s.push_back({{"order", term.order}, {"modes", modes_to_json(term.modes)}});
    j["s0"] = s;
    j["seed"] = c.seed;
    return j;
}

std::string config_hash(const RunConfig& c) {
    const std::string s = config_to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

LoopFn loop_from_table(const ModeTable& t, int d, int M) {
    LoopFn f(d, M);
    for (const auto& [m, c] : t)
        for (int r = 0; r < d; ++r) f.at(m, r, r) += Complex{c.real(), c.imag()};
    return f;
}

Symbol build_S0(const RunConfig& c) {
    const TruncParams& p = c.params;
    Symbol s = Symbol::identity(p);
    for (const auto& term : c.s0 ? *c.s0 : std::vector<S0Term>{default_s0()}) s.set(term.order, loop_from_table(term.modes, p.d, p.M));
    s.trim();
    return s;
}

}  // namespace nfkp::cli
