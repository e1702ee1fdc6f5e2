#include <cmath>

#include "nfkp/cli.hpp"

namespace nfkp::cli {

Report::Report(std::string command, const RunConfig& c)
    : command_(std::move(command)), hash_(config_hash(c)), seed_(c.seed), echo_(config_to_json(c)) {}

void Report::le(const std::string& name, const std::string& tag, double value, double tol) {
    records_.push_back({name, tag, value, tol, Relation::LE, std::isfinite(value) && value <= tol});
}

void Report::ge(const std::string& name, const std::string& tag, double value, double tol) {
    records_.push_back({name, tag, value, tol, Relation::GE, std::isfinite(value) && value >= tol});
}

void Report::holds(const std::string& name, const std::string& tag, bool ok) {
    records_.push_back({name, tag, ok ? 0.0 : 1.0, 0.0, Relation::LE, ok});
}

void Report::info(const std::string& name, const std::string& tag, double value) {
    records_.push_back({name, tag, value, 0.0, Relation::Info, true});
}

bool Report::all_pass() const {
    for (const auto& r : records_)
        if (!r.pass) return false;
    return true;
}

namespace {

const char* relation_name(Relation r) {
    switch (r) {
        case Relation::LE: return "<=";
        case Relation::GE: return ">=";
        default: return "info";
    }
}

// JSON has no inf/nan; keep them readable instead of null.
Json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

}  // namespace

Json Report::to_json() const {
    Json recs = Json::array();
    int failed = 0;
    for (const auto& r : records_) {
        Json j;
        j["name"] = r.name;
        j["tag"] = r.tag;
        j["value"] = number(r.value);
        if (r.relation == Relation::Info)
            j["tolerance"] = nullptr;
        else
            j["tolerance"] = number(r.tolerance);
        j["relation"] = relation_name(r.relation);
        j["pass"] = r.pass;
        j["config_hash"] = hash_;
        recs.push_back(std::move(j));
        failed += r.pass ? 0 : 1;
    }
    Json out;
    out["command"] = command_;
    out["seed"] = seed_;
    out["config_hash"] = hash_;
    out["config"] = echo_;
    out["records"] = std::move(recs);
    out["summary"] = {{"records", records_.size()}, {"failed", failed}, {"all_pass", failed == 0}};
    return out;
}

std::string Report::dump() const { return to_json().dump(2) + "\n"; }

bool Selection::wants(const std::string& group) const {
    if (groups.empty()) return true;
    for (const auto& g : groups)
        if (g == group) return true;
    return false;
}

}  // namespace nfkp::cli
