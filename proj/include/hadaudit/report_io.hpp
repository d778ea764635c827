#pragma once

// Report serialization: JSON (schema "hadamard-audit/1") and CSV.
// Both carry the same numeric values; doubles are emitted with enough
// digits for a bit-faithful round trip.

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "hadaudit/ineq.hpp"
#include "hadaudit/sweep.hpp"

namespace hadaudit {

inline constexpr const char* kJsonSchemaTag = "hadamard-audit/1";

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::ordered_json report_to_json(const InequalityReport& rep) {
    nlohmann::ordered_json j;
    j["theorem"] = rep.theorem;
    j["function"] = rep.function;
    j["interval"] = {rep.interval.a, rep.interval.b};
    j["chain"] = nlohmann::ordered_json::array();
    for (const auto& e : rep.chain)
        j["chain"].push_back({{"name", e.name},
                              {"value", e.value},
                              {"abs_error", e.abs_error}});
    j["aux"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : rep.aux) j["aux"][k] = v;
    j["slack"] = rep.slack;
    j["tolerance_used"] = rep.tolerance_used;
    j["verdict"] = verdict_name(rep.verdict);
    if (!rep.notes.empty()) j["notes"] = rep.notes;
    return j;
}

inline nlohmann::ordered_json summary_to_json(const SweepSummary& summary,
                                              bool include_wall_time = true) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json cfg;
    cfg["theorems"] = summary.config.theorems;
    std::vector<std::string> fams;
    for (Family f : summary.config.families) fams.push_back(family_name(f));
    cfg["families"] = fams;
    cfg["trials"] = summary.config.trials;
    cfg["seed"] = summary.config.seed;
    cfg["lo"] = summary.config.lo;
    cfg["hi"] = summary.config.hi;
    cfg["tol"] = summary.config.tol;
    j["config"] = cfg;

    nlohmann::ordered_json per;
    for (const auto& [tag, stats] : summary.per_theorem) {
        nlohmann::ordered_json s;
        s["trials"] = stats.trials;
        s["holds"] = stats.holds;
        s["equality"] = stats.equality;
        s["violated"] = stats.violated;
        s["inconclusive"] = stats.inconclusive;
        s["skipped"] = stats.skipped;
        s["min_slack"] = stats.min_slack;
        if (stats.min_slack_reproducer) {
            const Reproducer& r = *stats.min_slack_reproducer;
            s["min_slack_reproducer"] = {{"trial", r.trial},
                                         {"function", r.function},
                                         {"interval", {r.a, r.b}},
                                         {"slack", r.slack}};
        }
        s["violations"] = nlohmann::ordered_json::array();
        for (const Reproducer& r : stats.violations)
            s["violations"].push_back({{"trial", r.trial},
                                       {"function", r.function},
                                       {"interval", {r.a, r.b}},
                                       {"slack", r.slack}});
        per[tag] = s;
    }
    j["per_theorem"] = per;
    if (include_wall_time) j["wall_time_seconds"] = summary.wall_time_seconds;
    return j;
}

inline nlohmann::ordered_json record_to_json(const SharpnessRecord& rec) {
    nlohmann::ordered_json j;
    j["theorem"] = rec.theorem;
    j["family"] = family_name(rec.family);
    j["best_slack"] = rec.best_slack;
    j["best_params"] = rec.best_params;
    j["best_function"] = rec.best_function;
    j["best_so_far"] = rec.best_so_far;
    j["evaluations"] = rec.evaluations;
    return j;
}

// Wraps subcommand output in the versioned envelope.
inline nlohmann::ordered_json make_envelope(
    const std::string& subcommand, const nlohmann::ordered_json& config,
    const std::vector<InequalityReport>& reports) {
    nlohmann::ordered_json j;
    j["schema"] = kJsonSchemaTag;
    j["subcommand"] = subcommand;
    j["config"] = config;
    j["reports"] = nlohmann::ordered_json::array();
    for (const auto& r : reports) j["reports"].push_back(report_to_json(r));
    return j;
}

// CSV columns: theorem, function, a, b, name, value, abs_error, slack, verdict
inline std::string reports_to_csv(const std::vector<InequalityReport>& reports) {
    std::string out = "theorem,function,a,b,name,value,abs_error,slack,verdict\n";
    for (const auto& rep : reports) {
        for (const auto& e : rep.chain) {
            out += rep.theorem;
            out += ",\"" + rep.function + "\",";
            out += format_double(rep.interval.a) + ",";
            out += format_double(rep.interval.b) + ",";
            out += e.name + ",";
            out += format_double(e.value) + ",";
            out += format_double(e.abs_error) + ",";
            out += format_double(rep.slack) + ",";
            out += verdict_name(rep.verdict);
            out += '\n';
        }
    }
    return out;
}

}  // namespace hadaudit
