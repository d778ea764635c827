// hadaudit: numerically verify, audit and falsify Hadamard-type integral
// inequalities for convex nonnegative functions given in a small DSL.
//
// Exit codes: 0 all verdicts Holds/Equality, 1 usage/config/parse error,
// 2 at least one Violated, 3 Inconclusive or failed certificate.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hadaudit/means.hpp"
#include "hadaudit/report_io.hpp"
#include "hadaudit/sweep.hpp"

namespace {

using namespace hadaudit;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolated = 2;
constexpr int kExitInconclusive = 3;

struct OutputOptions {
    bool json = false;
    bool csv = false;
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, OutputOptions& opts) {
    cmd->add_flag("--json", opts.json, "emit a JSON report");
    cmd->add_flag("--csv", opts.csv, "emit a CSV report");
    cmd->add_option("--out", opts.out_path, "write the report to a file");
}

void emit(const OutputOptions& opts, const std::string& text) {
    if (opts.out_path.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
    } else {
        std::ofstream out(opts.out_path, std::ios::binary);
        out << text;
    }
}

std::string human_report(const InequalityReport& rep) {
    std::string s = rep.theorem + "  f=" + rep.function + "  [" +
                    format_double(rep.interval.a) + ", " +
                    format_double(rep.interval.b) + "]\n";
    for (const auto& e : rep.chain)
        s += "  " + e.name + " = " + format_double(e.value) +
             (e.abs_error > 0.0 ? "  (±" + format_double(e.abs_error) + ")" : "") +
             "\n";
    for (const auto& [k, v] : rep.aux)
        s += "  " + k + " = " + format_double(v) + "\n";
    s += "  slack = " + format_double(rep.slack) + "\n";
    s += "  verdict = " + verdict_name(rep.verdict) + "\n";
    for (const auto& note : rep.notes) s += "  note: " + note + "\n";
    return s;
}

void emit_reports(const OutputOptions& opts, const std::string& subcommand,
                  const nlohmann::ordered_json& config,
                  const std::vector<InequalityReport>& reports) {
    if (opts.json) {
        emit(opts, make_envelope(subcommand, config, reports).dump(2));
    } else if (opts.csv) {
        emit(opts, reports_to_csv(reports));
    } else {
        std::string text;
        for (const auto& r : reports) text += human_report(r);
        emit(opts, text);
    }
}

int exit_code_for(const std::vector<InequalityReport>& reports) {
    bool violated = false, inconclusive = false;
    for (const auto& r : reports) {
        violated = violated || r.verdict == Verdict::Violated;
        inconclusive = inconclusive || r.verdict == Verdict::Inconclusive;
    }
    if (violated) return kExitViolated;
    if (inconclusive) return kExitInconclusive;
    return kExitOk;
}

// Parses and certifies a DSL function; returns nullopt after printing a
// diagnostic (the caller maps that to the right exit code).
std::optional<ConvexFunction> certify(const std::string& spec_text, double a,
                                      double b, const std::string& thm,
                                      int& exit_code) {
    ExprPtr body;
    try {
        body = parse_expr(spec_text);
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << " (expected "
                  << e.expected() << ")\n";
        exit_code = kExitUsage;
        return std::nullopt;
    }
    std::optional<ConvexFunction> fopt;
    try {
        fopt = make_user_function(body, Interval{a, b});
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        exit_code = kExitUsage;
        return std::nullopt;
    }
    ConvexFunction& f = *fopt;
    if (!f.convexity->pass) {
        std::cerr << "certificate failed: f is not convex on the interval";
        if (f.convexity->witness)
            std::cerr << " (witness pair " << f.convexity->witness->first
                      << ", " << f.convexity->witness->second << ")";
        std::cerr << "\n";
        exit_code = kExitInconclusive;
        return std::nullopt;
    }
    if (!f.nonnegativity->pass) {
        if (thm == "1.1") {
            // (1.1) holds for every convex f; nonnegativity is only needed
            // by the squared-term inequalities.
            std::cerr << "note: f is not nonnegative; not required for 1.1\n";
        } else {
            std::cerr << "certificate failed: f is not nonnegative on the "
                         "interval\n";
            exit_code = kExitInconclusive;
            return std::nullopt;
        }
    }
    return f;
}

int run(int argc, char** argv) {
    CLI::App app{"numerical auditor for Hadamard-type convex-function "
                 "inequalities"};
    app.require_subcommand(1);

    // verify ----------------------------------------------------------
    std::string v_thm, v_fspec;
    double v_a = 0.0, v_b = 1.0, v_tol = kDefaultQuadTol;
    OutputOptions v_out;
    CLI::App* verify = app.add_subcommand("verify",
                                          "evaluate one inequality for one function");
    verify->add_option("--thm", v_thm, "theorem tag")
        ->required()
        ->check(CLI::IsMember({"1.1", "2.1", "2.2", "2.3", "2.4"}));
    verify->add_option("--f", v_fspec, "function in the DSL")->required();
    verify->add_option("--a", v_a, "left endpoint")->required();
    verify->add_option("--b", v_b, "right endpoint")->required();
    verify->add_option("--tol", v_tol, "quadrature tolerance");
    add_output_flags(verify, v_out);

    // sweep -----------------------------------------------------------
    std::string s_thms = "1.1,2.1,2.2,2.3";
    std::string s_families = "quadratic,exp-affine,power,recip,piecewise-linear-max";
    int s_trials = 100;
    std::uint64_t s_seed = 0;
    double s_lo = 0.1, s_hi = 10.0, s_tol = 1e-6;
    OutputOptions s_out;
    CLI::App* sweep = app.add_subcommand("sweep",
                                         "random property sweep over convex functions");
    sweep->add_option("--thms", s_thms, "comma list of theorem tags");
    sweep->add_option("--trials", s_trials, "number of trials");
    sweep->add_option("--seed", s_seed, "sweep seed");
    sweep->add_option("--families", s_families, "comma list of families");
    sweep->add_option("--lo", s_lo, "interval sampler lower bound");
    sweep->add_option("--hi", s_hi, "interval sampler upper bound");
    sweep->add_option("--tol", s_tol, "quadrature tolerance");
    add_output_flags(sweep, s_out);

    // means -----------------------------------------------------------
    std::string m_prop;
    double m_a = 0.0, m_b = 0.0;
    bool m_literal = false;
    OutputOptions m_out;
    CLI::App* means = app.add_subcommand("means",
                                         "evaluate the special-means propositions");
    means->add_option("--prop", m_prop, "proposition tag")
        ->required()
        ->check(CLI::IsMember({"3.1", "3.2"}));
    means->add_option("--a", m_a, "first argument")->required();
    means->add_option("--b", m_b, "second argument")->required();
    means->add_flag("--paper-literal", m_literal,
                    "use the printed 3.2 denominator (24*G^2)");
    add_output_flags(means, m_out);

    // audit -----------------------------------------------------------
    std::string a_thm, a_fspec;
    double a_a = 0.0, a_b = 1.0, a_tol = kDefaultQuadTol;
    std::optional<double> a_x, a_y;
    OutputOptions a_out;
    CLI::App* audit = app.add_subcommand("audit",
                                         "check a theorem's proof steps one by one");
    audit->add_option("--thm", a_thm, "theorem tag (2.3 or 2.4)")
        ->required()
        ->check(CLI::IsMember({"2.3", "2.4"}));
    audit->add_option("--f", a_fspec, "function in the DSL")->required();
    audit->add_option("--a", a_a, "left endpoint")->required();
    audit->add_option("--b", a_b, "right endpoint")->required();
    audit->add_option("--x", a_x, "pointwise x for step 2.3.1");
    audit->add_option("--y", a_y, "pointwise y for step 2.3.1");
    audit->add_option("--tol", a_tol, "quadrature tolerance");
    add_output_flags(audit, a_out);

    // sharpen ---------------------------------------------------------
    std::string sh_thm, sh_family = "quadratic";
    double sh_a = 0.0, sh_b = 1.0, sh_tol = 1e-7;
    std::uint64_t sh_seed = 0;
    int sh_iters = 100;
    OutputOptions sh_out;
    CLI::App* sharpen = app.add_subcommand("sharpen",
                                           "minimize slack over a family's parameters");
    sharpen->add_option("--thm", sh_thm, "theorem tag")->required();
    sharpen->add_option("--family", sh_family, "function family")->required();
    sharpen->add_option("--a", sh_a, "left endpoint")->required();
    sharpen->add_option("--b", sh_b, "right endpoint")->required();
    sharpen->add_option("--seed", sh_seed, "probe seed");
    sharpen->add_option("--iters", sh_iters, "iteration count");
    sharpen->add_option("--tol", sh_tol, "quadrature tolerance");
    add_output_flags(sharpen, sh_out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*verify) {
            int code = kExitUsage;
            auto f = certify(v_fspec, v_a, v_b, v_thm, code);
            if (!f) return code;
            InequalityReport rep;
            try {
                rep = evaluate_theorem(v_thm, *f, v_tol);
            } catch (const MidpointZero& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            nlohmann::ordered_json cfg{{"thm", v_thm}, {"f", v_fspec},
                                       {"a", v_a},     {"b", v_b},
                                       {"tol", v_tol}};
            emit_reports(v_out, "verify", cfg, {rep});
            return exit_code_for({rep});
        }

        if (*sweep) {
            SweepConfig cfg;
            cfg.trials = s_trials;
            cfg.seed = s_seed;
            cfg.lo = s_lo;
            cfg.hi = s_hi;
            cfg.tol = s_tol;
            cfg.theorems.clear();
            for (const auto& t : CLI::detail::split(s_thms, ','))
                if (!t.empty()) cfg.theorems.push_back(t);
            for (const auto& name : CLI::detail::split(s_families, ','))
                if (!name.empty()) cfg.families.push_back(family_from_name(name));
            auto start = std::chrono::steady_clock::now();
            SweepSummary summary = run_sweep(cfg);
            summary.wall_time_seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                              start)
                    .count();
            nlohmann::ordered_json j;
            j["schema"] = kJsonSchemaTag;
            j["subcommand"] = "sweep";
            nlohmann::ordered_json body = summary_to_json(summary);
            j["config"] = body["config"];
            j["reports"] = nlohmann::ordered_json::array();
            j["summary"] = {{"per_theorem", body["per_theorem"]},
                            {"wall_time_seconds", body["wall_time_seconds"]}};
            if (s_out.json || !s_out.out_path.empty()) {
                emit(s_out, j.dump(2));
            } else {
                for (const auto& [tag, stats] : summary.per_theorem)
                    std::printf(
                        "thm %-4s trials=%d holds=%d equality=%d violated=%d "
                        "inconclusive=%d skipped=%d min_slack=%s\n",
                        tag.c_str(), stats.trials, stats.holds, stats.equality,
                        stats.violated, stats.inconclusive, stats.skipped,
                        format_double(stats.min_slack).c_str());
            }
            for (const auto& [tag, stats] : summary.per_theorem)
                if (stats.violated > 0) return kExitViolated;
            for (const auto& [tag, stats] : summary.per_theorem)
                if (stats.inconclusive > 0) return kExitInconclusive;
            return kExitOk;
        }

        if (*means) {
            InequalityReport rep;
            try {
                rep = m_prop == "3.1"
                          ? eval_prop31(m_a, m_b)
                          : eval_prop32(m_a, m_b,
                                        m_literal ? Prop32Variant::PaperLiteral
                                                  : Prop32Variant::Corrected);
            } catch (const MeanUndefined& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            nlohmann::ordered_json cfg{{"prop", m_prop},
                                       {"a", m_a},
                                       {"b", m_b},
                                       {"paper_literal", m_literal}};
            emit_reports(m_out, "means", cfg, {rep});
            return exit_code_for({rep});
        }

        if (*audit) {
            int code = kExitUsage;
            auto f = certify(a_fspec, a_a, a_b, a_thm, code);
            if (!f) return code;
            std::vector<InequalityReport> reports;
            if (a_thm == "2.3") {
                double x = a_x.value_or(a_a);
                double y = a_y.value_or(a_b);
                auto [s1, s2] = audit_thm23_steps(*f, x, y, a_tol);
                reports = {s1, s2};
            } else {
                reports = audit_thm24_steps(*f, a_tol);
            }
            nlohmann::ordered_json cfg{{"thm", a_thm}, {"f", a_fspec},
                                       {"a", a_a},     {"b", a_b},
                                       {"tol", a_tol}};
            if (a_x) cfg["x"] = *a_x;
            if (a_y) cfg["y"] = *a_y;
            emit_reports(a_out, "audit", cfg, reports);
            return exit_code_for(reports);
        }

        if (*sharpen) {
            SharpnessRecord rec;
            try {
                rec = sharpness_probe(sh_thm, family_from_name(sh_family),
                                      Interval{sh_a, sh_b}, sh_seed, sh_iters,
                                      sh_tol);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            if (sh_out.json || !sh_out.out_path.empty()) {
                nlohmann::ordered_json j;
                j["schema"] = kJsonSchemaTag;
                j["subcommand"] = "sharpen";
                j["config"] = {{"thm", sh_thm},   {"family", sh_family},
                               {"a", sh_a},       {"b", sh_b},
                               {"seed", sh_seed}, {"iters", sh_iters}};
                j["reports"] = nlohmann::ordered_json::array();
                j["summary"] = record_to_json(rec);
                emit(sh_out, j.dump(2));
            } else {
                std::printf("best relative slack = %s\nbest function = %s\n",
                            format_double(rec.best_slack).c_str(),
                            rec.best_function.c_str());
            }
            return kExitOk;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const InvalidFamily& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
