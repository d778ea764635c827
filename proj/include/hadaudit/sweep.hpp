#pragma once

// Seeded property sweeps over random convex functions, violation
// collection with replayable reproducers, and a derivative-free
// sharpness probe that minimizes slack over a family's parameters.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadaudit/ineq.hpp"
#include "hadaudit/neldermead.hpp"
#include "hadaudit/rng.hpp"

namespace hadaudit {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SweepConfig {
    std::vector<std::string> theorems;  // tags: 1.1, 2.1, 2.2, 2.3, 2.4
    std::vector<Family> families;
    int trials = 100;
    std::uint64_t seed = 0;
    double lo = 0.1;
    double hi = 10.0;
    double tol = 1e-6;  // quadrature tolerance per evaluation

    void validate() const {
        if (trials < 1) throw ConfigError("trials must be >= 1");
        if (theorems.empty()) throw ConfigError("theorem set must be nonempty");
        if (families.empty()) throw ConfigError("family set must be nonempty");
        if (!(lo > 0.0) || !(lo < hi))
            throw ConfigError("interval bounds require 0 < lo < hi");
        if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
        for (const auto& t : theorems)
            if (t != "1.1" && t != "2.1" && t != "2.2" && t != "2.3" && t != "2.4")
                throw ConfigError("unknown theorem tag '" + t + "'");
    }
};

struct Reproducer {
    int trial = 0;
    std::string function;
    double a = 0.0;
    double b = 0.0;
    double slack = 0.0;
};

struct TheoremStats {
    int trials = 0;
    int holds = 0;
    int equality = 0;
    int violated = 0;
    int inconclusive = 0;
    int skipped = 0;  // Theorem 2.2 precondition f(m) > 0 not met
    double min_slack = std::numeric_limits<double>::infinity();
    std::optional<Reproducer> min_slack_reproducer;
    std::vector<Reproducer> violations;
};

struct SweepSummary {
    SweepConfig config;
    std::map<std::string, TheoremStats> per_theorem;
    double wall_time_seconds = 0.0;
};

namespace detail {

// Endpoints log-uniform in [lo, hi] with a minimum width of 0.05*lo.
inline Interval sample_interval(SplitMix64& rng, double lo, double hi) {
    double u = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    double v = std::exp(rng.uniform(std::log(lo), std::log(hi)));
    double a = std::min(u, v), b = std::max(u, v);
    double min_width = 0.05 * lo;
    if (b - a < min_width) {
        b = a + min_width;
        if (b > hi) {
            b = hi;
            a = b - min_width;
        }
    }
    return Interval{a, b};
}

}  // namespace detail

inline SweepSummary run_sweep(const SweepConfig& config) {
    config.validate();
    SweepSummary summary;
    summary.config = config;
    for (const auto& tag : config.theorems)
        summary.per_theorem[tag] = TheoremStats{};

    for (int trial = 0; trial < config.trials; ++trial) {
        SplitMix64 rng = substream(config.seed, "sweep-trial",
                                   static_cast<std::uint64_t>(trial));
        Family family =
            config.families[rng.next_below(config.families.size())];
        Interval interval = detail::sample_interval(rng, config.lo, config.hi);
        std::uint64_t fn_seed = rng.next_u64();
        ConvexFunction f = random_convex(fn_seed, family, interval);

        for (const auto& tag : config.theorems) {
            TheoremStats& stats = summary.per_theorem[tag];
            ++stats.trials;
            if (tag == "2.2" && f(interval.midpoint()) <= kVerdictAbsTol) {
                ++stats.skipped;
                continue;
            }
            InequalityReport rep = evaluate_theorem(tag, f, config.tol);
            switch (rep.verdict) {
                case Verdict::Holds: ++stats.holds; break;
                case Verdict::Equality: ++stats.equality; break;
                case Verdict::Violated: ++stats.violated; break;
                case Verdict::Inconclusive: ++stats.inconclusive; break;
            }
            Reproducer rec{trial, rep.function, interval.a, interval.b,
                           rep.slack};
            if (rep.slack < stats.min_slack) {
                stats.min_slack = rep.slack;
                stats.min_slack_reproducer = rec;
            }
            if (rep.verdict == Verdict::Violated)
                stats.violations.push_back(rec);
        }
    }
    return summary;
}

// Replays a reproducer through the evaluator it came from.
inline InequalityReport replay(const std::string& theorem_tag,
                               const Reproducer& rec, double tol) {
    ConvexFunction f =
        make_user_function(parse_expr(rec.function), Interval{rec.a, rec.b});
    return evaluate_theorem(theorem_tag, f, tol);
}

// ---------------------------------------------------------------------------
// Sharpness probe

struct SharpnessRecord {
    std::string theorem;
    Family family = Family::User;
    double best_slack = std::numeric_limits<double>::infinity();  // relative
    std::vector<double> best_params;
    std::string best_function;
    std::vector<double> best_so_far;
    int evaluations = 0;
};

namespace detail {

inline std::size_t family_param_count(Family family) {
    switch (family) {
        case Family::Quadratic: return 3;   // c2, c1, c0
        case Family::ExpAffine: return 3;   // alpha, beta, gamma
        case Family::Power: return 1;       // exponent
        case Family::Recip: return 1;       // numerator
        case Family::PiecewiseLinearMax: return 4;  // two affine pieces
        case Family::User: break;
    }
    throw ConfigError("sharpness probe does not support the 'user' family");
}

inline ExprPtr family_body(Family family, const std::vector<double>& p) {
    switch (family) {
        case Family::Quadratic:
            return quadratic_ast(p[0], p[1], p[2]);
        case Family::ExpAffine: {
            ExprPtr e = make_node(
                ExprKind::Exp,
                {make_node(ExprKind::Mul, {make_const(p[1]), make_var()})});
            return make_node(ExprKind::Add,
                             {make_node(ExprKind::Mul, {make_const(p[0]), e}),
                              make_const(p[2])});
        }
        case Family::Power:
            return make_node(ExprKind::Pow, {make_var()}, p[0]);
        case Family::Recip:
            return make_node(ExprKind::Div, {make_const(p[0]), make_var()});
        case Family::PiecewiseLinearMax:
            return make_node(ExprKind::Max,
                             {affine_ast(p[0], p[1]), affine_ast(p[2], p[3])});
        case Family::User: break;
    }
    throw ConfigError("sharpness probe does not support the 'user' family");
}

inline std::vector<double> family_initial_point(Family family,
                                                SplitMix64& rng) {
    switch (family) {
        case Family::Quadratic:
            return {rng.uniform(0.0, 5.0), rng.uniform(-5.0, 5.0),
                    rng.uniform(0.0, 2.0)};
        case Family::ExpAffine:
            return {rng.uniform(0.0, 3.0), rng.uniform(-2.0, 2.0),
                    rng.uniform(0.0, 3.0)};
        case Family::Power:
            return {rng.uniform(1.0, 3.0)};
        case Family::Recip:
            return {rng.uniform(0.1, 3.0)};
        case Family::PiecewiseLinearMax:
            return {rng.uniform(-3.0, 3.0), rng.uniform(0.0, 2.0),
                    rng.uniform(-3.0, 3.0), rng.uniform(0.0, 2.0)};
        case Family::User: break;
    }
    throw ConfigError("sharpness probe does not support the 'user' family");
}

}  // namespace detail

inline SharpnessRecord sharpness_probe(const std::string& theorem_tag,
                                       Family family, const Interval& domain,
                                       std::uint64_t seed, int iterations,
                                       double tol = 1e-7) {
    if (iterations < 1) throw ConfigError("iterations must be >= 1");
    if (theorem_tag != "1.1" && theorem_tag != "2.1" && theorem_tag != "2.2" &&
        theorem_tag != "2.3" && theorem_tag != "2.4")
        throw ConfigError("unknown theorem tag '" + theorem_tag + "'");
    const double inf = std::numeric_limits<double>::infinity();

    auto objective = [&](const std::vector<double>& params) -> double {
        try {
            ExprPtr body = detail::family_body(family, params);
            ConvexFunction f{body, domain, family, {}, {}};
            f.nonnegativity = check_nonnegative(f);
            f.convexity = check_convex(f);
            if (!f.nonnegativity->pass || !f.convexity->pass) return inf;
            InequalityReport rep = evaluate_theorem(theorem_tag, f, tol);
            if (rep.verdict == Verdict::Inconclusive) return inf;
            // Relative slack keeps the objective comparable across scales.
            return rep.slack / (1.0 + std::fabs(rep.chain.back().value));
        } catch (const std::exception&) {
            return inf;
        }
    };

    SplitMix64 rng = substream(seed, "sharpen/" + theorem_tag, 0);
    std::size_t dim = detail::family_param_count(family);
    std::vector<double> base = detail::family_initial_point(family, rng);
    std::vector<std::vector<double>> simplex{base};
    for (std::size_t d = 0; d < dim; ++d) {
        std::vector<double> p = base;
        p[d] += (p[d] != 0.0 ? 0.25 * std::fabs(p[d]) : 0.25);
        simplex.push_back(p);
    }

    NelderMeadResult nm = nelder_mead(objective, std::move(simplex), iterations);

    SharpnessRecord rec;
    rec.theorem = theorem_tag;
    rec.family = family;
    rec.best_slack = nm.best_value;
    rec.best_params = nm.best_point;
    rec.best_so_far = nm.best_so_far;
    rec.evaluations = nm.evaluations;
    if (!nm.best_point.empty() && std::isfinite(nm.best_value))
        rec.best_function =
            canonical_print(detail::family_body(family, nm.best_point));
    return rec;
}

}  // namespace hadaudit
