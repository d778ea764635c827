#pragma once

// Evaluates both sides of each inequality under audit, computes the
// auxiliary endpoint quantities M, N, psi, and audits the intermediate
// proof steps. Verdicts account for quadrature error estimates: a chain
// is only Violated when the slack is negative beyond tolerance plus the
// combined error budget.

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hadaudit/funcs.hpp"
#include "hadaudit/quad.hpp"

namespace hadaudit {

class MidpointZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Verdict { Holds, Equality, Violated, Inconclusive };

inline std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Holds: return "Holds";
        case Verdict::Equality: return "Equality";
        case Verdict::Violated: return "Violated";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

struct ChainEntry {
    std::string name;
    double value = 0.0;
    double abs_error = 0.0;
};

struct InequalityReport {
    std::string theorem;
    std::string function;
    Interval interval{0.0, 1.0};
    std::vector<ChainEntry> chain;
    double slack = 0.0;
    std::map<std::string, double> aux;
    Verdict verdict = Verdict::Inconclusive;
    double tolerance_used = 0.0;
    std::vector<std::string> notes;
};

inline constexpr double kVerdictAbsTol = 1e-9;
inline constexpr double kVerdictRelTol = 1e-8;
inline constexpr double kDefaultQuadTol = 1e-9;

namespace detail {

inline void finalize_verdict(InequalityReport& rep, bool converged) {
    double max_abs = 0.0;
    double combined_err = 0.0;
    for (const auto& e : rep.chain) {
        max_abs = std::max(max_abs, std::fabs(e.value));
        combined_err += e.abs_error;
    }
    rep.tolerance_used = std::max(kVerdictAbsTol, kVerdictRelTol * max_abs);
    double slack = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < rep.chain.size(); ++i)
        slack = std::min(slack, rep.chain[i + 1].value - rep.chain[i].value);
    rep.slack = slack;
    double band = rep.tolerance_used + combined_err;
    if (!converged)
        rep.verdict = Verdict::Inconclusive;
    else if (slack < -band)
        rep.verdict = Verdict::Violated;
    else if (std::fabs(slack) <= band)
        rep.verdict = Verdict::Equality;
    else
        rep.verdict = Verdict::Holds;
}

inline void note_certificates(InequalityReport& rep, const ConvexFunction& f) {
    if (f.convexity && f.convexity->method == CertMethod::Sampled)
        rep.notes.push_back("convexity certificate is sampled (non-rigorous)");
    if (f.nonnegativity && f.nonnegativity->method == CertMethod::Sampled)
        rep.notes.push_back("nonnegativity certificate is sampled (non-rigorous)");
}

}  // namespace detail

inline double aux_M(const ConvexFunction& f) {
    double fa = f(f.domain.a), fb = f(f.domain.b);
    return fa * fa + fa * fb + fb * fb;
}

inline double aux_N(const ConvexFunction& f) {
    double fa = f(f.domain.a), fb = f(f.domain.b);
    return fa * fa + 4.0 * fa * fb + fb * fb;
}

inline double aux_psi(const ConvexFunction& f) {
    double fa = f(f.domain.a), fb = f(f.domain.b);
    return fa * fa + 2.0 * fa * fb + fb * fb;
}

// f((a+b)/2) <= (1/(b-a)) int f <= (f(a)+f(b))/2
inline InequalityReport eval_hadamard(const ConvexFunction& f,
                                      double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b;
    InequalityReport rep;
    rep.theorem = "hadamard-1.1";
    rep.function = f.spec();
    rep.interval = f.domain;
    double fm = f(f.domain.midpoint());
    QuadratureResult I = integrate_1d([&](double x) { return f(x); }, a, b, tol);
    rep.chain = {{"midpoint", fm, 0.0},
                 {"mean-integral", I.value / (b - a), I.abs_error_estimate / (b - a)},
                 {"endpoint-mean", 0.5 * (f(a) + f(b)), 0.0}};
    rep.aux["f_mid"] = fm;
    detail::note_certificates(rep, f);
    detail::finalize_verdict(rep, I.converged);
    return rep;
}

inline InequalityReport eval_thm21(const ConvexFunction& f,
                                   double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    const double fa = f(a), fb = f(b);
    InequalityReport rep;
    rep.theorem = "thm-2.1";
    rep.function = f.spec();
    rep.interval = f.domain;
    QuadratureResult left =
        integrate_1d([&](double x) { return (b - x) * f(x); }, a, b, tol);
    QuadratureResult right =
        integrate_1d([&](double x) { return (x - a) * f(x); }, a, b, tol);
    QuadratureResult sq =
        integrate_1d([&](double x) { double v = f(x); return v * v; }, a, b, tol);
    double M = aux_M(f);
    double lhs = 2.0 * fa / (w * w) * left.value + 2.0 * fb / (w * w) * right.value;
    double lhs_err = 2.0 * std::fabs(fa) / (w * w) * left.abs_error_estimate +
                     2.0 * std::fabs(fb) / (w * w) * right.abs_error_estimate;
    double rhs = sq.value / w + M / 3.0;
    rep.chain = {{"lhs", lhs, lhs_err}, {"rhs", rhs, sq.abs_error_estimate / w}};
    rep.aux["M"] = M;
    detail::note_certificates(rep, f);
    detail::finalize_verdict(
        rep, left.converged && right.converged && sq.converged);
    return rep;
}

inline InequalityReport eval_thm22(const ConvexFunction& f,
                                   double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    double fm = f(f.domain.midpoint());
    if (fm <= 0.0)
        throw MidpointZero("f((a+b)/2) must be positive for this inequality");
    InequalityReport rep;
    rep.theorem = "thm-2.2";
    rep.function = f.spec();
    rep.interval = f.domain;
    QuadratureResult I = integrate_1d([&](double x) { return f(x); }, a, b, tol);
    QuadratureResult sq =
        integrate_1d([&](double x) { double v = f(x); return v * v; }, a, b, tol);
    double N = aux_N(f);
    double lhs = I.value / w;
    double rhs = 0.5 * fm + sq.value / (4.0 * fm * w) + N / (24.0 * fm);
    rep.chain = {{"lhs", lhs, I.abs_error_estimate / w},
                 {"rhs", rhs, sq.abs_error_estimate / (4.0 * fm * w)}};
    rep.aux["N"] = N;
    rep.aux["f_mid"] = fm;
    detail::note_certificates(rep, f);
    detail::finalize_verdict(rep, I.converged && sq.converged);
    return rep;
}

inline InequalityReport eval_thm23(const ConvexFunction& f,
                                   double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    InequalityReport rep;
    rep.theorem = "thm-2.3";
    rep.function = f.spec();
    rep.interval = f.domain;
    Box3 box{f.domain, f.domain, Interval{0.0, 1.0}};
    QuadratureResult cross = integrate_3d(
        [&](double x, double y, double t) {
            return f(t * x + (1.0 - t) * y) * (t * f(x) + (1.0 - t) * f(y));
        },
        box, tol);
    QuadratureResult sq3 = integrate_3d(
        [&](double x, double y, double t) {
            double v = f(t * x + (1.0 - t) * y);
            return v * v;
        },
        box, tol);
    QuadratureResult sq1 =
        integrate_1d([&](double x) { double v = f(x); return v * v; }, a, b, tol);
    double psi = aux_psi(f);
    double lhs = 2.0 / (w * w) * cross.value;
    double rhs = sq3.value / (w * w) + 2.0 / (3.0 * w) * sq1.value + psi / 12.0;
    rep.chain = {{"lhs", lhs, 2.0 / (w * w) * cross.abs_error_estimate},
                 {"rhs", rhs,
                  sq3.abs_error_estimate / (w * w) +
                      2.0 / (3.0 * w) * sq1.abs_error_estimate}};
    rep.aux["psi"] = psi;
    detail::note_certificates(rep, f);
    detail::finalize_verdict(
        rep, cross.converged && sq3.converged && sq1.converged);
    return rep;
}

// Implemented exactly as printed; reports Violated when the numbers say so.
inline InequalityReport eval_thm24(const ConvexFunction& f,
                                   double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    const double m = f.domain.midpoint();
    const double fm = f(m);
    InequalityReport rep;
    rep.theorem = "thm-2.4";
    rep.function = f.spec();
    rep.interval = f.domain;
    Box2 box{f.domain, Interval{0.0, 1.0}};
    QuadratureResult cross = integrate_2d(
        [&](double x, double t) {
            return f(t * x + (1.0 - t) * m) * (t * f(x) + (1.0 - t) * fm);
        },
        box, tol);
    QuadratureResult sq2 = integrate_2d(
        [&](double x, double t) {
            double v = f(t * x + (1.0 - t) * m);
            return v * v;
        },
        box, tol);
    double psi = aux_psi(f);
    double lhs = 2.0 / w * cross.value;
    double rhs = sq2.value / w + psi / 12.0 * (w + 2.0);
    rep.chain = {{"lhs", lhs, 2.0 / w * cross.abs_error_estimate},
                 {"rhs", rhs, sq2.abs_error_estimate / w}};
    rep.aux["psi"] = psi;
    rep.aux["f_mid"] = fm;
    detail::note_certificates(rep, f);
    detail::finalize_verdict(rep, cross.converged && sq2.converged);
    return rep;
}

// Pointwise step (2.3.1) at (x, y) and the (x,y)-integrated step (2.3.2)
// including the Hadamard bound on the product integral.
inline std::pair<InequalityReport, InequalityReport> audit_thm23_steps(
    const ConvexFunction& f, double x, double y, double tol = kDefaultQuadTol) {
    if (!f.domain.contains(x) || !f.domain.contains(y))
        throw DomainError("audit points outside function domain");
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    const double fx = f(x), fy = f(y);

    InequalityReport step1;
    step1.theorem = "step-2.3.1";
    step1.function = f.spec();
    step1.interval = f.domain;
    QuadratureResult cross1 = integrate_1d(
        [&](double t) {
            return f(t * x + (1.0 - t) * y) * (t * fx + (1.0 - t) * fy);
        },
        0.0, 1.0, tol);
    QuadratureResult sq1 = integrate_1d(
        [&](double t) {
            double v = f(t * x + (1.0 - t) * y);
            return v * v;
        },
        0.0, 1.0, tol);
    step1.chain = {
        {"lhs", 2.0 * cross1.value, 2.0 * cross1.abs_error_estimate},
        {"rhs", sq1.value + (fx * fx + fx * fy + fy * fy) / 3.0,
         sq1.abs_error_estimate}};
    step1.aux["x"] = x;
    step1.aux["y"] = y;
    detail::finalize_verdict(step1, cross1.converged && sq1.converged);

    InequalityReport step2;
    step2.theorem = "step-2.3.2";
    step2.function = f.spec();
    step2.interval = f.domain;
    Box3 box{f.domain, f.domain, Interval{0.0, 1.0}};
    QuadratureResult cross3 = integrate_3d(
        [&](double u, double v, double t) {
            return f(t * u + (1.0 - t) * v) * (t * f(u) + (1.0 - t) * f(v));
        },
        box, tol);
    QuadratureResult sq3 = integrate_3d(
        [&](double u, double v, double t) {
            double s = f(t * u + (1.0 - t) * v);
            return s * s;
        },
        box, tol);
    QuadratureResult fsq =
        integrate_1d([&](double u) { double s = f(u); return s * s; }, a, b, tol);
    QuadratureResult fint = integrate_1d([&](double u) { return f(u); }, a, b, tol);
    double psi = aux_psi(f);
    double exact_mid = sq3.value + 2.0 * w / 3.0 * fsq.value +
                       fint.value * fint.value / 3.0;
    double hadamard_bound = sq3.value + 2.0 * w / 3.0 * fsq.value +
                            psi / 12.0 * w * w;
    step2.chain = {
        {"lhs", 2.0 * cross3.value, 2.0 * cross3.abs_error_estimate},
        {"product-exact", exact_mid,
         sq3.abs_error_estimate + 2.0 * w / 3.0 * fsq.abs_error_estimate +
             2.0 * std::fabs(fint.value) / 3.0 * fint.abs_error_estimate},
        {"hadamard-bound", hadamard_bound,
         sq3.abs_error_estimate + 2.0 * w / 3.0 * fsq.abs_error_estimate}};
    step2.aux["psi"] = psi;
    detail::finalize_verdict(step2, cross3.converged && sq3.converged &&
                                        fsq.converged && fint.converged);
    return {step1, step2};
}

// Step (2.4.1) integrated over x, then the final bounding step (2.4.2).
// The pair localizes which step fails when eval_thm24 reports Violated.
inline std::vector<InequalityReport> audit_thm24_steps(
    const ConvexFunction& f, double tol = kDefaultQuadTol) {
    const double a = f.domain.a, b = f.domain.b, w = b - a;
    const double m = f.domain.midpoint();
    const double fm = f(m);
    Box2 box{f.domain, Interval{0.0, 1.0}};
    QuadratureResult cross = integrate_2d(
        [&](double x, double t) {
            return f(t * x + (1.0 - t) * m) * (t * f(x) + (1.0 - t) * fm);
        },
        box, tol);
    QuadratureResult sq2 = integrate_2d(
        [&](double x, double t) {
            double v = f(t * x + (1.0 - t) * m);
            return v * v;
        },
        box, tol);
    QuadratureResult fsq =
        integrate_1d([&](double x) { double v = f(x); return v * v; }, a, b, tol);
    QuadratureResult fint = integrate_1d([&](double x) { return f(x); }, a, b, tol);
    double psi = aux_psi(f);

    double lhs = 2.0 / w * cross.value;
    double intermediate =
        (sq2.value + fsq.value / 3.0 + fm * fint.value / 3.0 +
         w / 3.0 * fm * fm) / w;
    double intermediate_err =
        (sq2.abs_error_estimate + fsq.abs_error_estimate / 3.0 +
         std::fabs(fm) * fint.abs_error_estimate / 3.0) / w;
    double final_rhs = sq2.value / w + psi / 12.0 * (w + 2.0);

    InequalityReport step1;
    step1.theorem = "step-2.4.1";
    step1.function = f.spec();
    step1.interval = f.domain;
    step1.chain = {{"lhs", lhs, 2.0 / w * cross.abs_error_estimate},
                   {"intermediate", intermediate, intermediate_err}};
    step1.aux["psi"] = psi;
    step1.aux["f_mid"] = fm;
    detail::finalize_verdict(step1, cross.converged && sq2.converged &&
                                        fsq.converged && fint.converged);

    InequalityReport step2;
    step2.theorem = "step-2.4.2";
    step2.function = f.spec();
    step2.interval = f.domain;
    step2.chain = {{"intermediate", intermediate, intermediate_err},
                   {"rhs", final_rhs, sq2.abs_error_estimate / w}};
    step2.aux["psi"] = psi;
    detail::finalize_verdict(step2, cross.converged && sq2.converged &&
                                        fsq.converged && fint.converged);
    return {step1, step2};
}

inline InequalityReport evaluate_theorem(const std::string& tag,
                                         const ConvexFunction& f,
                                         double tol = kDefaultQuadTol) {
    if (tag == "1.1" || tag == "hadamard-1.1") return eval_hadamard(f, tol);
    if (tag == "2.1" || tag == "thm-2.1") return eval_thm21(f, tol);
    if (tag == "2.2" || tag == "thm-2.2") return eval_thm22(f, tol);
    if (tag == "2.3" || tag == "thm-2.3") return eval_thm23(f, tol);
    if (tag == "2.4" || tag == "thm-2.4") return eval_thm24(f, tol);
    throw std::invalid_argument("unknown theorem tag '" + tag + "'");
}

}  // namespace hadaudit
