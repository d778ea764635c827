#pragma once

// Special means of two positive reals and the closed-form inequalities
// they satisfy when the section-2 results are applied to f(x) = 1/x.

#include <cmath>
#include <stdexcept>
#include <string>

#include "hadaudit/ineq.hpp"

namespace hadaudit {

class MeanUndefined : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeansBundle {
    double A;  // arithmetic
    double K;  // quadratic
    double L;  // logarithmic
    double G;  // geometric
};

inline MeansBundle compute_means(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0))
        throw MeanUndefined("means require a, b > 0");
    if (a == b)
        throw MeanUndefined("logarithmic mean undefined at a == b");
    MeansBundle m;
    m.A = 0.5 * (a + b);
    m.K = std::sqrt(0.5 * (a * a + b * b));
    m.L = (b - a) / (std::log(b) - std::log(a));
    m.G = std::sqrt(a * b);
    return m;
}

enum class Prop32Variant { Corrected, PaperLiteral };

namespace detail {

inline void require_ordered_pair(double a, double b) {
    if (!(a > 0.0) || !(a < b))
        throw MeanUndefined("requires 0 < a < b");
}

}  // namespace detail

// 4A/L <= (2/3) K^2/G^2 + 10/3, closed form, no quadrature error.
inline InequalityReport eval_prop31(double a, double b,
                                    double /*tol*/ = kDefaultQuadTol) {
    detail::require_ordered_pair(a, b);
    MeansBundle m = compute_means(a, b);
    InequalityReport rep;
    rep.theorem = "prop-3.1";
    rep.function = "1/x";
    rep.interval = Interval{a, b};
    double lhs = 4.0 * m.A / m.L;
    double rhs = 2.0 / 3.0 * (m.K * m.K) / (m.G * m.G) + 10.0 / 3.0;
    rep.chain = {{"lhs", lhs, 0.0}, {"rhs", rhs, 0.0}};
    rep.aux["A"] = m.A;
    rep.aux["K"] = m.K;
    rep.aux["L"] = m.L;
    rep.aux["G"] = m.G;
    detail::finalize_verdict(rep, true);
    return rep;
}

// 1/L <= 1/(2A) + A/(4G^2) + A(2K^2+4G^2)/(24 G^4).
// The printed form has G^2 in the last denominator; that variant is kept
// reachable but flagged, since it is not homogeneous of degree -1 and
// does not match the parent inequality at f(x) = 1/x.
inline InequalityReport eval_prop32(double a, double b,
                                    Prop32Variant variant = Prop32Variant::Corrected,
                                    double /*tol*/ = kDefaultQuadTol) {
    detail::require_ordered_pair(a, b);
    MeansBundle m = compute_means(a, b);
    InequalityReport rep;
    rep.theorem = variant == Prop32Variant::Corrected ? "prop-3.2"
                                                      : "prop-3.2-literal";
    rep.function = "1/x";
    rep.interval = Interval{a, b};
    double G2 = m.G * m.G;
    double denom = variant == Prop32Variant::Corrected ? 24.0 * G2 * G2
                                                       : 24.0 * G2;
    double lhs = 1.0 / m.L;
    double rhs = 1.0 / (2.0 * m.A) + m.A / (4.0 * G2) +
                 m.A * (2.0 * m.K * m.K + 4.0 * G2) / denom;
    rep.chain = {{"lhs", lhs, 0.0}, {"rhs", rhs, 0.0}};
    rep.aux["A"] = m.A;
    rep.aux["K"] = m.K;
    rep.aux["L"] = m.L;
    rep.aux["G"] = m.G;
    if (variant == Prop32Variant::PaperLiteral)
        rep.notes.push_back("dimensionally-inconsistent variant (24*G^2 denominator)");
    detail::finalize_verdict(rep, true);
    return rep;
}

}  // namespace hadaudit
