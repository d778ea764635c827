#pragma once

// Adaptive Simpson quadrature over boxes in one, two and three
// dimensions. Error control is per-subinterval Richardson acceptance
// (15-factor rule) with a depth cap; non-convergence is reported, never
// thrown, so callers can downgrade verdicts instead of aborting.

#include <cmath>
#include <cstdint>
#include <limits>
#include <functional>

#include "hadaudit/funcs.hpp"

namespace hadaudit {

struct QuadratureResult {
    double value = 0.0;
    double abs_error_estimate = 0.0;
    std::int64_t evaluations = 0;
    bool converged = true;
};

inline constexpr int kMaxSimpsonDepth = 30;
// A kink can make left+right agree with the whole-interval estimate by
// coincidence on coarse grids, so never accept before this depth.
inline constexpr int kMinSimpsonDepth = 4;

namespace detail {

struct SimpsonState {
    const std::function<double(double)>* g;
    double tol_scale;  // tol * (1 + |whole-interval estimate|)
    std::int64_t evaluations = 0;
    double error = 0.0;
    bool converged = true;
};

inline double simpson(double fa, double fm, double fb, double h) {
    return h / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt(SimpsonState& st, double a, double b, double fa,
                    double fm, double fb, double whole, double tol,
                    int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m);
    double rm = 0.5 * (m + b);
    double flm = (*st.g)(lm);
    double frm = (*st.g)(rm);
    st.evaluations += 2;
    double left = simpson(fa, flm, fm, m - a);
    double right = simpson(fm, frm, fb, b - m);
    double delta = left + right - whole;
    if (depth >= kMaxSimpsonDepth) {
        st.converged = false;
        st.error += std::fabs(delta);
        return left + right;
    }
    // Halving the tolerance per level eventually pushes it below the
    // roundoff in left+right; accept at that floor instead of recursing
    // to the depth cap.
    double noise = 16.0 * std::numeric_limits<double>::epsilon() *
                   (std::fabs(left) + std::fabs(right) + std::fabs(whole));
    if (depth >= kMinSimpsonDepth &&
        (std::fabs(delta) <= 15.0 * tol || std::fabs(delta) <= noise)) {
        st.error += std::fabs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adapt(st, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           adapt(st, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
}

}  // namespace detail

inline QuadratureResult integrate_1d(const std::function<double(double)>& g,
                                     double lo, double hi, double tol) {
    if (!(lo < hi)) throw std::invalid_argument("integrate_1d requires lo < hi");
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_1d requires tol > 0");
    detail::SimpsonState st{&g, 0.0};
    double m = 0.5 * (lo + hi);
    double fa = g(lo), fm = g(m), fb = g(hi);
    st.evaluations = 3;
    double whole = detail::simpson(fa, fm, fb, hi - lo);
    double eff_tol = tol * (1.0 + std::fabs(whole));
    QuadratureResult res;
    res.value = detail::adapt(st, lo, hi, fa, fm, fb, whole, eff_tol, 0);
    // Roundoff floor: the Richardson estimate is zero on exactly
    // integrated inputs, but the summation itself carries eps-level noise.
    res.abs_error_estimate =
        st.error + 4.0 * std::numeric_limits<double>::epsilon() *
                       (1.0 + std::fabs(res.value));
    res.evaluations = st.evaluations;
    res.converged = st.converged;
    return res;
}

struct Box2 {
    Interval x;
    Interval y;
};

struct Box3 {
    Interval x;
    Interval y;
    Interval z;
};

inline QuadratureResult integrate_2d(
    const std::function<double(double, double)>& g, const Box2& box,
    double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_2d requires tol > 0");
    double inner_tol = 0.5 * tol;
    double worst_inner_err = 0.0;
    std::int64_t inner_evals = 0;
    bool inner_converged = true;
    std::function<double(double)> outer = [&](double x) {
        QuadratureResult inner = integrate_1d(
            [&](double y) { return g(x, y); }, box.y.a, box.y.b, inner_tol);
        worst_inner_err = std::max(worst_inner_err, inner.abs_error_estimate);
        inner_evals += inner.evaluations;
        inner_converged = inner_converged && inner.converged;
        return inner.value;
    };
    QuadratureResult res = integrate_1d(outer, box.x.a, box.x.b, 0.5 * tol);
    res.abs_error_estimate += worst_inner_err * box.x.width();
    res.evaluations = inner_evals;
    res.converged = res.converged && inner_converged;
    return res;
}

inline QuadratureResult integrate_3d(
    const std::function<double(double, double, double)>& g, const Box3& box,
    double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_3d requires tol > 0");
    double level_tol = tol / 3.0;
    double worst_inner_err = 0.0;
    std::int64_t inner_evals = 0;
    bool inner_converged = true;
    std::function<double(double)> outer = [&](double x) {
        QuadratureResult inner = integrate_2d(
            [&](double y, double z) { return g(x, y, z); },
            Box2{box.y, box.z}, 2.0 * level_tol);
        worst_inner_err = std::max(worst_inner_err, inner.abs_error_estimate);
        inner_evals += inner.evaluations;
        inner_converged = inner_converged && inner.converged;
        return inner.value;
    };
    QuadratureResult res = integrate_1d(outer, box.x.a, box.x.b, level_tol);
    res.abs_error_estimate += worst_inner_err * box.x.width();
    res.evaluations = inner_evals;
    res.converged = res.converged && inner_converged;
    return res;
}

}  // namespace hadaudit
