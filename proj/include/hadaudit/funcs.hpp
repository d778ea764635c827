#pragma once

// Domain-restricted functions under test: nonnegativity and convexity
// certification, chord restrictions, and seeded generation of convex
// nonnegative functions by family.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "hadaudit/expr.hpp"
#include "hadaudit/rng.hpp"

namespace hadaudit {

class InvalidFamily : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DomainIncompatible : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Interval {
    double a;
    double b;

    Interval(double lo, double hi) : a(lo), b(hi) {
        if (!(a < b) || !std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("interval requires finite a < b");
    }

    double width() const { return b - a; }
    double midpoint() const { return 0.5 * (a + b); }
    bool contains(double x) const { return x >= a && x <= b; }
};

enum class Family { Quadratic, ExpAffine, Power, Recip, PiecewiseLinearMax, User };

inline std::string family_name(Family f) {
    switch (f) {
        case Family::Quadratic: return "quadratic";
        case Family::ExpAffine: return "exp-affine";
        case Family::Power: return "power";
        case Family::Recip: return "recip";
        case Family::PiecewiseLinearMax: return "piecewise-linear-max";
        case Family::User: return "user";
    }
    return "user";
}

inline Family family_from_name(std::string_view name) {
    if (name == "quadratic") return Family::Quadratic;
    if (name == "exp-affine") return Family::ExpAffine;
    if (name == "power") return Family::Power;
    if (name == "recip") return Family::Recip;
    if (name == "piecewise-linear-max") return Family::PiecewiseLinearMax;
    if (name == "user") return Family::User;
    throw InvalidFamily("unknown family '" + std::string(name) + "'");
}

enum class CertMethod { Analytic, Sampled };

struct Certificate {
    bool pass = false;
    CertMethod method = CertMethod::Sampled;
    // Violating point (nonnegativity) or pair (convexity); re-checkable
    // by direct evaluation.
    std::optional<std::pair<double, double>> witness;
    int grid = 0;
    double tolerance = 0.0;
};

struct ConvexFunction {
    ExprPtr body;
    Interval domain;
    Family family = Family::User;
    std::optional<Certificate> convexity;
    std::optional<Certificate> nonnegativity;

    double operator()(double x) const { return eval_expr(body, x); }
    std::string spec() const { return canonical_print(body); }
};

inline constexpr int kDefaultCertGrid = 257;
inline constexpr double kDefaultCertTol = 1e-9;

inline Certificate check_nonnegative(const ExprPtr& body,
                                     const Interval& domain, int grid) {
    if (grid < 2) throw std::invalid_argument("grid must be >= 2");
    Certificate cert;
    cert.method = CertMethod::Sampled;
    cert.grid = grid;
    double min_val = std::numeric_limits<double>::infinity();
    double min_x = domain.a;
    double max_abs = 0.0;
    std::vector<double> xs(grid), vs(grid);
    for (int i = 0; i < grid; ++i) {
        double x = domain.a + domain.width() * i / (grid - 1);
        double v = eval_expr(body, x);
        xs[i] = x;
        vs[i] = v;
        max_abs = std::max(max_abs, std::fabs(v));
        if (v < min_val) {
            min_val = v;
            min_x = x;
        }
    }
    cert.tolerance = 1e-12 * (1.0 + max_abs);
    cert.pass = min_val >= -cert.tolerance;
    if (!cert.pass) cert.witness = {min_x, min_x};
    return cert;
}

inline Certificate check_nonnegative(const ConvexFunction& f,
                                     int grid = kDefaultCertGrid) {
    return check_nonnegative(f.body, f.domain, grid);
}

// Midpoint-convexity falsifier over all grid pairs; works on any
// callable (chord restrictions are plain callables, not ASTs).
inline Certificate check_convex_sampled(const std::function<double(double)>& g,
                                        const Interval& domain, int grid,
                                        double tol) {
    if (grid < 3) throw std::invalid_argument("grid must be >= 3");
    Certificate cert;
    cert.method = CertMethod::Sampled;
    cert.grid = grid;
    cert.tolerance = tol;
    cert.pass = true;
    std::vector<double> xs(grid), vs(grid);
    for (int i = 0; i < grid; ++i) {
        xs[i] = domain.a + domain.width() * i / (grid - 1);
        vs[i] = g(xs[i]);
    }
    for (int i = 0; i < grid && cert.pass; ++i) {
        for (int j = i + 1; j < grid; ++j) {
            double mid = g(0.5 * (xs[i] + xs[j]));
            if (mid > 0.5 * (vs[i] + vs[j]) + tol) {
                cert.pass = false;
                cert.witness = {xs[i], xs[j]};
                break;
            }
        }
    }
    return cert;
}

// Falsifier: pass is grid evidence, fail carries a certified witness.
// Analytic path checks the second derivative sign when the body is
// differentiable; otherwise (or when the derivative is undefined at a
// grid point) falls back to midpoint convexity over all grid pairs.
inline Certificate check_convex(const ExprPtr& body, const Interval& domain,
                                int grid = kDefaultCertGrid,
                                double tol = kDefaultCertTol) {
    if (grid < 3) throw std::invalid_argument("grid must be >= 3");
    if (is_differentiable(body)) {
        try {
            ExprPtr d2 = differentiate(body, 2);
            Certificate cert;
            cert.method = CertMethod::Analytic;
            cert.grid = grid;
            cert.tolerance = tol;
            cert.pass = true;
            for (int i = 0; i < grid; ++i) {
                double x = domain.a + domain.width() * i / (grid - 1);
                if (eval_expr(d2, x) < -tol) {
                    cert.pass = false;
                    cert.witness = {x, x};
                    break;
                }
            }
            if (cert.pass) return cert;
            // Analytic failure is decisive for smooth bodies, but the
            // report-worthy witness is a midpoint-convexity pair; fall
            // through to produce one.
        } catch (const DomainError&) {
            // Second derivative undefined somewhere on the grid
            // (e.g. x^1.5 at 0); use the sampled path.
        }
    }
    return check_convex_sampled(
        [&](double x) { return eval_expr(body, x); }, domain, grid, tol);
}

inline Certificate check_convex(const ConvexFunction& f,
                                int grid = kDefaultCertGrid,
                                double tol = kDefaultCertTol) {
    return check_convex(f.body, f.domain, grid, tol);
}

inline ConvexFunction make_user_function(const ExprPtr& body,
                                         const Interval& domain) {
    ConvexFunction f{body, domain, Family::User, {}, {}};
    f.nonnegativity = check_nonnegative(f);
    f.convexity = check_convex(f);
    return f;
}

// g(t) = f(t*x + (1-t)*y) on [0,1].
inline std::function<double(double)> chord_restriction(const ConvexFunction& f,
                                                       double x, double y) {
    if (!f.domain.contains(x) || !f.domain.contains(y))
        throw DomainError("chord endpoints outside function domain");
    ExprPtr body = f.body;
    return [body, x, y](double t) {
        return eval_expr(body, t * x + (1.0 - t) * y);
    };
}

namespace detail {

inline ExprPtr affine_ast(double slope, double intercept) {
    return make_node(ExprKind::Add,
                     {make_node(ExprKind::Mul, {make_const(slope), make_var()}),
                      make_const(intercept)});
}

inline ExprPtr quadratic_ast(double c2, double c1, double c0) {
    ExprPtr sq = make_node(ExprKind::Mul,
                           {make_const(c2), make_node(ExprKind::Pow, {make_var()}, 2.0)});
    ExprPtr lin = make_node(ExprKind::Mul, {make_const(c1), make_var()});
    return make_node(ExprKind::Add,
                     {make_node(ExprKind::Add, {sq, lin}), make_const(c0)});
}

inline double quadratic_min(double c2, double c1, double c0,
                            const Interval& dom) {
    auto val = [&](double x) { return (c2 * x + c1) * x + c0; };
    double m = std::min(val(dom.a), val(dom.b));
    if (c2 > 0.0) {
        double vx = -c1 / (2.0 * c2);
        if (dom.contains(vx)) m = std::min(m, val(vx));
    }
    return m;
}

}  // namespace detail

inline ConvexFunction random_convex(std::uint64_t seed, Family family,
                                    const Interval& domain) {
    SplitMix64 rng = substream(seed, "random-convex/" + family_name(family), 0);
    ExprPtr body;
    switch (family) {
        case Family::Quadratic: {
            double c2 = rng.uniform(0.0, 5.0);
            double c1 = rng.uniform(-5.0, 5.0);
            double c0 = rng.uniform(-2.0, 2.0);
            double m = detail::quadratic_min(c2, c1, c0, domain);
            if (m < 0.0) c0 -= m;
            body = detail::quadratic_ast(c2, c1, c0);
            break;
        }
        case Family::ExpAffine: {
            double alpha = rng.uniform(0.0, 3.0);
            double beta = rng.uniform(-2.0, 2.0);
            double gamma = rng.uniform(0.0, 3.0);
            ExprPtr e = make_node(
                ExprKind::Exp,
                {make_node(ExprKind::Mul, {make_const(beta), make_var()})});
            body = make_node(ExprKind::Add,
                             {make_node(ExprKind::Mul, {make_const(alpha), e}),
                              make_const(gamma)});
            break;
        }
        case Family::Power: {
            if (domain.a < 0.0)
                throw DomainIncompatible("power family requires domain.a >= 0");
            static constexpr double kExponents[] = {1.0, 1.5, 2.0, 3.0};
            double p = kExponents[rng.next_below(4)];
            body = p == 1.0 ? make_var()
                            : make_node(ExprKind::Pow, {make_var()}, p);
            break;
        }
        case Family::Recip: {
            if (domain.a <= 0.0)
                throw DomainIncompatible("recip family requires domain.a > 0");
            double lambda = rng.uniform(0.0, 3.0);
            if (lambda == 0.0) lambda = 3.0;  // (0, 3]
            body = make_node(ExprKind::Div, {make_const(lambda), make_var()});
            break;
        }
        case Family::PiecewiseLinearMax: {
            int pieces = 2 + static_cast<int>(rng.next_below(4));
            std::vector<double> slopes(pieces), intercepts(pieces);
            for (int i = 0; i < pieces; ++i) {
                slopes[i] = rng.uniform(-3.0, 3.0);
                intercepts[i] = rng.uniform(-2.0, 2.0);
            }
            // Exact minimum of the upper envelope: endpoints plus every
            // pairwise intersection inside the domain.
            auto envelope = [&](double x) {
                double v = slopes[0] * x + intercepts[0];
                for (int i = 1; i < pieces; ++i)
                    v = std::max(v, slopes[i] * x + intercepts[i]);
                return v;
            };
            double m = std::min(envelope(domain.a), envelope(domain.b));
            for (int i = 0; i < pieces; ++i)
                for (int j = i + 1; j < pieces; ++j) {
                    if (slopes[i] == slopes[j]) continue;
                    double x = (intercepts[j] - intercepts[i]) /
                               (slopes[i] - slopes[j]);
                    if (domain.contains(x)) m = std::min(m, envelope(x));
                }
            if (m < 0.0)
                for (double& t : intercepts) t -= m;
            std::vector<ExprPtr> args;
            for (int i = 0; i < pieces; ++i)
                args.push_back(detail::affine_ast(slopes[i], intercepts[i]));
            body = make_node(ExprKind::Max, std::move(args));
            break;
        }
        case Family::User:
            throw InvalidFamily("random_convex does not generate 'user' functions");
    }
    ConvexFunction f{body, domain, family, {}, {}};
    f.nonnegativity = check_nonnegative(f);
    f.convexity = check_convex(f);
    return f;
}

}  // namespace hadaudit
