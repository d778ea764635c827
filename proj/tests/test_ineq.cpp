#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hadaudit/ineq.hpp"

using namespace hadaudit;

namespace {

ConvexFunction user_fn(const char* text, double a, double b) {
    return make_user_function(parse_expr(text), Interval{a, b});
}

ConvexFunction constant_fn(double c, double a, double b) {
    return make_user_function(make_const(c), Interval{a, b});
}

double chain_value(const InequalityReport& rep, const char* name) {
    for (const auto& e : rep.chain)
        if (e.name == name) return e.value;
    FAIL("no chain entry named " << name);
    return 0.0;
}

}  // namespace

TEST_CASE("aux quantities") {
    ConvexFunction id = user_fn("x", 0.0, 1.0);
    CHECK(aux_M(id) == 1.0);
    CHECK(aux_N(id) == 1.0);
    CHECK(aux_psi(id) == 1.0);

    ConvexFunction c = constant_fn(1.5, 0.0, 2.0);
    CHECK(aux_M(c) == Catch::Approx(3.0 * 1.5 * 1.5));
    CHECK(aux_N(c) == Catch::Approx(6.0 * 1.5 * 1.5));
    CHECK(aux_psi(c) == Catch::Approx(4.0 * 1.5 * 1.5));

    ConvexFunction recip = user_fn("1/x", 1.0, 2.0);
    CHECK(aux_M(recip) == Catch::Approx(7.0 / 4.0));
    CHECK(aux_N(recip) == Catch::Approx(13.0 / 4.0));
}

TEST_CASE("aux identities on random functions") {
    static const Family kFamilies[] = {Family::Quadratic, Family::ExpAffine,
                                       Family::Power, Family::Recip,
                                       Family::PiecewiseLinearMax};
    for (int i = 0; i < 100; ++i) {
        SplitMix64 rng = substream(5150, "aux-ident", i);
        double a = rng.uniform(0.2, 4.0);
        Interval dom{a, a + rng.uniform(0.4, 3.0)};
        ConvexFunction f =
            random_convex(rng.next_u64(), kFamilies[rng.next_below(5)], dom);
        double fa = f(dom.a), fb = f(dom.b);
        double psi = aux_psi(f);
        double sum = fa + fb;
        CHECK(std::fabs(psi - sum * sum) <= 1e-12 * (1.0 + psi));
        CHECK(std::fabs((aux_N(f) - psi) - 2.0 * fa * fb) <=
              1e-12 * (1.0 + std::fabs(aux_N(f))));
        CHECK(std::fabs((aux_M(f) - psi) + fa * fb) <=
              1e-12 * (1.0 + std::fabs(aux_M(f))));
    }
}

TEST_CASE("eval_hadamard") {
    InequalityReport id = eval_hadamard(user_fn("x", 0.0, 1.0));
    CHECK(id.verdict == Verdict::Equality);
    CHECK(chain_value(id, "midpoint") == Catch::Approx(0.5));
    CHECK(chain_value(id, "mean-integral") == Catch::Approx(0.5));
    CHECK(chain_value(id, "endpoint-mean") == Catch::Approx(0.5));

    InequalityReport sq = eval_hadamard(user_fn("x^2", 0.0, 1.0));
    CHECK(sq.verdict == Verdict::Holds);
    CHECK(chain_value(sq, "midpoint") == Catch::Approx(0.25));
    CHECK(chain_value(sq, "mean-integral") == Catch::Approx(1.0 / 3.0));
    CHECK(chain_value(sq, "endpoint-mean") == Catch::Approx(0.5));
    CHECK(sq.slack == Catch::Approx(1.0 / 3.0 - 0.25).margin(1e-9));

    CHECK(eval_hadamard(constant_fn(2.0, -1.0, 3.0)).verdict ==
          Verdict::Equality);
}

TEST_CASE("eval_thm21") {
    InequalityReport id = eval_thm21(user_fn("x", 0.0, 1.0));
    CHECK(id.verdict == Verdict::Equality);
    CHECK(chain_value(id, "lhs") == Catch::Approx(2.0 / 3.0).margin(1e-9));
    CHECK(chain_value(id, "rhs") == Catch::Approx(2.0 / 3.0).margin(1e-9));

    InequalityReport c = eval_thm21(constant_fn(1.5, 0.5, 3.0));
    CHECK(c.verdict == Verdict::Equality);
    CHECK(chain_value(c, "lhs") == Catch::Approx(2.0 * 1.5 * 1.5).margin(1e-8));
    CHECK(chain_value(c, "rhs") == Catch::Approx(2.0 * 1.5 * 1.5).margin(1e-8));

    InequalityReport sq = eval_thm21(user_fn("x^2", 0.0, 1.0));
    CHECK(sq.verdict == Verdict::Holds);
    CHECK(chain_value(sq, "lhs") == Catch::Approx(0.5).margin(1e-9));
    CHECK(chain_value(sq, "rhs") == Catch::Approx(8.0 / 15.0).margin(1e-9));
    CHECK(sq.slack == Catch::Approx(1.0 / 30.0).margin(1e-8));
    CHECK(sq.aux.at("M") == Catch::Approx(1.0));
}

TEST_CASE("eval_thm22") {
    InequalityReport id = eval_thm22(user_fn("x", 0.0, 1.0));
    CHECK(id.verdict == Verdict::Equality);
    CHECK(chain_value(id, "lhs") == Catch::Approx(0.5).margin(1e-9));
    CHECK(chain_value(id, "rhs") == Catch::Approx(0.5).margin(1e-9));

    InequalityReport c = eval_thm22(constant_fn(0.75, 1.0, 4.0));
    CHECK(c.verdict == Verdict::Equality);
    CHECK(chain_value(c, "lhs") == Catch::Approx(0.75).margin(1e-9));
    CHECK(chain_value(c, "rhs") == Catch::Approx(0.75).margin(1e-9));

    CHECK_THROWS_AS(eval_thm22(user_fn("max(2*x-1, 1-2*x)", 0.0, 1.0)),
                    MidpointZero);
}

TEST_CASE("eval_thm23") {
    InequalityReport id = eval_thm23(user_fn("x", 0.0, 1.0), 1e-7);
    CHECK(id.verdict == Verdict::Equality);
    CHECK(chain_value(id, "lhs") == Catch::Approx(11.0 / 18.0).margin(1e-6));
    CHECK(chain_value(id, "rhs") == Catch::Approx(11.0 / 18.0).margin(1e-6));

    InequalityReport c = eval_thm23(constant_fn(1.25, 0.5, 2.5), 1e-7);
    CHECK(c.verdict == Verdict::Equality);
    CHECK(chain_value(c, "lhs") ==
          Catch::Approx(2.0 * 1.25 * 1.25).margin(1e-6));
    CHECK(chain_value(c, "rhs") ==
          Catch::Approx(2.0 * 1.25 * 1.25).margin(1e-6));

    InequalityReport sq = eval_thm23(user_fn("x^2", 0.0, 1.0), 1e-7);
    CHECK(sq.verdict == Verdict::Holds);
    CHECK(sq.slack >= 0.0);
}

TEST_CASE("eval_thm24 as printed fails at the identity on [0,1]") {
    InequalityReport id = eval_thm24(user_fn("x", 0.0, 1.0), 1e-9);
    CHECK(id.verdict == Verdict::Violated);
    CHECK(chain_value(id, "lhs") == Catch::Approx(5.0 / 9.0).margin(1e-8));
    CHECK(chain_value(id, "rhs") == Catch::Approx(19.0 / 36.0).margin(1e-8));

    InequalityReport c1 = eval_thm24(constant_fn(1.5, 0.0, 1.0), 1e-8);
    CHECK(c1.verdict == Verdict::Equality);
    CHECK(chain_value(c1, "lhs") == Catch::Approx(4.5).margin(1e-7));
    CHECK(chain_value(c1, "rhs") == Catch::Approx(4.5).margin(1e-7));

    InequalityReport c2 = eval_thm24(constant_fn(1.5, 0.0, 2.0), 1e-8);
    CHECK(c2.verdict == Verdict::Holds);
    CHECK(chain_value(c2, "lhs") == Catch::Approx(4.5).margin(1e-7));
    CHECK(chain_value(c2, "rhs") == Catch::Approx(7.0 * 1.5 * 1.5 / 3.0).margin(1e-7));
}

TEST_CASE("audit_thm23_steps") {
    ConvexFunction id = user_fn("x", 0.0, 1.0);
    auto [s1, s2] = audit_thm23_steps(id, 0.3, 0.8, 1e-7);
    CHECK(s1.theorem == "step-2.3.1");
    CHECK(s1.verdict == Verdict::Equality);
    CHECK(s2.theorem == "step-2.3.2");
    CHECK(s2.verdict != Verdict::Violated);

    // Degenerate chord: both sides are 2 f(c)^2.
    ConvexFunction sq = user_fn("x^2", 0.0, 1.0);
    auto [d1, d2] = audit_thm23_steps(sq, 0.6, 0.6, 1e-7);
    CHECK(d1.verdict == Verdict::Equality);
    CHECK(chain_value(d1, "lhs") ==
          Catch::Approx(2.0 * 0.36 * 0.36).margin(1e-7));

    auto [p1, p2] = audit_thm23_steps(sq, 0.0, 1.0, 1e-7);
    CHECK(p1.verdict == Verdict::Holds);

    CHECK_THROWS_AS(audit_thm23_steps(sq, -1.0, 0.5, 1e-7), DomainError);
}

TEST_CASE("audit_thm24_steps localizes the flawed bounding step") {
    auto reports = audit_thm24_steps(user_fn("x", 0.0, 1.0), 1e-9);
    REQUIRE(reports.size() == 2);
    CHECK(reports[0].theorem == "step-2.4.1");
    CHECK(reports[0].verdict == Verdict::Equality);
    CHECK(chain_value(reports[0], "lhs") == Catch::Approx(5.0 / 9.0).margin(1e-8));
    CHECK(chain_value(reports[0], "intermediate") ==
          Catch::Approx(5.0 / 9.0).margin(1e-8));
    CHECK(reports[1].theorem == "step-2.4.2");
    CHECK(reports[1].verdict == Verdict::Violated);
    CHECK(chain_value(reports[1], "rhs") ==
          Catch::Approx(19.0 / 36.0).margin(1e-8));

    auto const_reports = audit_thm24_steps(constant_fn(2.0, 0.0, 1.0), 1e-8);
    CHECK(const_reports[0].verdict == Verdict::Equality);
    CHECK(const_reports[1].verdict == Verdict::Equality);

    auto sq_reports = audit_thm24_steps(user_fn("x^2", 1.0, 2.0), 1e-8);
    CHECK(sq_reports[0].verdict == Verdict::Holds);
}

TEST_CASE("chain coherence of eval_hadamard on random convex functions") {
    static const Family kFamilies[] = {Family::Quadratic, Family::ExpAffine,
                                       Family::Power, Family::Recip,
                                       Family::PiecewiseLinearMax};
    for (int i = 0; i < 50; ++i) {
        SplitMix64 rng = substream(777, "chain-coherence", i);
        double a = rng.uniform(0.2, 4.0);
        Interval dom{a, a + rng.uniform(0.4, 3.0)};
        ConvexFunction f =
            random_convex(rng.next_u64(), kFamilies[rng.next_below(5)], dom);
        InequalityReport rep = eval_hadamard(f, 1e-9);
        REQUIRE(rep.chain.size() == 3);
        double band = rep.tolerance_used + rep.chain[1].abs_error;
        CHECK(rep.chain[1].value >= rep.chain[0].value - band);
        CHECK(rep.chain[2].value >= rep.chain[1].value - band);
        CHECK(rep.verdict != Verdict::Violated);
    }
}

TEST_CASE("Theorem 2.1 verdicts are invariant under positive scaling") {
    static const Family kFamilies[] = {Family::Quadratic, Family::ExpAffine,
                                       Family::Power, Family::Recip,
                                       Family::PiecewiseLinearMax};
    for (int i = 0; i < 50; ++i) {
        SplitMix64 rng = substream(31337, "scale-cov", i);
        double a = rng.uniform(0.3, 3.0);
        Interval dom{a, a + rng.uniform(0.5, 2.5)};
        ConvexFunction f =
            random_convex(rng.next_u64(), kFamilies[rng.next_below(5)], dom);
        InequalityReport base = eval_thm21(f, 1e-9);
        for (double c : {0.5, 3.0}) {
            ConvexFunction scaled = make_user_function(
                make_node(ExprKind::Mul, {make_const(c), f.body}), dom);
            InequalityReport rep = eval_thm21(scaled, 1e-9);
            INFO("f " << f.spec() << " c " << c);
            CHECK(rep.chain[0].value ==
                  Catch::Approx(c * c * base.chain[0].value).epsilon(1e-6));
            CHECK(rep.chain[1].value ==
                  Catch::Approx(c * c * base.chain[1].value).epsilon(1e-6));
            if (std::fabs(base.slack) > 1e-8 * (1.0 + base.chain[1].value)) {
                CHECK((rep.slack >= 0.0) == (base.slack >= 0.0));
                CHECK(rep.verdict == base.verdict);
            }
        }
    }
}

TEST_CASE("sound theorems never report Violated on certified inputs") {
    static const Family kFamilies[] = {Family::Quadratic, Family::ExpAffine,
                                       Family::Power, Family::Recip,
                                       Family::PiecewiseLinearMax};
    for (int i = 0; i < 40; ++i) {
        SplitMix64 rng = substream(4242, "soundness-small", i);
        double a = rng.uniform(0.2, 5.0);
        Interval dom{a, a + rng.uniform(0.3, 3.0)};
        ConvexFunction f =
            random_convex(rng.next_u64(), kFamilies[rng.next_below(5)], dom);
        REQUIRE(f.convexity->pass);
        REQUIRE(f.nonnegativity->pass);
        INFO("f " << f.spec() << " on [" << dom.a << ", " << dom.b << "]");
        CHECK(eval_hadamard(f, 1e-8).verdict != Verdict::Violated);
        CHECK(eval_thm21(f, 1e-8).verdict != Verdict::Violated);
        if (f(dom.midpoint()) > kVerdictAbsTol)
            CHECK(eval_thm22(f, 1e-8).verdict != Verdict::Violated);
        CHECK(eval_thm23(f, 1e-6).verdict != Verdict::Violated);
    }
}

TEST_CASE("evaluate_theorem dispatch") {
    ConvexFunction id = user_fn("x", 0.0, 1.0);
    CHECK(evaluate_theorem("1.1", id).theorem == "hadamard-1.1");
    CHECK(evaluate_theorem("2.1", id).theorem == "thm-2.1");
    CHECK_THROWS_AS(evaluate_theorem("9.9", id), std::invalid_argument);
}
