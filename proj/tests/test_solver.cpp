#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "uode/errors.hpp"
#include "uode/printer.hpp"
#include "uode/solution.hpp"
#include "uode/systems.hpp"

using namespace uode;
using namespace uode::test;

namespace {

// Reconstructs the previous equation from one committed step; exactness of
// every transformation is what makes the final solution general.
void check_reversible(const Uode& before, const StepOutcome& out,
                      const Session& ctx) {
    REQUIRE(!out.records.empty());
    const StepRecord& rec = out.records.back();
    switch (rec.kind) {
        case StepKind::Euclid: {
            FuncId f_new = rec.introduced.at(0);
            LinDiffExpr back =
                substitute(out.next.lhs, f_new, rec.definition, ctx);
            CHECK(back == before.lhs);
            break;
        }
        case StepKind::New: {
            FuncId f_new = rec.introduced.at(0);
            FuncId pivot = *rec.pivot;
            const Substitution& sub = out.subs.back();
            REQUIRE(sub.target == pivot);
            // pivot - rhs, with the new function's definition expanded,
            // equals the old equation divided by the pivot's algebraic part
            LinDiffExpr expanded =
                substitute(sub.rhs, f_new, rec.definition, ctx);
            LinDiffExpr diff = expr_neg(expanded);
            diff.add_term(pivot, DiffOp::identity());
            RatFunc aj0 = split(before.lhs.terms.at(pivot)).algebraic_part;
            CHECK(expr_left_scale(diff, aj0, ctx) == before.lhs);
            break;
        }
        case StepKind::Exact: {
            LinDiffExpr back =
                apply_expr(DiffOp({RatFunc(), RatFunc::constant(1)}),
                           out.next.lhs, ctx);
            CHECK(back == before.lhs);
            break;
        }
        default:
            break;
    }
}

StepOutcome step_for(const Uode& w, const SolverConfig& cfg, Session& ctx,
                     int iteration) {
    if (cfg.method == Method::Euclid) return euclid_step(w, cfg, ctx);
    bool all_exact = true;
    for (const auto& [f, op] : w.lhs.terms)
        all_exact &= split(op).algebraic_part.is_zero();
    if (all_exact) return exact_step(w, cfg, ctx);
    if (cfg.method == Method::New) return *try_new_step(w, cfg, ctx);
    return hybrid_step(w, cfg, ctx, iteration);
}

}  // namespace

TEST_CASE("new step on 0 = f' + g") {
    auto d = doc("vars x; funcs f,g; eq: f' + g = 0;");
    Session& ctx = *d.session;
    auto out = try_new_step(d.equations[0], SolverConfig{}, ctx);
    REQUIRE(out.has_value());
    FuncId f = *ctx.find_function("f");
    FuncId g = *ctx.find_function("g");
    FuncId f3 = *ctx.find_function("f3");
    // substitution g = -f3'
    REQUIRE(out->subs.size() == 1);
    CHECK(out->subs[0].target == g);
    LinDiffExpr want = expr(d, "-f3'");
    CHECK(out->subs[0].rhs == want);
    // the new equation is f3 - f = 0 (the defining relation, pivot
    // substituted; equivalent to the opposite overall sign)
    LinDiffExpr eq = expr(d, "f3 - f");
    CHECK(out->next.lhs == eq);
    CHECK(out->records.back().definition == expr(d, "f"));
    (void)f;
}

TEST_CASE("new step reproduces the two-step worked example") {
    auto d = doc(
        "vars z; funcs b13,b15,b17;"
        "eq: 3*D(b13,1)*z - 6*D(b15,1)*z^2 - 2*D(b17,2)*z^2 + D(b17,1)*z"
        "    - 6*b15*z + 2*b17 = 0;");
    Session& ctx = *d.session;
    SolverConfig cfg;

    // step 1: pivot b13; the introduced function is defined by the
    // bracket of the partial integration
    CHECK(choose_pivot_new(d.equations[0]) == *ctx.find_function("b13"));
    auto s1 = try_new_step(d.equations[0], cfg, ctx);
    REQUIRE(s1.has_value());
    CHECK(s1->records.back().definition ==
          expr(d, "3*b13*z - 6*b15*z^2 - 2*D(b17,1)*z^2 + 5*b17*z"));
    CHECK(s1->subs[0].target == *ctx.find_function("b13"));
    // 0 = 2 b17' z^2 - 2 b17 z - f4' z + f4, with b15 dropping out
    CHECK(s1->next.lhs ==
          expr(d, "2*D(b17,1)*z^2 - 2*b17*z - D(f4,1)*z + f4"));

    // step 2: pivot is the function introduced in step 1
    CHECK(choose_pivot_new(s1->next) == *ctx.find_function("f4"));
    auto s2 = try_new_step(s1->next, cfg, ctx);
    REQUIRE(s2.has_value());
    CHECK(s2->records.back().definition == expr(d, "2*b17*z^2 - f4*z"));

    // one function is now purely algebraic
    CHECK(s2->next.min_order() == 0);
}

TEST_CASE("pivot choice") {
    auto d = doc(
        "vars z; funcs b13,b15,b17;"
        "eq: 3*D(b13,1)*z - 6*D(b15,1)*z^2 - 2*D(b17,2)*z^2 + D(b17,1)*z"
        "    - 6*b15*z + 2*b17 = 0;");
    CHECK(choose_pivot_new(d.equations[0]) == *d.session->find_function("b13"));

    auto d2 = doc("vars x; funcs f,g; eq: f' + g' + g = 0;");
    CHECK(choose_pivot_new(d2.equations[0]) == *d2.session->find_function("g"));
}

TEST_CASE("exact signal") {
    auto d = doc("vars x; funcs f,g; eq: f' + g' = 0;");
    Session& ctx = *d.session;
    CHECK(!try_new_step(d.equations[0], SolverConfig{}, ctx).has_value());
}

TEST_CASE("new step rejects single-function input") {
    auto d = doc("vars x; funcs f; eq: f' + f = 0;");
    Session& ctx = *d.session;
    CHECK_THROWS(try_new_step(d.equations[0], SolverConfig{}, ctx));
    CHECK_THROWS(euclid_step(d.equations[0], SolverConfig{}, ctx));
}

TEST_CASE("Euclid step") {
    SolverConfig cfg;
    cfg.method = Method::Euclid;

    SUBCASE("0 = f' + g'") {
        auto d = doc("vars x; funcs f,g; eq: f' + g' = 0;");
        Session& ctx = *d.session;
        auto out = euclid_step(d.equations[0], cfg, ctx);
        CHECK(out.subs[0].target == *ctx.find_function("f"));
        CHECK(out.subs[0].rhs == expr(d, "f3 - g"));
        CHECK(out.next.lhs == expr(d, "D(f3,1)"));
    }
    SUBCASE("0 = f'' + g'") {
        auto d = doc("vars x; funcs f,g; eq: f'' + g' = 0;");
        Session& ctx = *d.session;
        auto out = euclid_step(d.equations[0], cfg, ctx);
        CHECK(out.subs[0].target == *ctx.find_function("g"));
        CHECK(out.subs[0].rhs == expr(d, "f3 - f'"));
        CHECK(out.next.lhs == expr(d, "D(f3,1)"));
    }
    SUBCASE("inhomogeneity is never touched") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 50; ++i) {
            auto d = doc("vars x; funcs f,g,h; eq: f + g + h = 0;");
            Session& ctx = *d.session;
            Uode w = random_uode(rng, d, 3, 3, 2);
            w.lhs.inhom = RatFunc{random_poly(rng, ctx, 3, 3)};
            auto out = euclid_step(w, cfg, ctx);
            CHECK(out.next.lhs.inhom == w.lhs.inhom);
        }
    }
}

TEST_CASE("exact step") {
    SolverConfig cfg;
    SUBCASE("0 = f' + g'") {
        auto d = doc("vars x; funcs f,g; eq: f' + g' = 0;");
        Session& ctx = *d.session;
        auto out = exact_step(d.equations[0], cfg, ctx);
        CHECK(out.subs.empty());
        CHECK(out.next.lhs == expr(d, "f + g + C1"));
    }
    SUBCASE("single derivative factor") {
        auto d = doc("vars x; funcs f,g; eq: f'' + x*f' + f + g' = 0;");
        Session& ctx = *d.session;
        // f'' + (x f)' + g' has no algebraic part
        auto out = exact_step(d.equations[0], cfg, ctx);
        CHECK(out.next.lhs == expr(d, "f' + x*f + g + C1"));
    }
    SUBCASE("polynomial inhomogeneity integrates in closed form") {
        auto d = doc("vars x; funcs f,g; eq: f' + g' + 3*x = 0;");
        Session& ctx = *d.session;
        auto out = exact_step(d.equations[0], cfg, ctx);
        CHECK(out.next.lhs == expr(d, "f + g + 3/2*x^2 + C1"));
    }
    SUBCASE("paper-literal mode omits the constant") {
        auto d = doc("vars x; funcs f,g; eq: f' + g' = 0;");
        Session& ctx = *d.session;
        SolverConfig literal;
        literal.integration_constant = false;
        auto out = exact_step(d.equations[0], literal, ctx);
        CHECK(out.next.lhs == expr(d, "f + g"));
    }
}

TEST_CASE("absorbing coefficient gcds") {
    auto d = doc("vars x; funcs f,g; eq: 4*x*f + 2*x^2*f' + g' = 0;");
    Session& ctx = *d.session;
    // the f operator in factored form is (4x - 4x, 2x^2)... build directly
    LinDiffExpr e;
    FuncId f = *ctx.find_function("f");
    FuncId g = *ctx.find_function("g");
    e.add_term(f, DiffOp({rf(d, "4*x"), rf(d, "2*x^2")}));
    e.add_term(g, DiffOp({RatFunc(), RatFunc::constant(1)}));
    Uode w = Uode::make(e);

    auto [w2, subs] = absorb_gcd(w, ctx);
    REQUIRE(subs.size() == 1);
    CHECK(subs[0].target == f);
    FuncId fn = subs[0].rhs.terms.begin()->first;
    CHECK(w2.lhs.terms.at(fn) == DiffOp({rf(d, "2"), rf(d, "x")}));
    CHECK(subs[0].rhs.terms.at(fn) ==
          DiffOp::multiplication(rf(d, "1/(2*x)")));

    SUBCASE("coprime coefficients stay untouched") {
        auto [w3, subs3] = absorb_gcd(w2, ctx);
        CHECK(subs3.empty());
        CHECK(w3.lhs == w2.lhs);
    }
}

TEST_CASE("function scaling") {
    auto d = doc("vars x; funcs f,g; eq: f/x + f' + g' = 0;");
    Session& ctx = *d.session;
    FuncId f = *ctx.find_function("f");
    LinDiffExpr e;
    e.add_term(f, DiffOp({rf(d, "1/x"), rf(d, "1")}));
    Uode w = Uode::make(e);

    SUBCASE("identity scaling keeps the operator") {
        auto [w2, sub] = scale_function(w, f, RatFunc::constant(1), ctx);
        CHECK(w2.lhs.terms.begin()->second == w.lhs.terms.at(f));
    }
    SUBCASE("clearing a denominator") {
        auto [w2, sub] = scale_function(w, f, rf(d, "x"), ctx);
        CHECK(w2.lhs.terms.begin()->second == DiffOp({rf(d, "1"), rf(d, "x")}));
    }
    SUBCASE("zero scale is rejected") {
        CHECK_THROWS_AS(scale_function(w, f, RatFunc(), ctx), MathError);
    }
}

TEST_CASE("hybrid step selection") {
    SUBCASE("tie on the first equation favors the new method") {
        auto d = doc(
            "vars x; given a; funcs f,g,h;"
            "eq: D(f,1) + f + D(g,1) + D(a*h,20) = 0;");
        SolverConfig cfg;
        cfg.method = Method::HybridCompare;
        auto out = hybrid_step(d.equations[0], cfg, *d.session, 0);
        CHECK(out.records.back().kind == StepKind::New);
    }
    SUBCASE("the Euclid branch wins on the dual equation") {
        auto d = doc(
            "vars x; given a; funcs f,g,h;"
            "eq: D(f,1) + f + D(g,1) + a*D(h,20) = 0;");
        SolverConfig cfg;
        cfg.method = Method::HybridCompare;
        auto out = hybrid_step(d.equations[0], cfg, *d.session, 0);
        CHECK(out.records.back().kind == StepKind::Euclid);
    }
    SUBCASE("interleave alternates starting with the new method") {
        auto d = doc("vars x; funcs f,g,h;"
                     "eq: D(f,3) + f + D(g,3) + g' + D(h,3) + h' = 0;");
        SolverConfig cfg;
        cfg.method = Method::HybridInterleave;
        SolveResult res = solve(d.equations[0], cfg, *d.session);
        std::vector<StepKind> kinds;
        for (const auto& r : res.trace)
            if (r.kind == StepKind::New || r.kind == StepKind::Euclid)
                kinds.push_back(r.kind);
        REQUIRE(kinds.size() >= 2);
        CHECK(kinds[0] == StepKind::New);
        CHECK(kinds[1] == StepKind::Euclid);
        CHECK(verify(d.equations[0], res.explicit_solution, *d.session));
    }
}

TEST_CASE("solve: trivial equations") {
    SUBCASE("0 = f' + g") {
        auto d = doc("vars x; funcs f,g; eq: f' + g = 0;");
        Session& ctx = *d.session;
        SolveResult res = solve(d.equations[0], SolverConfig{}, ctx);
        REQUIRE(res.subs.size() == 1);
        CHECK(res.subs[0].target == *ctx.find_function("g"));
        CHECK(res.subs[0].rhs == expr(d, "-f'"));
        CHECK(res.parametric == std::vector<FuncId>{*ctx.find_function("f")});
        CHECK(!res.residual);
        CHECK(verify(d.equations[0], res.explicit_solution, ctx));
    }
    SUBCASE("single function returns the residual immediately") {
        auto d = doc("vars x; funcs f; eq: f'' + f = 0;");
        SolveResult res = solve(d.equations[0], SolverConfig{}, *d.session);
        CHECK(res.subs.empty());
        REQUIRE(res.residual.has_value());
        CHECK(res.residual->lhs == d.equations[0].lhs);
    }
    SUBCASE("inconsistent scalar equation") {
        LinDiffExpr e;
        auto d = doc("vars x; funcs f,g; eq: f + g = 0;");
        e.inhom = rf(d, "x");
        SolveResult res = solve(Uode::make(e), SolverConfig{}, *d.session);
        CHECK(res.inconsistent);
    }
}

TEST_CASE("solve: exactness is recognized on the first step") {
    auto d = doc("vars x; funcs f,g; eq: x*f' + f + x*g'' + g' = 0;");
    // both operators are pure total derivatives: (xf)' + (xg')'
    SolveResult res = solve(d.equations[0], SolverConfig{}, *d.session);
    REQUIRE(!res.trace.empty());
    CHECK(res.trace[0].kind == StepKind::Exact);
    CHECK(verify(d.equations[0], res.explicit_solution, *d.session));
}

TEST_CASE("solve: intro example with every method") {
    for (Method m : {Method::New, Method::Euclid, Method::HybridCompare,
                     Method::HybridInterleave}) {
        auto d = doc(
            "vars x; funcs f,g;"
            "eq: x^2*D(f,2) + x*D(g,2) - x^2*D(g,1) + f + 3*x = 0;");
        SolverConfig cfg;
        cfg.method = m;
        SolveResult res = solve(d.equations[0], cfg, *d.session);
        CHECK(res.parametric.size() == 1);
        CHECK(!res.residual);
        CHECK(verify(d.equations[0], res.explicit_solution, *d.session));
    }
}

TEST_CASE("solve: iteration counts for 0 = f' + a h^(5)") {
    auto make = [] {
        return doc("vars x; given a; funcs f,h; eq: D(f,1) + a*D(h,5) = 0;");
    };
    auto d1 = make();
    SolverConfig cfg_new;
    SolveResult rn = solve(d1.equations[0], cfg_new, *d1.session);
    CHECK(rn.iteration_count() == 1);
    CHECK(verify(d1.equations[0], rn.explicit_solution, *d1.session));

    auto d2 = make();
    SolverConfig cfg_e;
    cfg_e.method = Method::Euclid;
    SolveResult re = solve(d2.equations[0], cfg_e, *d2.session);
    CHECK(re.iteration_count() == 5);
    CHECK(verify(d2.equations[0], re.explicit_solution, *d2.session));
}

TEST_CASE("step invariants on random equations") {
    std::mt19937_64 rng(41);
    for (Method m : {Method::New, Method::Euclid}) {
        for (int i = 0; i < 40; ++i) {
            auto d = doc("vars x; funcs f,g,h; eq: f' + g' + h' = 0;");
            Session& ctx = *d.session;
            std::uniform_int_distribution<int> nf(2, 3);
            Uode w = random_uode(rng, d, nf(rng), 3, 2);
            SolverConfig cfg;
            cfg.method = m;
            int guard = w.order_sum() + 2;
            int iter = 0;
            while (w.func_count() >= 2 && w.min_order() >= 1) {
                REQUIRE(guard-- > 0);
                StepOutcome out = step_for(w, cfg, ctx, iter++);
                const StepRecord& rec = out.records.back();
                if (rec.kind == StepKind::New || rec.kind == StepKind::Euclid ||
                    rec.kind == StepKind::Exact)
                    CHECK(rec.order_sum_after < rec.order_sum_before);
                check_reversible(w, out, ctx);
                w = out.next;
                if (w.lhs.terms.empty()) break;
            }
        }
    }
}

TEST_CASE("avoid-denominators keeps every substitution polynomial") {
    std::mt19937_64 rng(42);
    for (int i = 0; i < 30; ++i) {
        auto d = doc("vars x; funcs f,g,h; eq: f' + g' + h' = 0;");
        std::uniform_int_distribution<int> nf(2, 3);
        Uode w = random_uode(rng, d, nf(rng), 3, 2);
        SolverConfig cfg;
        cfg.avoid_denominators = true;
        SolveResult res = solve(w, cfg, *d.session);
        for (const auto& s : res.subs) {
            CHECK(s.rhs.inhom.is_polynomial());
            for (const auto& [f, op] : s.rhs.terms)
                for (const auto& c : op.coeffs()) CHECK(c.is_polynomial());
        }
        CHECK(verify(w, res.explicit_solution, *d.session));
    }
}
