#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "uode/errors.hpp"
#include "uode/printer.hpp"
#include "uode/solution.hpp"

using namespace uode;
using namespace uode::test;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

bool expr_equal(const LinDiffExpr& a, const LinDiffExpr& b) {
    return expr_add(a, expr_neg(b)).is_zero();
}

}  // namespace

TEST_CASE("document parsing") {
    auto d = doc(
        "vars x; funcs f,g,h;"
        "eq: x^3*D(f,1) + (x-1)*D(g,1) + D(h,5) = 0;");
    REQUIRE(d.equations.size() == 1);
    Uode w = d.equations[0];
    CHECK(w.func_count() == 3);
    CHECK(w.order_of(*d.session->find_function("f")) == 1);
    CHECK(w.order_of(*d.session->find_function("h")) == 5);
    CHECK(expr_equal(w.lhs, expr(d, "x^3*f' + (x-1)*g' + D(h,5)")));
}

TEST_CASE("given functions as coefficients") {
    auto d = doc(
        "vars x; given a; funcs f,g,h;"
        "eq: D(f,1) + f + D(g,1) + a*D(h,20) = 0;");
    Uode w = d.equations[0];
    CHECK(w.order_of(*d.session->find_function("h")) == 20);
    DiffOp ah = w.lhs.terms.at(*d.session->find_function("h"));
    CHECK(ah.leading() == rf(d, "a"));
}

TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_AS(parse_document("vars x; funcs f,g;"), ParseError);
    try {
        parse_document("vars x;\nfuncs f;\neq: f + q = 0;");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("undeclared") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_document("vars x; funcs f; eq: x' + f = 0;"),
                    ParseError);
    CHECK_THROWS_AS(parse_document("vars x; funcs f,g; eq: f*g = 0;"),
                    ParseError);
    CHECK_THROWS_AS(parse_document("vars x; funcs f; eq: f + = 0;"),
                    ParseError);
    CHECK_THROWS_AS(parse_document("vars x; vars y; funcs f; eq: f = 0;"),
                    ParseError);
}

TEST_CASE("documents round-trip through the printer") {
    namespace fs = std::filesystem;
    for (const auto& entry : fs::directory_iterator(UODE_TEST_DATA)) {
        if (entry.path().extension() != ".ode") continue;
        CAPTURE(entry.path().filename().string());
        OdeDocument d1 = parse_document(slurp(entry.path()));
        std::string printed = print_document(d1);
        OdeDocument d2 = parse_document(printed);
        REQUIRE(d1.equations.size() == d2.equations.size());
        for (std::size_t i = 0; i < d1.equations.size(); ++i) {
            // same session layout by construction, so ids align
            CHECK(d1.equations[i].lhs == d2.equations[i].lhs);
        }
    }
}

TEST_CASE("expressions round-trip through the printer") {
    auto d = doc("vars x; given a; funcs f,g; eq: f + g = 0;");
    Session& ctx = *d.session;
    for (const char* s :
         {"f' - g", "x^2*f'' + (x-1)*g' + 1/x", "a*f + a'*g' - 3/2",
          "D(f,5) - D(a*g,3)", "(x^2-1)/(x^3+2)*f + Int(1/x)*g"}) {
        LinDiffExpr e = expr(d, s);
        LinDiffExpr back = parse_expression(print_expr(e, ctx), d);
        CHECK(expr_equal(e, back));
    }
}

TEST_CASE("solution files") {
    auto d = doc("vars x; funcs f,g; eq: f' + g = 0;");
    SolutionDocument sol = parse_solution("f = h; g = -h';", d);
    REQUIRE(sol.assignments.size() == 2);
    // h was auto-registered as a parametric function
    CHECK(d.session->find_function("h").has_value());

    CHECK_THROWS_AS(parse_solution("q' = h;", d), ParseError);
}

TEST_CASE("json output is stable across runs") {
    auto run = [] {
        auto d = doc(
            "vars x; funcs f,g;"
            "eq: x^2*D(f,2) + x*D(g,2) - x^2*D(g,1) + f + 3*x = 0;");
        SolveResult res = solve(d.equations[0], SolverConfig{}, *d.session);
        return solve_json(res, *d.session).dump();
    };
    std::string a = run(), b = run();
    CHECK(a == b);
    CHECK(nlohmann::json::parse(a).contains("substitutions"));
    CHECK(nlohmann::json::parse(a).contains("stats"));
}
