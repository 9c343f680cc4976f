#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "uode/errors.hpp"

using namespace uode;
using namespace uode::test;

namespace {
Poly X(int e, long c = 1) {
    return Poly::variable(base_var("x"), e).times(Rat(c));
}
}  // namespace

TEST_CASE("polynomial ring basics") {
    Poly x1 = X(1);
    CHECK((x1 + Poly::constant(1)) + (x1 - Poly::constant(1)) == X(1, 2));
    Poly p = X(3, 2) - X(1) + Poly::constant(5);
    CHECK((p * Poly::zero()).is_zero());
    CHECK((x1 - Poly::constant(1)) * (x1 + Poly::constant(1)) ==
          X(2) - Poly::constant(1));
    // ring sanity on random values
    std::mt19937_64 rng(11);
    Session ctx("x");
    for (int i = 0; i < 200; ++i) {
        Poly a = random_poly(rng, ctx, 4, 4, true);
        Poly b = random_poly(rng, ctx, 4, 4, true);
        Poly c = random_poly(rng, ctx, 4, 4, true);
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + b == b + a);
        CHECK((a - a).is_zero());
    }
}

TEST_CASE("polynomial gcd") {
    CHECK(poly_gcd(X(2) - Poly::constant(1),
                   X(2) - X(1, 2) + Poly::constant(1)) ==
          X(1) - Poly::constant(1));
    Poly p = X(4, 6) - X(2, 3);
    CHECK(poly_gcd(p, Poly::zero()) == normalize_primitive(p));
    CHECK(poly_gcd(X(1, 2) + Poly::constant(2), X(1, 4) + Poly::constant(4)) ==
          X(1) + Poly::constant(1));

    std::mt19937_64 rng(12);
    Session ctx("x");
    for (int i = 0; i < 150; ++i) {
        Poly a = random_nonzero_poly(rng, ctx, 4, 3, true);
        Poly b = random_nonzero_poly(rng, ctx, 4, 3, true);
        Poly g = poly_gcd(a, b);
        CHECK(exact_divide(a, g).has_value());
        CHECK(exact_divide(b, g).has_value());
        // common factors are found
        Poly c = random_nonzero_poly(rng, ctx, 3, 2, true);
        Poly g2 = poly_gcd(a * c, b * c);
        CHECK(exact_divide(g2, normalize_primitive(c)).has_value());
    }
}

TEST_CASE("rational function canonical form") {
    auto d = doc("vars x; funcs f,g; eq: f + g = 0;");
    CHECK(rf(d, "(x^2-1)/(x-1)") == rf(d, "x+1"));
    RatFunc z = RatFunc(Poly::zero(), X(3));
    CHECK(z.is_zero());
    CHECK(z.den().is_one());
    RatFunc half_x = RatFunc(X(1, 2), Poly::constant(4));
    CHECK(half_x.num() == X(1).times(Rat(1, 2)));
    CHECK(half_x.den().is_one());
    CHECK_THROWS_AS(RatFunc(X(1), Poly::zero()), MathError);

    // canonical-form idempotence
    RatFunc r = rf(d, "(x^3+2*x)/(x^2-5)");
    CHECK(RatFunc(r.num(), r.den()) == r);

    // denominator is monic under the term order
    RatFunc s = rf(d, "x/(2*x - 4)");
    CHECK(s.den().leading().coeff == 1);
}

TEST_CASE("differentiation") {
    auto d = doc("vars x; given a; funcs f,g; eq: f + g = 0;");
    Session& ctx = *d.session;
    CHECK(differentiate(rf(d, "1/x"), ctx) == rf(d, "-1/x^2"));
    CHECK(differentiate(rf(d, "a*x"), ctx) == rf(d, "a'*x + a"));
    CHECK(differentiate(rf(d, "Int(1/x)"), ctx) == rf(d, "1/x"));

    SUBCASE("linearity and Leibniz on random pairs") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 1000; ++i) {
            RatFunc p{random_poly(rng, ctx, 5, 3, true)};
            RatFunc q{random_poly(rng, ctx, 5, 3, true)};
            RatFunc lhs = differentiate(p * q, ctx);
            RatFunc rhs = differentiate(p, ctx) * q + p * differentiate(q, ctx);
            CHECK(lhs == rhs);
            CHECK(differentiate(p + q, ctx) ==
                  differentiate(p, ctx) + differentiate(q, ctx));
        }
    }
}

TEST_CASE("formal integration") {
    auto d = doc("vars x; given a; funcs f,g; eq: f + g = 0;");
    Session& ctx = *d.session;
    CHECK(integrate_formal(rf(d, "3*x"), ctx) == rf(d, "3/2*x^2"));
    RatFunc i = integrate_formal(rf(d, "1/x"), ctx);
    CHECK(!i.is_zero());
    CHECK(differentiate(i, ctx) == rf(d, "1/x"));
    CHECK(integrate_formal(RatFunc(), ctx).is_zero());

    // same integrand twice gives the same indeterminate
    CHECK(integrate_formal(rf(d, "1/x"), ctx) == i);

    SUBCASE("derivative of integral returns the integrand on both branches") {
        std::mt19937_64 rng(14);
        for (int i2 = 0; i2 < 100; ++i2) {
            RatFunc poly_branch{random_poly(rng, ctx, 5, 4)};
            CHECK(differentiate(integrate_formal(poly_branch, ctx), ctx) ==
                  poly_branch);
            RatFunc num{random_poly(rng, ctx, 3, 3, true)};
            RatFunc den{random_nonzero_poly(rng, ctx, 2, 2)};
            RatFunc formal_branch = num / den;
            CHECK(differentiate(integrate_formal(formal_branch, ctx), ctx) ==
                  formal_branch);
        }
    }
}

TEST_CASE("zero test") {
    auto d = doc("vars x; given a; funcs f,g; eq: f + g = 0;");
    CHECK((rf(d, "(x^2-1)/(x-1)") - rf(d, "x+1")).is_zero());
    CHECK((rf(d, "a") - rf(d, "a")).is_zero());
    CHECK(!(rf(d, "x") - rf(d, "1")).is_zero());

    std::mt19937_64 rng(15);
    Session& ctx = *d.session;
    for (int i = 0; i < 200; ++i) {
        RatFunc r = RatFunc{random_poly(rng, ctx, 4, 4, true)} /
                    RatFunc{random_nonzero_poly(rng, ctx, 3, 2, true)};
        CHECK((r - r).is_zero());
    }
}

TEST_CASE("content gcd of coefficient lists") {
    auto d = doc("vars x; funcs f,g; eq: f + g = 0;");
    std::vector<RatFunc> a{rf(d, "2*x^2"), rf(d, "4*x")};
    CHECK(content_gcd(a) == rf(d, "2*x"));
    std::vector<RatFunc> b{rf(d, "x"), rf(d, "1")};
    CHECK(content_gcd(b) == rf(d, "1"));
    std::vector<RatFunc> c{rf(d, "x/2"), rf(d, "x^2/2")};
    CHECK(content_gcd(c) == rf(d, "x/2"));
    std::vector<RatFunc> zeros{RatFunc(), RatFunc()};
    CHECK_THROWS_AS(content_gcd(zeros), MathError);

    // dividing polynomial inputs by the result leaves coprime entries
    std::vector<RatFunc> mixed{rf(d, "6*x^3 - 6*x"), rf(d, "4*x^2 + 4*x")};
    RatFunc g = content_gcd(mixed);
    for (const auto& m : mixed) {
        RatFunc q = m / g;
        CHECK(q.is_polynomial());
    }
}
