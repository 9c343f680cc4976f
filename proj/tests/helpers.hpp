#pragma once

#include <random>
#include <string>

#include "uode/errors.hpp"
#include "uode/parser.hpp"
#include "uode/solver.hpp"

namespace uode::test {

inline OdeDocument doc(const std::string& text) { return parse_document(text); }

inline LinDiffExpr expr(OdeDocument& d, const std::string& s) {
    return parse_expression(s, d);
}

// Scalar coefficient-field element.
inline RatFunc rf(OdeDocument& d, const std::string& s) {
    LinDiffExpr e = parse_expression(s, d);
    if (!e.terms.empty()) throw Error("rf: expression references functions");
    return e.inhom;
}

inline DiffOp op_of(OdeDocument& d, const std::string& s,
                    const std::string& func) {
    LinDiffExpr e = parse_expression(s, d);
    FuncId f = *d.session->find_function(func);
    return e.terms.at(f);
}

// Random polynomial in x (and optionally a given function) with small
// integer coefficients.
inline Poly random_poly(std::mt19937_64& rng, const Session& ctx, int max_deg,
                        int max_terms, bool with_given = false,
                        const std::string& given_name = "a") {
    std::uniform_int_distribution<int> coeff(-4, 4);
    std::uniform_int_distribution<int> deg(0, max_deg);
    std::uniform_int_distribution<int> nterms(1, max_terms);
    std::uniform_int_distribution<int> gorder(0, 2);
    std::uniform_int_distribution<int> use_g(0, 3);
    std::vector<Term> terms;
    int n = nterms(rng);
    for (int i = 0; i < n; ++i) {
        int c = coeff(rng);
        if (c == 0) c = 1;
        Monomial m = Monomial::variable(ctx.base(), deg(rng));
        if (with_given && use_g(rng) == 0)
            m = m.times(Monomial::variable(given_var(given_name, gorder(rng))));
        terms.push_back({m, Rat(c)});
    }
    return Poly::from_terms(std::move(terms));
}

inline Poly random_nonzero_poly(std::mt19937_64& rng, const Session& ctx,
                                int max_deg, int max_terms,
                                bool with_given = false) {
    for (int i = 0; i < 64; ++i) {
        Poly p = random_poly(rng, ctx, max_deg, max_terms, with_given);
        if (!p.is_zero()) return p;
    }
    return Poly::constant(1);
}

// Random homogeneous underdetermined equation with polynomial
// coefficients; every function has order >= 1.
inline Uode random_uode(std::mt19937_64& rng, OdeDocument& d, int nfuncs,
                        int max_order, int max_deg) {
    Session& ctx = *d.session;
    std::uniform_int_distribution<int> order(1, max_order);
    std::uniform_int_distribution<int> pick(0, 2);
    LinDiffExpr e;
    for (int i = 0; i < nfuncs; ++i) {
        FuncId f = d.funcs.at(i);
        int n = order(rng);
        std::vector<RatFunc> c(n + 1);
        for (int j = 0; j <= n; ++j)
            if (j == n || pick(rng) != 0)
                c[j] = RatFunc(random_nonzero_poly(rng, ctx, max_deg, 3));
        e.add_term(f, std_to_factored(StdOp(std::move(c)), ctx));
    }
    return Uode::make(std::move(e));
}

inline LinDiffExpr expr_left_scale(const LinDiffExpr& e, const RatFunc& w,
                                   const Session& ctx) {
    LinDiffExpr out;
    for (const auto& [f, op] : e.terms) out.add_term(f, left_scale(op, w, ctx));
    out.inhom = e.inhom * w;
    return out;
}

}  // namespace uode::test
