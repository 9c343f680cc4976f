#include "uode/solution.hpp"

#include <algorithm>

#include "uode/errors.hpp"
#include "uode/systems.hpp"

namespace uode {

bool ExplicitSolution::is_parametric(FuncId f) const {
    return std::find(parametric.begin(), parametric.end(), f) != parametric.end();
}

ExplicitSolution back_substitute(const SubstList& subs,
                                 const std::vector<FuncId>& parametric,
                                 const Session& ctx) {
    ExplicitSolution sol;
    sol.parametric = parametric;
    std::sort(sol.parametric.begin(), sol.parametric.end());

    auto is_param = [&](FuncId f) {
        return std::binary_search(sol.parametric.begin(), sol.parametric.end(), f);
    };

    // Last-derived first: each rhs references only functions defined by
    // later substitutions or parametric ones, so one pass resolves all.
    for (auto it = subs.rbegin(); it != subs.rend(); ++it) {
        LinDiffExpr resolved;
        resolved.inhom = it->rhs.inhom;
        for (const auto& [f, op] : it->rhs.terms) {
            if (is_param(f)) {
                resolved.add_term(f, op);
                continue;
            }
            auto known = sol.assignments.find(f);
            if (known == sol.assignments.end())
                throw MathError("malformed substitution list: unresolved " +
                                ctx.func_name(f));
            resolved = expr_add(resolved, apply_expr(op, known->second, ctx));
        }
        sol.assignments[it->target] = std::move(resolved);
    }
    return sol;
}

LinDiffExpr apply_subst_sequence(const LinDiffExpr& e, const SubstList& subs,
                                 const Session& ctx) {
    LinDiffExpr cur = e;
    for (const auto& s : subs) cur = substitute(cur, s.target, s.rhs, ctx);
    return cur;
}

namespace {

// Verification engine.  Substituted values are linear in the modeled
// function atoms, so they are kept as maps atom -> canonical coefficient;
// operators are applied in standard form through a derivative tower of the
// value, which keeps every intermediate as cancelled as possible.
struct LinVal {
    std::map<VarKey, RatFunc> coeffs;  // atom -> coefficient
    RatFunc scalar;

    void add_coeff(const VarKey& v, const RatFunc& c) {
        if (c.is_zero()) return;
        auto it = coeffs.find(v);
        if (it == coeffs.end()) {
            coeffs.emplace(v, c);
            return;
        }
        it->second = it->second + c;
        if (it->second.is_zero()) coeffs.erase(it);
    }
    bool is_zero() const { return scalar.is_zero() && coeffs.empty(); }
};

LinVal lv_atom(const VarKey& v) {
    LinVal out;
    out.coeffs.emplace(v, RatFunc::constant(1));
    return out;
}

LinVal lv_add(const LinVal& a, const LinVal& b) {
    LinVal out = a;
    for (const auto& [v, c] : b.coeffs) out.add_coeff(v, c);
    out.scalar = out.scalar + b.scalar;
    return out;
}

LinVal lv_scale(const LinVal& a, const RatFunc& c) {
    LinVal out;
    if (c.is_zero()) return out;
    for (const auto& [v, k] : a.coeffs) out.coeffs.emplace(v, k * c);
    out.scalar = a.scalar * c;
    return out;
}

LinVal lv_diff(const LinVal& a, const Session& ctx) {
    LinVal out;
    out.scalar = differentiate(a.scalar, ctx);
    for (const auto& [v, c] : a.coeffs) {
        out.add_coeff(given_var(v.name, v.order + 1), c);
        out.add_coeff(v, differentiate(c, ctx));
    }
    return out;
}

// sum_j c_j * value^(j) via one derivative tower.
LinVal lv_apply_std(const StdOp& s, const LinVal& value, const Session& ctx) {
    LinVal sum;
    LinVal tower = value;
    for (int j = 0; j <= s.order(); ++j) {
        if (j > 0) tower = lv_diff(tower, ctx);
        if (!s.coeff(j).is_zero())
            sum = lv_add(sum, lv_scale(tower, s.coeff(j)));
    }
    return sum;
}

LinVal lv_evaluate(const LinDiffExpr& e, const std::map<FuncId, VarKey>& vars,
                   const Session& ctx) {
    LinVal sum;
    sum.scalar = e.inhom;
    for (const auto& [f, op] : e.terms) {
        auto it = vars.find(f);
        if (it == vars.end())
            throw MathError("verify: " + ctx.func_name(f) +
                            " is neither assigned nor parametric");
        sum = lv_add(sum, lv_apply_std(factored_to_std(op, ctx),
                                       lv_atom(it->second), ctx));
    }
    return sum;
}

// Replace one atom by a linear value (used by the residual rewrite).
LinVal lv_substitute(const LinVal& a, const VarKey& v, const LinVal& rhs) {
    auto it = a.coeffs.find(v);
    if (it == a.coeffs.end()) return a;
    RatFunc c = it->second;
    LinVal out;
    out.scalar = a.scalar;
    for (const auto& [w, k] : a.coeffs)
        if (!(w == v)) out.add_coeff(w, k);
    return lv_add(out, lv_scale(rhs, c));
}

int max_order_of(const LinVal& a, const std::string& name) {
    int m = -1;
    for (const auto& [v, c] : a.coeffs)
        if (v.name == name) m = std::max(m, v.order);
    return m;
}

}  // namespace

bool verify_with_residuals(const Uode& original, const ExplicitSolution& sol,
                           std::span<const Uode> residuals, const Session& ctx) {
    // Model every parametric function as a given-function indeterminate.
    Session scratch = ctx;
    std::map<FuncId, VarKey> vars;
    for (FuncId f : sol.parametric) {
        std::string name = "@" + ctx.func_name(f);
        scratch.declare_given(name);
        vars[f] = given_var(name, 0);
    }

    LinVal total;
    total.scalar = original.lhs.inhom;
    for (const auto& [f, op] : original.lhs.terms) {
        LinVal value;
        if (sol.is_parametric(f)) {
            value = lv_atom(vars.at(f));
        } else {
            auto it = sol.assignments.find(f);
            if (it == sol.assignments.end())
                throw MathError("verify: no assignment for " + ctx.func_name(f));
            value = lv_evaluate(it->second, vars, scratch);
        }
        total = lv_add(total, lv_apply_std(factored_to_std(op, scratch), value,
                                           scratch));
    }

    std::vector<Uode> all_residuals(residuals.begin(), residuals.end());
    if (sol.residual) all_residuals.push_back(*sol.residual);

    // Each residual rewrites its function's leading derivative, applied
    // until only lower orders remain.
    for (const Uode& r : all_residuals) {
        if (total.is_zero()) break;
        if (r.lhs.terms.size() != 1)
            throw MathError("verify: residual is not single-function");
        FuncId cf = r.lhs.terms.begin()->first;
        auto vit = vars.find(cf);
        if (vit == vars.end()) continue;
        StdOp cs = factored_to_std(r.lhs.terms.begin()->second, scratch);
        int m = cs.order();
        VarKey base = vit->second;
        LinVal lead_rhs;
        lead_rhs.scalar = -(r.lhs.inhom / cs.coeff(m));
        for (int k = 0; k < m; ++k)
            lead_rhs.add_coeff(given_var(base.name, k),
                               -(cs.coeff(k) / cs.coeff(m)));
        // rhs table for the leading order and above
        std::vector<LinVal> rhs_by_order{lead_rhs};
        int mo = max_order_of(total, base.name);
        while (m + static_cast<int>(rhs_by_order.size()) - 1 < mo) {
            LinVal next = lv_diff(rhs_by_order.back(), scratch);
            next = lv_substitute(next, given_var(base.name, m), rhs_by_order[0]);
            rhs_by_order.push_back(std::move(next));
        }
        for (int k = mo; k >= m; --k)
            total = lv_substitute(total, given_var(base.name, k),
                                  rhs_by_order[k - m]);
    }
    return total.is_zero();
}

bool verify(const Uode& original, const ExplicitSolution& sol, const Session& ctx) {
    return verify_with_residuals(original, sol, {}, ctx);
}

bool verify_sequential(const Uode& original, const SubstList& subs,
                       const std::optional<Uode>& residual, const Session& ctx) {
    LinDiffExpr cur = apply_subst_sequence(original.lhs, subs, ctx);
    if (cur.is_zero()) return true;
    if (!residual) return false;
    if (residual->lhs.terms.size() != 1) return false;
    FuncId h = residual->lhs.terms.begin()->first;
    const DiffOp& constraint = residual->lhs.terms.begin()->second;
    if (cur.terms.size() != 1 || cur.terms.begin()->first != h) return false;
    // cur = Q o constraint is forced; solutions satisfy constraint(h) =
    // -residual_inhom, so the inhomogeneity must match apply(Q, .).
    auto [q, rem] = right_divide(cur.terms.begin()->second, constraint, ctx);
    if (!rem.is_zero()) return false;
    RatFunc expected = apply(q, residual->lhs.inhom, ctx);
    return (cur.inhom - expected).is_zero();
}

TermCount term_count(const RatFunc& r) {
    TermCount tc;
    tc.numerator_terms = static_cast<long>(r.num().term_count());
    tc.denominator_terms = static_cast<long>(r.den().term_count());
    return tc;
}

TermCount term_count(const LinDiffExpr& e, const Session& ctx) {
    // Single-fraction convention: expand every operator, put everything
    // over the common denominator, count numerator monomials with
    // function derivatives as atoms.
    std::vector<StdOp> ops;
    Poly common = Poly::constant(1);
    for (const auto& [f, op] : e.terms) {
        ops.push_back(factored_to_std(op, ctx));
        for (const auto& c : ops.back().coeffs())
            if (!c.is_zero()) common = poly_lcm(common, c.den());
    }
    if (!e.inhom.is_zero()) common = poly_lcm(common, e.inhom.den());

    RatFunc q{Poly(common)};
    TermCount tc;
    tc.numerator_terms = 0;
    for (const auto& s : ops)
        for (const auto& c : s.coeffs())
            if (!c.is_zero())
                tc.numerator_terms += static_cast<long>((c * q).num().term_count());
    if (!e.inhom.is_zero())
        tc.numerator_terms += static_cast<long>((e.inhom * q).num().term_count());
    tc.denominator_terms = static_cast<long>(common.term_count());
    return tc;
}

}  // namespace uode
