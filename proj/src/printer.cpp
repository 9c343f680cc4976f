#include "uode/printer.hpp"

#include <sstream>

#include "uode/solution.hpp"

namespace uode {

namespace {

std::string var_text(const VarKey& v, const Session& ctx) {
    if (v.kind == VarKind::Integral)
        return "Int(" + print_ratfunc(ctx.integrand(v), ctx) + ")";
    if (v.kind == VarKind::GivenFunc && v.order > 0) {
        if (v.order <= 3) return v.name + std::string(v.order, '\'');
        return "D(" + v.name + "," + std::to_string(v.order) + ")";
    }
    return v.name;
}

std::string rat_text(const Rat& c) {
    return c.get_str();  // "p" or "p/q"
}

// One monomial with |coefficient|; sign handled by the caller.
std::string term_text(const Term& t, const Session& ctx) {
    Rat ac = abs(t.coeff);
    std::ostringstream os;
    bool wrote = false;
    if (ac != 1 || t.mono.is_one()) {
        os << rat_text(ac);
        wrote = true;
    }
    for (const auto& [v, e] : t.mono.vars()) {
        if (wrote) os << "*";
        os << var_text(v, ctx);
        if (e != 1) os << "^" << e;
        wrote = true;
    }
    return os.str();
}

std::string poly_text(const Poly& p, const Session& ctx, bool* multi = nullptr) {
    if (multi) *multi = p.term_count() > 1;
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : p.terms()) {
        if (!first)
            os << (t.coeff < 0 ? " - " : " + ");
        else if (t.coeff < 0)
            os << "-";
        os << term_text(t, ctx);
        first = false;
    }
    return os.str();
}

// Coefficient in product position: parenthesized whenever it would not
// bind as a single factor.
std::string coeff_factor(const RatFunc& r, const Session& ctx) {
    bool multi_num = false;
    std::string num = poly_text(r.num(), ctx, &multi_num);
    bool neg = !r.num().is_zero() && r.num().leading().coeff < 0;
    if (r.den().is_one()) {
        if (multi_num || neg) return "(" + num + ")";
        return num;
    }
    bool multi_den = false;
    std::string den = poly_text(r.den(), ctx, &multi_den);
    std::string lhs = (multi_num || neg) ? "(" + num + ")" : num;
    std::string rhs = multi_den ? "(" + den + ")" : den;
    return lhs + "/" + rhs;
}

std::string funcref_text(const std::string& name, int order) {
    if (order == 0) return name;
    if (order <= 3) return name + std::string(order, '\'');
    return "D(" + name + "," + std::to_string(order) + ")";
}

}  // namespace

std::string print_poly(const Poly& p, const Session& ctx) {
    return poly_text(p, ctx);
}

std::string print_ratfunc(const RatFunc& r, const Session& ctx) {
    if (r.den().is_one()) return poly_text(r.num(), ctx);
    return coeff_factor(r, ctx);
}

std::string print_expr(const LinDiffExpr& e, const Session& ctx) {
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const std::string& piece, bool negative) {
        if (first) {
            if (negative) os << "-";
            first = false;
        } else {
            os << (negative ? " - " : " + ");
        }
        os << piece;
    };
    for (const auto& [f, op] : e.terms) {
        StdOp s = factored_to_std(op, ctx);
        for (int j = 0; j <= s.order(); ++j) {
            const RatFunc& c = s.coeff(j);
            if (c.is_zero()) continue;
            bool neg = c.num().leading().coeff < 0;
            RatFunc cc = neg ? -c : c;
            std::string ref = funcref_text(ctx.func_name(f), j);
            std::string piece =
                cc.is_one() ? ref : coeff_factor(cc, ctx) + "*" + ref;
            emit(piece, neg);
        }
    }
    if (!e.inhom.is_zero()) {
        bool neg = e.inhom.num().leading().coeff < 0;
        RatFunc cc = neg ? -e.inhom : e.inhom;
        emit(print_ratfunc(cc, ctx), neg);
    }
    if (first) return "0";
    return os.str();
}

std::string print_equation(const Uode& w, const Session& ctx) {
    return "eq: " + print_expr(w.lhs, ctx) + " = 0;";
}

std::string print_document(const OdeDocument& doc) {
    const Session& ctx = *doc.session;
    std::ostringstream os;
    os << "vars " << ctx.base_name() << ";\n";
    if (!ctx.given_names().empty()) {
        os << "given ";
        for (std::size_t i = 0; i < ctx.given_names().size(); ++i)
            os << (i ? "," : "") << ctx.given_names()[i];
        os << ";\n";
    }
    if (!ctx.constant_names().empty()) {
        os << "consts ";
        for (std::size_t i = 0; i < ctx.constant_names().size(); ++i)
            os << (i ? "," : "") << ctx.constant_names()[i];
        os << ";\n";
    }
    os << "funcs ";
    for (std::size_t i = 0; i < doc.funcs.size(); ++i)
        os << (i ? "," : "") << ctx.func_name(doc.funcs[i]);
    os << ";\n";
    for (const auto& eq : doc.equations) os << print_equation(eq, ctx) << "\n";
    return os.str();
}

std::string print_subs(const SubstList& subs, const Session& ctx) {
    std::ostringstream os;
    for (const auto& s : subs)
        os << ctx.func_name(s.target) << " = " << print_expr(s.rhs, ctx) << ";\n";
    return os.str();
}

std::string print_explicit(const ExplicitSolution& sol, const Session& ctx) {
    std::ostringstream os;
    for (const auto& [f, e] : sol.assignments) {
        if (!ctx.is_user_function(f)) continue;
        os << ctx.func_name(f) << " = " << print_expr(e, ctx) << ";\n";
    }
    if (!sol.parametric.empty()) {
        os << "# parametric:";
        for (FuncId f : sol.parametric) os << " " << ctx.func_name(f);
        os << "\n";
    }
    if (sol.residual)
        os << "# residual " << print_equation(*sol.residual, ctx) << "\n";
    return os.str();
}

std::string print_trace(const std::vector<StepRecord>& trace, const Session& ctx) {
    std::ostringstream os;
    int n = 0;
    for (const auto& r : trace) {
        os << "# step " << ++n << ": " << step_kind_name(r.kind);
        if (r.pivot) os << " pivot=" << ctx.func_name(*r.pivot);
        if (!r.introduced.empty()) {
            os << " introduces";
            for (FuncId f : r.introduced) os << " " << ctx.func_name(f);
        }
        os << " order_sum " << r.order_sum_before << "->" << r.order_sum_after;
        os << " size " << r.size_before << "->" << r.size_after;
        if (!r.definition.terms.empty() || !r.definition.inhom.is_zero())
            os << " defined_as " << print_expr(r.definition, ctx);
        os << "\n";
    }
    return os.str();
}

// ------------------------------------------------------------------ JSON

namespace {

nlohmann::json poly_json(const Poly& p, const Session& ctx) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : p.terms()) {
        nlohmann::json vars = nlohmann::json::array();
        for (const auto& [v, e] : t.mono.vars()) {
            std::string name = v.kind == VarKind::Integral
                                   ? var_text(v, ctx)
                                   : v.name;
            vars.push_back({name, v.order, e});
        }
        terms.push_back({rat_text(t.coeff), vars});
    }
    return terms;
}

nlohmann::json ratfunc_json(const RatFunc& r, const Session& ctx) {
    return {poly_json(r.num(), ctx), poly_json(r.den(), ctx)};
}

nlohmann::json residual_json(const std::optional<Uode>& r, const Session& ctx) {
    if (!r) return nullptr;
    return expr_json(r->lhs, ctx);
}

}  // namespace

nlohmann::json expr_json(const LinDiffExpr& e, const Session& ctx) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [f, op] : e.terms) {
        nlohmann::json slots = nlohmann::json::array();
        for (int k = 0; k <= op.order(); ++k) {
            if (op.coeff(k).is_zero()) continue;
            slots.push_back({k, poly_json(op.coeff(k).num(), ctx),
                             poly_json(op.coeff(k).den(), ctx)});
        }
        out[ctx.func_name(f)] = slots;
    }
    out["inhom"] = ratfunc_json(e.inhom, ctx);
    return out;
}

nlohmann::json solve_json(const SolveResult& res, const Session& ctx) {
    nlohmann::json j;
    j["parametric"] = nlohmann::json::array();
    for (FuncId f : res.parametric) j["parametric"].push_back(ctx.func_name(f));

    j["substitutions"] = nlohmann::json::array();
    for (const auto& s : res.subs)
        j["substitutions"].push_back({{"target", ctx.func_name(s.target)},
                                      {"rhs", expr_json(s.rhs, ctx)}});

    nlohmann::json ex = nlohmann::json::object();
    for (const auto& [f, e] : res.explicit_solution.assignments) {
        if (!ctx.is_user_function(f)) continue;
        ex[ctx.func_name(f)] = expr_json(e, ctx);
    }
    j["explicit"] = ex;
    j["residual"] = residual_json(res.residual, ctx);
    j["inconsistent"] = res.inconsistent;

    nlohmann::json stats;
    stats["steps"] = res.iteration_count();
    nlohmann::json trace = nlohmann::json::array();
    bool start = true;
    for (const auto& r : res.trace) {
        if (start) trace.push_back(r.order_sum_before);
        start = false;
        trace.push_back(r.order_sum_after);
    }
    stats["order_sum_trace"] = trace;
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [f, e] : res.explicit_solution.assignments) {
        if (!ctx.is_user_function(f)) continue;
        TermCount tc = term_count(e, ctx);
        counts[ctx.func_name(f)] = {tc.numerator_terms, tc.denominator_terms};
    }
    stats["term_counts"] = counts;
    j["stats"] = stats;
    return j;
}

nlohmann::json decouple_json(const DecoupleResult& res, const Session& ctx) {
    nlohmann::json j;
    j["substitutions"] = nlohmann::json::array();
    for (const auto& s : res.subs)
        j["substitutions"].push_back({{"target", ctx.func_name(s.target)},
                                      {"rhs", expr_json(s.rhs, ctx)}});
    j["decoupled"] = nlohmann::json::array();
    for (const auto& w : res.decoupled) j["decoupled"].push_back(expr_json(w.lhs, ctx));
    nlohmann::json ex = nlohmann::json::object();
    for (const auto& [f, e] : res.explicit_solution.assignments) {
        if (!ctx.is_user_function(f)) continue;
        ex[ctx.func_name(f)] = expr_json(e, ctx);
    }
    j["explicit"] = ex;
    j["parametric"] = nlohmann::json::array();
    for (FuncId f : res.explicit_solution.parametric)
        j["parametric"].push_back(ctx.func_name(f));
    j["inconsistent"] = res.inconsistent;
    if (!res.note.empty()) j["note"] = res.note;
    return j;
}

}  // namespace uode
