#include "uode/solver.hpp"

#include <algorithm>
#include <cassert>

#include "uode/errors.hpp"

namespace uode {

const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::New: return "new";
        case StepKind::Euclid: return "euclid";
        case StepKind::Exact: return "exact";
        case StepKind::Absorb: return "absorb";
        case StepKind::Scale: return "scale";
        case StepKind::FinalAlgebraic: return "algebraic";
    }
    return "?";
}

long expr_size(const LinDiffExpr& e, SizeMetric metric) {
    if (metric == SizeMetric::TermCount) return e.term_count_numerators();
    long d = e.inhom.is_zero() ? 0 : std::max(0, e.inhom.num().total_degree());
    for (const auto& [f, op] : e.terms)
        for (const auto& c : op.coeffs())
            if (!c.is_zero()) d += std::max(0, c.num().total_degree());
    return d;
}

namespace {

long ode_size(const Uode& w) { return w.lhs.term_count_numerators(); }

long outcome_size(const StepOutcome& o, SizeMetric metric) {
    long s = expr_size(o.next.lhs, metric);
    for (const auto& sub : o.subs) s += expr_size(sub.rhs, metric);
    return s;
}

StepRecord make_record(StepKind kind, const Uode& before, const Uode& after) {
    StepRecord r;
    r.kind = kind;
    r.order_sum_before = before.order_sum();
    r.order_sum_after = after.order_sum();
    r.size_before = ode_size(before);
    r.size_after = ode_size(after);
    return r;
}

// (order, total degree, term count, -creation) minimizer over candidates.
struct PivotKey {
    int order;
    int degree;
    long terms;
    int neg_creation;
    friend auto operator<=>(const PivotKey&, const PivotKey&) = default;
};

RatFunc den_of(const RatFunc& r) { return RatFunc(r.den()); }

bool needs_den_clearing(const DiffOp& op) {
    for (const auto& c : op.coeffs())
        if (!c.den().is_one()) return true;
    return false;
}

}  // namespace

FuncId choose_pivot_new(const Uode& w) {
    std::optional<FuncId> best;
    PivotKey best_key{};
    for (const auto& [f, op] : w.lhs.terms) {
        SplitOp s = split(op);
        if (s.algebraic_part.is_zero()) continue;
        PivotKey key{op.order(), s.algebraic_part.total_degree(),
                     s.algebraic_part.term_count(), -f.value};
        if (!best || key < best_key) {
            best = f;
            best_key = key;
        }
    }
    if (!best) throw MathError("no pivot: every algebraic part vanishes");
    return *best;
}

std::optional<StepOutcome> try_new_step(const Uode& w_in, const SolverConfig& cfg,
                                        Session& ctx) {
    if (w_in.func_count() < 2) throw Error("not underdetermined");

    bool all_exact = true;
    for (const auto& [f, op] : w_in.lhs.terms)
        all_exact &= split(op).algebraic_part.is_zero();
    if (all_exact) return std::nullopt;

    StepOutcome out;
    Uode w = w_in;
    FuncId pivot = choose_pivot_new(w);

    // Scale the other functions so their algebraic coefficients divide
    // cleanly by the pivot's; keeps the updated components and the
    // substitution denominator-free.
    if (cfg.avoid_denominators) {
        RatFunc aj0 = split(w.lhs.terms.at(pivot)).algebraic_part;
        std::vector<FuncId> others;
        for (const auto& [f, op] : w.lhs.terms)
            if (!(f == pivot)) others.push_back(f);
        for (FuncId f : others) {
            RatFunc ai0 = split(w.lhs.terms.at(f)).algebraic_part;
            if (ai0.is_zero()) continue;
            RatFunc d = den_of(ai0 / aj0);
            if (d.is_one()) continue;
            Uode before = w;
            auto [scaled, sub] = scale_function(w, f, d, ctx);
            StepRecord rec = make_record(StepKind::Scale, before, scaled);
            rec.pivot = f;
            rec.introduced = {sub.rhs.terms.begin()->first};
            rec.definition = sub.rhs;
            out.records.push_back(std::move(rec));
            out.subs.push_back(std::move(sub));
            w = std::move(scaled);
        }
    }

    SplitOp pj = split(w.lhs.terms.at(pivot));
    const DiffOp& Aj_tilde = pj.total_derivative_part;
    const RatFunc& aj0 = pj.algebraic_part;
    const RatFunc inv_aj0 = RatFunc::constant(1) / aj0;

    // With the flag set and a nonconstant pivot coefficient, the new
    // function is introduced pre-scaled by aj0^2 so that neither the
    // first component of the update nor the substitution acquires a
    // denominator.
    bool prescale = cfg.avoid_denominators && !aj0.is_constant();
    RatFunc scale = prescale ? aj0 * aj0 : RatFunc::constant(1);

    FuncId f_new = ctx.fresh_function();

    // New equation: 0 = f_new - sum_{i != j} (...) f_i + Aj~((1/aj0) D f_new) + ...
    LinDiffExpr next;
    DiffOp a_new = op_add(DiffOp::identity(),
                          compose_D(compose_mul(Aj_tilde, inv_aj0), 1, ctx));
    if (prescale) a_new = compose_mul(a_new, scale);
    next.add_term(f_new, a_new);
    for (const auto& [f, op] : w.lhs.terms) {
        if (f == pivot) continue;
        SplitOp si = split(op);
        next.add_term(f, op_linear(op_neg(si.total_derivative_part), Aj_tilde,
                                   si.algebraic_part / aj0));
    }
    next.inhom = apply(Aj_tilde, w.lhs.inhom / aj0, ctx);

    // Substitution (the old equation solved for the pivot).
    LinDiffExpr rhs;
    if (prescale) {
        // -(1/aj0) D(aj0^2 f_new) = -aj0 f_new' - 2 aj0' f_new
        RatFunc daj0 = differentiate(aj0, ctx);
        rhs.add_term(f_new, DiffOp({-daj0, -aj0}));
    } else {
        rhs.add_term(f_new, compose_D(DiffOp::multiplication(-inv_aj0), 1, ctx));
    }
    for (const auto& [f, op] : w.lhs.terms) {
        if (f == pivot) continue;
        RatFunc ai0 = split(op).algebraic_part;
        if (ai0.is_zero()) continue;
        rhs.add_term(f, DiffOp::multiplication(-ai0 / aj0));
    }
    rhs.inhom = -(w.lhs.inhom / aj0);

    Uode next_ode = Uode::make(std::move(next));
    StepRecord rec = make_record(StepKind::New, w, next_ode);
    rec.kind = StepKind::New;
    rec.pivot = pivot;
    rec.introduced = {f_new};
    // definition: f_new = (1/scale) * sum_i Atilde_i f_i
    for (const auto& [f, op] : w.lhs.terms) {
        DiffOp t = split(op).total_derivative_part;
        if (prescale) t = left_scale(t, RatFunc::constant(1) / scale, ctx);
        rec.definition.add_term(f, t);
    }
    if (rec.order_sum_after >= rec.order_sum_before)
        throw Error("order sum failed to decrease in a new-method step");
    out.records.push_back(std::move(rec));
    out.subs.push_back(Substitution{pivot, std::move(rhs)});
    out.next = std::move(next_ode);
    return out;
}

StepOutcome euclid_step(const Uode& w_in, const SolverConfig& cfg, Session& ctx) {
    if (w_in.func_count() < 2) throw Error("not underdetermined");

    StepOutcome out;
    Uode w = w_in;

    // j: the substituted function, lowest order; i: lowest order among the
    // rest, its operator loses the leading term.
    auto select = [&](std::optional<FuncId> skip) {
        std::optional<FuncId> best;
        PivotKey best_key{};
        for (const auto& [f, op] : w.lhs.terms) {
            if (skip && f == *skip) continue;
            PivotKey key{op.order(), 0, op.term_count(), f.value};
            if (!best || key < best_key) {
                best = f;
                best_key = key;
            }
        }
        return *best;
    };
    FuncId j = select(std::nullopt);
    FuncId i = select(j);

    if (cfg.avoid_denominators) {
        RatFunc ratio = w.lhs.terms.at(i).leading() / w.lhs.terms.at(j).leading();
        RatFunc d = den_of(ratio);
        if (!d.is_one()) {
            Uode before = w;
            auto [scaled, sub] = scale_function(w, i, d, ctx);
            FuncId replacement = sub.rhs.terms.begin()->first;
            StepRecord rec = make_record(StepKind::Scale, before, scaled);
            rec.pivot = i;
            rec.introduced = {replacement};
            rec.definition = sub.rhs;
            out.records.push_back(std::move(rec));
            out.subs.push_back(std::move(sub));
            w = std::move(scaled);
            i = replacement;
        }
    }

    const DiffOp& Aj = w.lhs.terms.at(j);
    const DiffOp& Ai = w.lhs.terms.at(i);
    int m = Ai.order() - Aj.order();
    RatFunc ratio = Ai.leading() / Aj.leading();

    FuncId f_new = ctx.fresh_function();

    LinDiffExpr next;
    next.add_term(f_new, Aj);
    DiffOp reducer = compose_mul(compose_D(Aj, m, ctx), ratio);
    DiffOp Ai_next = op_add(Ai, op_neg(reducer));
    if (Ai_next.order() >= Ai.order())
        throw Error("leading term failed to cancel in a Euclid step");
    next.add_term(i, Ai_next);
    for (const auto& [f, op] : w.lhs.terms)
        if (!(f == j) && !(f == i)) next.add_term(f, op);
    next.inhom = w.lhs.inhom;  // untouched by construction

    // f_j = f_new - D^m(ratio * f_i)
    LinDiffExpr rhs;
    rhs.add_term(f_new, DiffOp::identity());
    {
        std::vector<RatFunc> slots(m + 1);
        slots[m] = -ratio;
        rhs.add_term(i, DiffOp(std::move(slots)));
    }

    Uode next_ode = Uode::make(std::move(next));
    StepRecord rec = make_record(StepKind::Euclid, w, next_ode);
    rec.pivot = j;
    rec.introduced = {f_new};
    // definition: f_new = f_j + D^m(ratio * f_i)
    rec.definition.add_term(j, DiffOp::identity());
    {
        std::vector<RatFunc> slots(m + 1);
        slots[m] = ratio;
        rec.definition.add_term(i, DiffOp(std::move(slots)));
    }
    if (rec.order_sum_after >= rec.order_sum_before)
        throw Error("order sum failed to decrease in a Euclid step");
    out.records.push_back(std::move(rec));
    out.subs.push_back(Substitution{j, std::move(rhs)});
    out.next = std::move(next_ode);
    return out;
}

StepOutcome exact_step(const Uode& w, const SolverConfig& cfg, Session& ctx) {
    LinDiffExpr next;
    for (const auto& [f, op] : w.lhs.terms) {
        SplitOp s = split(op);
        if (!s.algebraic_part.is_zero())
            throw MathError("exact step on a non-exact equation");
        next.add_term(f, s.total_derivative_part);
    }
    next.inhom = integrate_formal(w.lhs.inhom, ctx);
    if (cfg.integration_constant)
        next.inhom = next.inhom + RatFunc::variable(ctx.fresh_constant());

    StepOutcome out;
    out.next = Uode::make(std::move(next));
    out.records.push_back(make_record(StepKind::Exact, w, out.next));
    return out;
}

std::pair<Uode, std::vector<Substitution>> absorb_gcd(const Uode& w, Session& ctx) {
    Uode cur = w;
    std::vector<Substitution> subs;
    std::vector<FuncId> fs = cur.functions();
    for (FuncId f : fs) {
        const DiffOp& op = cur.lhs.terms.at(f);
        RatFunc c = content_gcd(op.coeffs());
        if (c.is_one()) continue;
        FuncId f_new = ctx.fresh_function();
        LinDiffExpr next;
        for (const auto& [g, gop] : cur.lhs.terms)
            if (!(g == f)) next.add_term(g, gop);
        next.add_term(f_new, compose_mul(op, RatFunc::constant(1) / c));
        next.inhom = cur.lhs.inhom;
        LinDiffExpr rhs;
        rhs.add_term(f_new, DiffOp::multiplication(RatFunc::constant(1) / c));
        subs.push_back(Substitution{f, std::move(rhs)});
        cur = Uode::make(std::move(next));
    }
    return {cur, subs};
}

std::pair<Uode, Substitution> scale_function(const Uode& w, FuncId f,
                                             const RatFunc& c, Session& ctx) {
    if (c.is_zero()) throw MathError("scale by zero");
    auto it = w.lhs.terms.find(f);
    if (it == w.lhs.terms.end()) throw MathError("scale: function absent");
    FuncId f_new = ctx.fresh_function();
    LinDiffExpr next;
    for (const auto& [g, op] : w.lhs.terms)
        if (!(g == f)) next.add_term(g, op);
    next.add_term(f_new, compose_mul(it->second, c));
    next.inhom = w.lhs.inhom;
    LinDiffExpr rhs;
    rhs.add_term(f_new, DiffOp::multiplication(c));
    return {Uode::make(std::move(next)), Substitution{f, std::move(rhs)}};
}

StepOutcome hybrid_step(const Uode& w, const SolverConfig& cfg, Session& ctx,
                        int iteration) {
    if (cfg.method == Method::HybridInterleave) {
        SolverConfig sub = cfg;
        if (iteration % 2 == 0) {
            auto o = try_new_step(w, sub, ctx);
            if (o) return std::move(*o);
            return exact_step(w, sub, ctx);
        }
        return euclid_step(w, sub, ctx);
    }
    // compare mode
    auto new_out = try_new_step(w, cfg, ctx);
    if (!new_out) return exact_step(w, cfg, ctx);
    StepOutcome euclid_out = euclid_step(w, cfg, ctx);
    long sn = outcome_size(*new_out, cfg.size_metric);
    long se = outcome_size(euclid_out, cfg.size_metric);
    if (se < sn) return euclid_out;
    return std::move(*new_out);  // ties favor the new method
}

namespace {

// Tie-break among purely algebraic functions for the closing solve.
FuncId choose_final_target(const Uode& w) {
    std::optional<FuncId> best;
    PivotKey best_key{};
    for (const auto& [f, op] : w.lhs.terms) {
        if (op.order() != 0) continue;
        const RatFunc& a0 = op.coeff(0);
        PivotKey key{0, a0.total_degree(), a0.term_count(), -f.value};
        if (!best || key < best_key) {
            best = f;
            best_key = key;
        }
    }
    return *best;
}

void commit(SolveResult& res, Uode& w, StepOutcome&& o) {
    for (auto& s : o.subs) res.subs.push_back(std::move(s));
    for (auto& r : o.records) res.trace.push_back(std::move(r));
    w = std::move(o.next);
}

}  // namespace

int SolveResult::iteration_count() const {
    int n = 0;
    for (const auto& r : trace)
        n += (r.kind == StepKind::New || r.kind == StepKind::Euclid ||
              r.kind == StepKind::Exact);
    return n;
}

SolveResult solve(const Uode& w0, const SolverConfig& cfg, Session& ctx) {
    SolveResult res;
    Uode w = w0;
    const std::vector<FuncId> originals = w.functions();

    auto finish = [&](std::optional<Uode> residual) {
        res.residual = std::move(residual);
        // Parametric functions: everything referenced that was never
        // solved for.
        std::set<FuncId> targets, referenced;
        for (const auto& s : res.subs) {
            targets.insert(s.target);
            for (const auto& [f, op] : s.rhs.terms) referenced.insert(f);
        }
        for (const auto& [f, op] : w.lhs.terms) referenced.insert(f);
        if (res.residual)
            for (const auto& [f, op] : res.residual->lhs.terms)
                referenced.insert(f);
        if (res.subs.empty() && !res.residual)
            for (FuncId f : originals) referenced.insert(f);
        for (FuncId f : referenced)
            if (!targets.count(f)) res.parametric.push_back(f);
        res.explicit_solution = back_substitute(res.subs, res.parametric, ctx);
        res.explicit_solution.residual = res.residual;
        return res;
    };

    if (w.lhs.terms.empty()) {
        res.inconsistent = !w.lhs.inhom.is_zero();
        return finish(std::nullopt);
    }
    if (w.func_count() == 1) {
        const auto& [f, op] = *w.lhs.terms.begin();
        if (op.order() == 0) {
            // 0 = a f + b fixes the function outright.
            LinDiffExpr rhs;
            rhs.inhom = -(w.lhs.inhom / op.coeff(0));
            res.subs.push_back(Substitution{f, std::move(rhs)});
            StepRecord rec = make_record(StepKind::FinalAlgebraic, w, w);
            rec.pivot = f;
            res.trace.push_back(std::move(rec));
            return finish(std::nullopt);
        }
        return finish(w);
    }

    int iteration = 0;
    while (w.func_count() >= 2 && w.min_order() >= 1) {
        bool all_exact = true;
        for (const auto& [f, op] : w.lhs.terms)
            all_exact &= split(op).algebraic_part.is_zero();

        StepOutcome o;
        if (all_exact && cfg.method != Method::Euclid) {
            o = exact_step(w, cfg, ctx);
        } else {
            switch (cfg.method) {
                case Method::New: {
                    auto r = try_new_step(w, cfg, ctx);
                    o = std::move(*r);  // non-exact here
                    break;
                }
                case Method::Euclid:
                    o = euclid_step(w, cfg, ctx);
                    break;
                default:
                    o = hybrid_step(w, cfg, ctx, iteration);
            }
            ++iteration;
        }
        commit(res, w, std::move(o));
        if (cfg.absorb_gcd && !w.lhs.terms.empty()) {
            Uode before = w;
            auto [absorbed, asubs] = absorb_gcd(w, ctx);
            if (!asubs.empty()) {
                StepRecord rec = make_record(StepKind::Absorb, before, absorbed);
                for (const auto& s : asubs) {
                    rec.pivot = s.target;
                    rec.introduced.push_back(s.rhs.terms.begin()->first);
                }
                res.trace.push_back(std::move(rec));
                for (auto& s : asubs) res.subs.push_back(std::move(s));
                w = std::move(absorbed);
            }
        }
        if (w.lhs.terms.empty()) break;
    }

    if (w.lhs.terms.empty()) {
        res.inconsistent = !w.lhs.inhom.is_zero();
        return finish(std::nullopt);
    }
    if (w.func_count() == 1 && w.min_order() >= 1) return finish(w);

    // One function occurs purely algebraically: solve for it.
    if (w.func_count() == 1) {
        const auto& [f, op] = *w.lhs.terms.begin();
        LinDiffExpr rhs;
        rhs.inhom = -(w.lhs.inhom / op.coeff(0));
        res.subs.push_back(Substitution{f, std::move(rhs)});
        StepRecord rec = make_record(StepKind::FinalAlgebraic, w, w);
        rec.pivot = f;
        res.trace.push_back(std::move(rec));
        return finish(std::nullopt);
    }

    FuncId target = choose_final_target(w);
    RatFunc a0 = w.lhs.terms.at(target).coeff(0);

    if (cfg.avoid_denominators && !a0.is_constant()) {
        // Scale the surviving functions so the division by a0 cancels.
        std::vector<FuncId> others;
        for (const auto& [f, op] : w.lhs.terms)
            if (!(f == target)) others.push_back(f);
        for (FuncId f : others) {
            int nj = w.lhs.terms.at(f).order();
            Uode before = w;
            auto [scaled, sub] = scale_function(w, f, a0.pow(nj + 1), ctx);
            StepRecord rec = make_record(StepKind::Scale, before, scaled);
            rec.pivot = f;
            rec.introduced = {sub.rhs.terms.begin()->first};
            rec.definition = sub.rhs;
            res.trace.push_back(std::move(rec));
            res.subs.push_back(std::move(sub));
            w = std::move(scaled);
        }
        a0 = w.lhs.terms.at(target).coeff(0);
    }

    LinDiffExpr rhs;
    RatFunc neg_inv = -(RatFunc::constant(1) / a0);
    for (const auto& [f, op] : w.lhs.terms) {
        if (f == target) continue;
        rhs.add_term(f, left_scale(op, neg_inv, ctx));
    }
    rhs.inhom = w.lhs.inhom * neg_inv;
    res.subs.push_back(Substitution{target, std::move(rhs)});
    StepRecord rec = make_record(StepKind::FinalAlgebraic, w, w);
    rec.pivot = target;
    res.trace.push_back(std::move(rec));
    return finish(std::nullopt);
}

}  // namespace uode
