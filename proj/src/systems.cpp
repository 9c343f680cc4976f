#include "uode/systems.hpp"

#include <algorithm>
#include <map>

#include "uode/errors.hpp"

namespace uode {

std::pair<DiffOp, DiffOp> right_divide(const DiffOp& A, const DiffOp& B,
                                       const Session& ctx) {
    if (B.is_zero()) throw MathError("right division by the zero operator");
    DiffOp Q, R = A;
    while (!R.is_zero() && R.order() >= B.order()) {
        int m = R.order() - B.order();
        RatFunc t = R.leading() / B.leading();
        std::vector<RatFunc> slots(m + 1);
        slots[m] = t;
        DiffOp qterm(std::move(slots));
        DiffOp prod = compose(qterm, B, ctx);
        DiffOp R2 = op_add(R, op_neg(prod));
        if (!R2.is_zero() && R2.order() >= R.order())
            throw Error("right division failed to reduce the order");
        R = std::move(R2);
        Q = op_add(Q, qterm);
    }
    return {Q, R};
}

DiffOp right_gcd(const DiffOp& A, const DiffOp& B, const Session& ctx) {
    if (A.is_zero() && B.is_zero())
        throw MathError("right gcd of two zero operators");
    DiffOp a = A, b = B;
    if (a.is_zero()) std::swap(a, b);
    while (!b.is_zero()) {
        DiffOp r = right_divide(a, b, ctx).second;
        a = std::move(b);
        b = std::move(r);
    }
    return left_scale(a, a.leading().inverse(), ctx);
}

namespace {

// Flip the overall sign so the highest-order operator's top coefficient
// leads positive; cosmetic, applied to emitted single-function ODEs.
Uode normalize_sign(const Uode& w) {
    if (w.lhs.terms.empty()) return w;
    const DiffOp* top = nullptr;
    int best = -1;
    for (const auto& [f, op] : w.lhs.terms)
        if (op.order() > best) {
            best = op.order();
            top = &op;
        }
    if (top->leading().num().leading().coeff > 0) return w;
    LinDiffExpr neg = expr_neg(w.lhs);
    return Uode::make(std::move(neg));
}

struct WorkItem {
    Uode eq;
    std::size_t input_index;
};

}  // namespace

DecoupleResult decouple(const OdeSystem& sys, const SolverConfig& cfg,
                        Session& ctx) {
    DecoupleResult res;
    std::vector<WorkItem> work;
    for (std::size_t i = 0; i < sys.equations.size(); ++i)
        work.push_back({sys.equations[i], i});

    long guard = 0;
    for (const auto& w : work) guard += w.eq.order_sum() + 4;
    guard = guard * 8 + 64;

    while (true) {
        if (--guard < 0) throw Error("decoupling failed to terminate");
        // Drop satisfied 0 = 0 equations; flag contradictions.
        std::erase_if(work, [&](const WorkItem& it) {
            if (!it.eq.lhs.terms.empty()) return false;
            if (!it.eq.lhs.inhom.is_zero()) res.inconsistent = true;
            return !res.inconsistent;
        });
        if (res.inconsistent) return res;

        // Pick the multi-function equation with the fewest functions,
        // then the lowest total order, then input order.
        WorkItem* pick = nullptr;
        for (auto& it : work) {
            if (it.eq.func_count() < 2) continue;
            if (!pick) {
                pick = &it;
                continue;
            }
            auto key = [](const WorkItem& w) {
                return std::tuple(w.eq.func_count(), w.eq.order_sum(),
                                  w.input_index);
            };
            if (key(it) < key(*pick)) pick = &it;
        }
        if (!pick) break;

        SolveResult sr = solve(pick->eq, cfg, ctx);
        if (sr.inconsistent) {
            res.inconsistent = true;
            return res;
        }
        std::size_t solved_index = pick->input_index;
        work.erase(work.begin() + (pick - work.data()));
        for (auto& s : sr.subs) res.subs.push_back(std::move(s));
        for (auto& r : sr.trace) res.trace.push_back(std::move(r));
        if (sr.residual) work.push_back({*sr.residual, solved_index});
        for (auto& it : work)
            it.eq = Uode::make(apply_subst_sequence(it.eq.lhs, res.subs, ctx));
    }

    // Group leftover single-function equations and reduce each group by
    // right Euclidean division, inhomogeneities carried along.
    std::map<FuncId, std::vector<std::pair<DiffOp, RatFunc>>> groups;
    for (const auto& it : work) {
        const auto& [f, op] = *it.eq.lhs.terms.begin();
        groups[f].push_back({op, it.eq.lhs.inhom});
    }

    for (auto& [f, eqs] : groups) {
        while (eqs.size() > 1 && !res.inconsistent) {
            std::sort(eqs.begin(), eqs.end(), [](const auto& a, const auto& b) {
                return a.first.order() > b.first.order();
            });
            auto [A, alpha] = eqs[0];
            auto [B, beta] = eqs[1];
            eqs.erase(eqs.begin());
            auto [Q, R] = right_divide(A, B, ctx);
            RatFunc rho = alpha + apply(Q, -beta, ctx);
            if (R.is_zero()) {
                if (!rho.is_zero()) res.inconsistent = true;
                continue;  // dependent equation
            }
            eqs.push_back({R, rho});
        }
        if (res.inconsistent) return res;
        const auto& [op, inhom] = eqs.front();
        if (op.order() == 0) {
            // Forced to a fixed value; recorded as the last substitution.
            LinDiffExpr rhs;
            rhs.inhom = -(inhom / op.coeff(0));
            res.subs.push_back(Substitution{f, std::move(rhs)});
            res.note += (res.note.empty() ? "" : "; ") + ctx.func_name(f) +
                        " is forced to a fixed value";
        } else {
            LinDiffExpr e;
            e.add_term(f, op);
            e.inhom = inhom;
            res.decoupled.push_back(normalize_sign(Uode::make(std::move(e))));
        }
    }

    // Assemble the partial explicit solution.
    std::set<FuncId> targets, referenced;
    for (const auto& s : res.subs) {
        targets.insert(s.target);
        for (const auto& [g, op] : s.rhs.terms) referenced.insert(g);
    }
    for (const auto& w : res.decoupled)
        for (const auto& [g, op] : w.lhs.terms) referenced.insert(g);
    std::vector<FuncId> parametric;
    for (FuncId g : referenced)
        if (!targets.count(g)) parametric.push_back(g);
    res.explicit_solution = back_substitute(res.subs, parametric, ctx);
    return res;
}

}  // namespace uode
