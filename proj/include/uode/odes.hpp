#pragma once

#include <optional>
#include <vector>

#include "uode/diffop.hpp"

namespace uode {

// One underdetermined linear ODE, 0 = sum_i A_i f_i + inhom, with every
// stored operator nonzero.
struct Uode {
    LinDiffExpr lhs;

    static Uode make(LinDiffExpr e) { return Uode{std::move(e)}; }

    std::size_t func_count() const { return lhs.terms.size(); }
    bool underdetermined() const { return func_count() >= 2 && min_order() >= 1; }

    int order_of(FuncId f) const {
        auto it = lhs.terms.find(f);
        return it == lhs.terms.end() ? -1 : it->second.order();
    }
    int min_order() const {
        int m = -1;
        for (const auto& [f, op] : lhs.terms)
            m = (m < 0) ? op.order() : std::min(m, op.order());
        return m;
    }
    int max_order() const {
        int m = -1;
        for (const auto& [f, op] : lhs.terms) m = std::max(m, op.order());
        return m;
    }
    int order_sum() const {
        int s = 0;
        for (const auto& [f, op] : lhs.terms) s += op.order();
        return s;
    }
    std::vector<FuncId> functions() const {
        std::vector<FuncId> out;
        out.reserve(lhs.terms.size());
        for (const auto& [f, op] : lhs.terms) out.push_back(f);
        return out;
    }
};

// One rewrite f = rhs; the target never occurs in its own rhs.
struct Substitution {
    FuncId target;
    LinDiffExpr rhs;
};

using SubstList = std::vector<Substitution>;

enum class Method { New, Euclid, HybridInterleave, HybridCompare };
enum class SizeMetric { TermCount, DegreeSum };

struct SolverConfig {
    Method method = Method::New;
    bool absorb_gcd = false;
    bool avoid_denominators = false;
    bool integration_constant = true;
    SizeMetric size_metric = SizeMetric::TermCount;
};

enum class StepKind { New, Euclid, Exact, Absorb, Scale, FinalAlgebraic };

struct StepRecord {
    StepKind kind;
    std::optional<FuncId> pivot;      // function solved for / eliminated
    std::vector<FuncId> introduced;   // freshly created functions
    int order_sum_before = 0;
    int order_sum_after = 0;
    long size_before = 0;             // numerator term counts of the ODE
    long size_after = 0;
    LinDiffExpr definition;           // what the introduced function stands for
};

const char* step_kind_name(StepKind k);

}  // namespace uode
