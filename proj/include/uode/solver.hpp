#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "uode/odes.hpp"
#include "uode/solution.hpp"

namespace uode {

// Everything one iteration produced: the transformed equation, the
// substitutions to append to L (possibly several when scalings were
// interleaved), and one record per event.
struct StepOutcome {
    Uode next;
    std::vector<Substitution> subs;
    std::vector<StepRecord> records;
};

// Lowest order among functions with nonvanishing algebraic part; ties by
// lower total degree of that part, then fewer terms, then newest function.
FuncId choose_pivot_new(const Uode& w);

// One step of the dual method: factor D out once, let the defining
// relation of the new function become the equation, substitute the pivot.
// Returns nullopt when every algebraic part vanishes (the exact case).
std::optional<StepOutcome> try_new_step(const Uode& w, const SolverConfig& cfg,
                                        Session& ctx);

// One right-Euclid step: cancel the leading term of one operator against
// another; the inhomogeneity is untouched.
StepOutcome euclid_step(const Uode& w, const SolverConfig& cfg, Session& ctx);

// Integrate once: operators drop their outer D, the inhomogeneity is
// integrated (plus a fresh constant unless disabled).
StepOutcome exact_step(const Uode& w, const SolverConfig& cfg, Session& ctx);

// Divide out coefficient gcds per function, one substitution each.
std::pair<Uode, std::vector<Substitution>> absorb_gcd(const Uode& w, Session& ctx);

// Replace f by c * f_new; multiplications only.
std::pair<Uode, Substitution> scale_function(const Uode& w, FuncId f,
                                             const RatFunc& c, Session& ctx);

// Compare mode: run both candidate steps, keep the smaller (ties favor the
// new method).  Interleave mode: alternate, starting with the new method;
// `iteration` counts the non-exact steps taken so far.
StepOutcome hybrid_step(const Uode& w, const SolverConfig& cfg, Session& ctx,
                        int iteration = 0);

struct SolveResult {
    SubstList subs;                      // L, in derivation order
    std::vector<FuncId> parametric;      // free + residual-constrained
    std::optional<Uode> residual;
    ExplicitSolution explicit_solution;  // P
    std::vector<StepRecord> trace;
    bool inconsistent = false;

    // New/Euclid/exact steps (absorption and scalings not counted).
    int iteration_count() const;
};

SolveResult solve(const Uode& w, const SolverConfig& cfg, Session& ctx);

long expr_size(const LinDiffExpr& e, SizeMetric metric);

}  // namespace uode
