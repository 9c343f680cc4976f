#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <vector>

#include "uode/odes.hpp"

namespace uode {

// Fully back-substituted solution: every substitution target mapped to an
// expression over parametric functions only.  Presentation layers usually
// restrict the map to user-declared functions.
struct ExplicitSolution {
    std::map<FuncId, LinDiffExpr> assignments;
    std::vector<FuncId> parametric;
    std::optional<Uode> residual;  // single-function constraint, if any

    bool is_parametric(FuncId f) const;
};

// Term statistics of the single-fraction expanded form.
struct TermCount {
    long numerator_terms = 0;
    long denominator_terms = 1;
    bool operator==(const TermCount&) const = default;
};

// Resolve the substitution list from the last-derived entry backwards;
// every rhs ends up referencing parametric functions only.  Throws on a
// dangling reference.
ExplicitSolution back_substitute(const SubstList& subs,
                                 const std::vector<FuncId>& parametric,
                                 const Session& ctx);

// Substitute sol into the equation and decide whether it vanishes
// identically; a residual ODE is used as a rewrite rule for the
// constrained function's leading derivative.
bool verify(const Uode& original, const ExplicitSolution& sol, const Session& ctx);

// Same, with additional single-function constraints (decoupled systems).
bool verify_with_residuals(const Uode& original, const ExplicitSolution& sol,
                           std::span<const Uode> residuals, const Session& ctx);

// Verification through the substitution list: push the equation through L
// front to back, cancelling after each rewrite; whatever survives must be
// a left multiple of the residual constraint.  Exact, and avoids building
// the (potentially huge) explicit solution.
bool verify_sequential(const Uode& original, const SubstList& subs,
                       const std::optional<Uode>& residual, const Session& ctx);

TermCount term_count(const LinDiffExpr& e, const Session& ctx);
TermCount term_count(const RatFunc& r);

// Apply the substitutions front to back, canonicalizing after each.
LinDiffExpr apply_subst_sequence(const LinDiffExpr& e, const SubstList& subs,
                                 const Session& ctx);

}  // namespace uode
