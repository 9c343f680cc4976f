#pragma once

#include <utility>
#include <vector>

#include "uode/solver.hpp"

namespace uode {

// Linear ODE system over one function universe.
struct OdeSystem {
    std::vector<Uode> equations;
};

// Right Euclidean division A = Q o B + R with order(R) < order(B).
std::pair<DiffOp, DiffOp> right_divide(const DiffOp& A, const DiffOp& B,
                                       const Session& ctx);

// Remainder sequence of right_divide; the result right-divides both
// inputs, normalized to leading coefficient 1.
DiffOp right_gcd(const DiffOp& A, const DiffOp& B, const Session& ctx);

struct DecoupleResult {
    SubstList subs;
    std::vector<Uode> decoupled;         // one single-function ODE each
    ExplicitSolution explicit_solution;  // partial when residuals remain
    std::vector<StepRecord> trace;
    bool inconsistent = false;
    std::string note;  // set when a function is forced to a fixed value
};

// Repeatedly solve the equation with the fewest functions and substitute
// its solution into the rest; overdetermined single-function leftovers
// are reduced pairwise by right Euclidean division.
DecoupleResult decouple(const OdeSystem& sys, const SolverConfig& cfg,
                        Session& ctx);

}  // namespace uode
