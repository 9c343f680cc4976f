#pragma once

#include <json.hpp>
#include <string>

#include "uode/parser.hpp"
#include "uode/solver.hpp"
#include "uode/systems.hpp"

namespace uode {

// Text forms re-parse under the document grammar.
std::string print_poly(const Poly& p, const Session& ctx);
std::string print_ratfunc(const RatFunc& r, const Session& ctx);
std::string print_expr(const LinDiffExpr& e, const Session& ctx);  // std form
std::string print_equation(const Uode& w, const Session& ctx);
std::string print_document(const OdeDocument& doc);

// Substitution list in derivation order, one assignment per line.
std::string print_subs(const SubstList& subs, const Session& ctx);
// Explicit assignments for user-declared functions plus parametric and
// residual annotations as comment lines.
std::string print_explicit(const ExplicitSolution& sol, const Session& ctx);

std::string print_trace(const std::vector<StepRecord>& trace, const Session& ctx);

nlohmann::json expr_json(const LinDiffExpr& e, const Session& ctx);
nlohmann::json solve_json(const SolveResult& res, const Session& ctx);
nlohmann::json decouple_json(const DecoupleResult& res, const Session& ctx);

}  // namespace uode
