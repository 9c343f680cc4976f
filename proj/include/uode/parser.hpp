#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "uode/odes.hpp"

namespace uode {

// A parsed .ode file: declarations plus equations in standard form,
// converted to the factored representation on load.
//
//   document := decl* equation+
//   decl     := ("vars" | "funcs" | "given" | "consts") id ("," id)* ";"
//   equation := "eq" ":" expr "=" expr ";"
//   expr     := ["+"|"-"] term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := primary ("^" integer)?
//   primary  := number | funcref | "(" expr ")" | "Int" "(" expr ")"
//   funcref  := id "'"* | "D" "(" id "," integer ")"
//
// Line comments start with '#'.  Equations must be linear in the declared
// functions; coefficients are rational expressions in the base variable,
// given functions and their derivatives, and declared constants.
struct OdeDocument {
    std::shared_ptr<Session> session;
    std::vector<FuncId> funcs;  // declaration order
    std::vector<Uode> equations;
};

OdeDocument parse_document(const std::string& text);

// A .sol file: one "func = expr;" assignment per solved function.
// Identifiers not declared in the document are registered as parametric
// functions.
struct SolutionDocument {
    std::vector<std::pair<FuncId, LinDiffExpr>> assignments;
};

SolutionDocument parse_solution(const std::string& text, OdeDocument& doc);

// Expression parser for tests and tools: same grammar as equation sides.
LinDiffExpr parse_expression(const std::string& text, OdeDocument& doc);

}  // namespace uode
