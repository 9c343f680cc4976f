#include <pybind11/pybind11.h>

#include "uode/errors.hpp"
#include "uode/printer.hpp"
#include "uode/solution.hpp"
#include "uode/solver.hpp"
#include "uode/systems.hpp"

namespace py = pybind11;

namespace {

uode::SolverConfig make_config(const std::string& method, bool absorb_gcd,
                               bool avoid_denominators, bool integration_constant) {
    uode::SolverConfig cfg;
    if (method == "new")
        cfg.method = uode::Method::New;
    else if (method == "euclid")
        cfg.method = uode::Method::Euclid;
    else if (method == "hybrid-compare")
        cfg.method = uode::Method::HybridCompare;
    else if (method == "hybrid-interleave")
        cfg.method = uode::Method::HybridInterleave;
    else
        throw py::value_error("unknown method: " + method);
    cfg.absorb_gcd = absorb_gcd;
    cfg.avoid_denominators = avoid_denominators;
    cfg.integration_constant = integration_constant;
    return cfg;
}

std::string solve_text(const std::string& text, const std::string& method,
                       bool absorb_gcd, bool avoid_denominators,
                       bool integration_constant) {
    uode::OdeDocument doc = uode::parse_document(text);
    if (doc.equations.size() != 1)
        throw py::value_error("solve expects exactly one equation");
    uode::SolveResult res = uode::solve(
        doc.equations[0],
        make_config(method, absorb_gcd, avoid_denominators, integration_constant),
        *doc.session);
    return uode::solve_json(res, *doc.session).dump();
}

std::string solve_subs_text(const std::string& text, const std::string& method) {
    uode::OdeDocument doc = uode::parse_document(text);
    if (doc.equations.size() != 1)
        throw py::value_error("solve expects exactly one equation");
    uode::SolveResult res =
        uode::solve(doc.equations[0], make_config(method, false, false, true),
                    *doc.session);
    return uode::print_subs(res.subs, *doc.session);
}

bool verify_text(const std::string& ode_text, const std::string& sol_text) {
    uode::OdeDocument doc = uode::parse_document(ode_text);
    uode::SolutionDocument sol = uode::parse_solution(sol_text, doc);
    uode::ExplicitSolution es;
    for (auto& [f, e] : sol.assignments) es.assignments[f] = e;
    for (uode::FuncId f : doc.funcs)
        if (!es.assignments.count(f)) es.parametric.push_back(f);
    bool ok = true;
    for (const auto& eq : doc.equations) ok &= uode::verify(eq, es, *doc.session);
    return ok;
}

std::string decouple_text(const std::string& text, const std::string& method) {
    uode::OdeDocument doc = uode::parse_document(text);
    uode::OdeSystem sys{doc.equations};
    uode::DecoupleResult res =
        uode::decouple(sys, make_config(method, false, false, true), *doc.session);
    return uode::decouple_json(res, *doc.session).dump();
}

}  // namespace

PYBIND11_MODULE(_uode, m) {
    m.doc() = "exact parametric solutions of underdetermined linear ODEs";

    m.def("solve_json", &solve_text, py::arg("text"), py::arg("method") = "new",
          py::arg("absorb_gcd") = false, py::arg("avoid_denominators") = false,
          py::arg("integration_constant") = true,
          "Solve one equation; returns the result as a JSON string.");
    m.def("solve_subs", &solve_subs_text, py::arg("text"),
          py::arg("method") = "new",
          "Solve one equation; returns the substitution list as text.");
    m.def("verify", &verify_text, py::arg("ode_text"), py::arg("sol_text"),
          "Check a solution file against every equation of a document.");
    m.def("decouple_json", &decouple_text, py::arg("text"),
          py::arg("method") = "new",
          "Decouple an ODE system; returns the result as a JSON string.");

    py::register_exception<uode::ParseError>(m, "OdeParseError");
    py::register_exception<uode::InconsistentError>(m, "InconsistentError");
}
