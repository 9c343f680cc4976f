#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "uode/errors.hpp"
#include "uode/printer.hpp"
#include "uode/solution.hpp"
#include "uode/solver.hpp"
#include "uode/systems.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitInconsistent = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw uode::Error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Options {
    std::string method = "new";
    bool absorb = false;
    bool avoid_den = false;
    bool no_integration_constant = false;
    std::string format = "subs";
    bool trace = false;
};

uode::SolverConfig to_config(const Options& o) {
    uode::SolverConfig cfg;
    if (o.method == "new")
        cfg.method = uode::Method::New;
    else if (o.method == "euclid")
        cfg.method = uode::Method::Euclid;
    else if (o.method == "hybrid-compare")
        cfg.method = uode::Method::HybridCompare;
    else if (o.method == "hybrid-interleave")
        cfg.method = uode::Method::HybridInterleave;
    else
        throw CLI::ValidationError("--method", "unknown method " + o.method);
    cfg.absorb_gcd = o.absorb;
    cfg.avoid_denominators = o.avoid_den;
    cfg.integration_constant = !o.no_integration_constant;
    return cfg;
}

void add_solver_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--method", o.method, "new, euclid, hybrid-compare or hybrid-interleave")
        ->check(CLI::IsMember({"new", "euclid", "hybrid-compare", "hybrid-interleave"}));
    cmd->add_flag("--absorb-gcd", o.absorb, "absorb coefficient gcds into new functions");
    cmd->add_flag("--avoid-den", o.avoid_den, "introduce scalings that prevent denominators");
    cmd->add_flag("--no-integration-constant", o.no_integration_constant,
                  "omit the constant when integrating an exact equation");
    cmd->add_flag("--trace", o.trace, "print one comment line per step");
}

int run_solve(const std::string& path, const Options& o) {
    uode::OdeDocument doc = uode::parse_document(read_file(path));
    if (doc.equations.size() != 1) {
        std::cerr << "solve expects exactly one equation (use decouple for systems)\n";
        return kExitUsage;
    }
    uode::Session& ctx = *doc.session;
    uode::SolveResult res = uode::solve(doc.equations[0], to_config(o), ctx);
    if (res.inconsistent) {
        std::cerr << "inconsistent equation: 0 = nonzero\n";
        return kExitInconsistent;
    }
    if (o.format == "json") {
        std::cout << uode::solve_json(res, ctx).dump(2) << "\n";
    } else if (o.format == "explicit") {
        std::cout << uode::print_explicit(res.explicit_solution, ctx);
    } else {
        std::cout << uode::print_subs(res.subs, ctx);
        if (!res.parametric.empty()) {
            std::cout << "# parametric:";
            for (auto f : res.parametric) std::cout << " " << ctx.func_name(f);
            std::cout << "\n";
        }
        if (res.residual)
            std::cout << "# residual " << uode::print_equation(*res.residual, ctx)
                      << "\n";
    }
    if (o.trace) std::cout << uode::print_trace(res.trace, ctx);
    return kExitOk;
}

int run_stats(const std::string& path, const Options& o) {
    uode::OdeDocument doc = uode::parse_document(read_file(path));
    if (doc.equations.size() != 1) {
        std::cerr << "stats expects exactly one equation\n";
        return kExitUsage;
    }
    uode::Session& ctx = *doc.session;
    uode::SolveResult res = uode::solve(doc.equations[0], to_config(o), ctx);
    if (res.inconsistent) {
        std::cerr << "inconsistent equation: 0 = nonzero\n";
        return kExitInconsistent;
    }
    if (o.format == "json") {
        std::cout << uode::solve_json(res, ctx)["stats"].dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& [f, e] : res.explicit_solution.assignments) {
        if (!ctx.is_user_function(f)) continue;
        uode::TermCount tc = uode::term_count(e, ctx);
        std::cout << ctx.func_name(f) << ": " << tc.numerator_terms << "/"
                  << tc.denominator_terms << "\n";
    }
    std::cout << "steps: " << res.iteration_count() << "\n";
    if (o.trace) std::cout << uode::print_trace(res.trace, ctx);
    return kExitOk;
}

int run_verify(const std::string& ode_path, const std::string& sol_path) {
    uode::OdeDocument doc = uode::parse_document(read_file(ode_path));
    uode::SolutionDocument sol = uode::parse_solution(read_file(sol_path), doc);
    uode::Session& ctx = *doc.session;

    uode::ExplicitSolution es;
    for (auto& [f, e] : sol.assignments) es.assignments[f] = e;
    for (uode::FuncId f : doc.funcs)
        if (!es.assignments.count(f)) es.parametric.push_back(f);

    bool ok = true;
    for (const auto& eq : doc.equations) ok &= uode::verify(eq, es, ctx);
    std::cout << (ok ? "true" : "false") << "\n";
    return ok ? kExitOk : kExitUsage;
}

int run_decouple(const std::string& path, const Options& o) {
    uode::OdeDocument doc = uode::parse_document(read_file(path));
    uode::Session& ctx = *doc.session;
    uode::OdeSystem sys{doc.equations};
    uode::DecoupleResult res = uode::decouple(sys, to_config(o), ctx);
    if (res.inconsistent) {
        std::cerr << "inconsistent system\n";
        return kExitInconsistent;
    }
    if (o.format == "json") {
        std::cout << uode::decouple_json(res, ctx).dump(2) << "\n";
    } else {
        std::cout << uode::print_subs(res.subs, ctx);
        for (const auto& w : res.decoupled)
            std::cout << "# decoupled " << uode::print_equation(w, ctx) << "\n";
        if (!res.note.empty()) std::cout << "# note: " << res.note << "\n";
    }
    if (o.trace) std::cout << uode::print_trace(res.trace, ctx);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact parametric solutions of underdetermined linear ODEs"};
    app.require_subcommand(1);

    Options opt;
    std::string input, solution_file;

    CLI::App* solve = app.add_subcommand("solve", "solve one underdetermined ODE");
    solve->add_option("file", input, ".ode input")->required();
    add_solver_flags(solve, opt);
    solve->add_option("--format", opt.format, "subs, explicit or json")
        ->check(CLI::IsMember({"subs", "explicit", "json"}));

    CLI::App* verify = app.add_subcommand("verify", "check a solution file");
    verify->add_option("file", input, ".ode input")->required();
    verify->add_option("solution", solution_file, ".sol file")->required();

    CLI::App* stats = app.add_subcommand("stats", "per-function term counts");
    stats->add_option("file", input, ".ode input")->required();
    add_solver_flags(stats, opt);
    stats->add_option("--format", opt.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}));

    CLI::App* dec = app.add_subcommand("decouple", "decouple an ODE system");
    dec->add_option("file", input, ".ode input")->required();
    add_solver_flags(dec, opt);
    dec->add_option("--format", opt.format, "subs or json")
        ->check(CLI::IsMember({"subs", "json"}));

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return run_solve(input, opt);
        if (verify->parsed()) return run_verify(input, solution_file);
        if (stats->parsed()) {
            if (opt.format == "text") opt.format = "subs";
            return run_stats(input, opt);
        }
        if (dec->parsed()) return run_decouple(input, opt);
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    } catch (const uode::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitParse;
    } catch (const uode::InconsistentError& e) {
        std::cerr << e.what() << "\n";
        return kExitInconsistent;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}
