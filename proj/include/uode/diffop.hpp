#pragma once

#include <map>
#include <vector>

#include "uode/session.hpp"

namespace uode {

class DiffOp;

// Operator in standard form: s applied to f is sum_j c_j * f^(j).
// Exists at the parse/print boundary only; the solver works on the
// D-factored form throughout.
class StdOp {
  public:
    StdOp() = default;
    explicit StdOp(std::vector<RatFunc> coeffs);  // c_0 .. c_n, trimmed

    const std::vector<RatFunc>& coeffs() const { return c_; }
    int order() const { return static_cast<int>(c_.size()) - 1; }  // -1: zero
    bool is_zero() const { return c_.empty(); }
    const RatFunc& coeff(int j) const;

    bool operator==(const StdOp& o) const { return c_ == o.c_; }

  private:
    std::vector<RatFunc> c_;
};

// Operator with D factored out as far as possible:
//   A f = D^n(a_n f) + ... + D(a_1 f) + a_0 f.
// Replacing f by w*f only multiplies the slots, no differentiation.
class DiffOp {
  public:
    DiffOp() = default;
    explicit DiffOp(std::vector<RatFunc> coeffs);  // a_0 .. a_n, trimmed
    static DiffOp identity() { return DiffOp({RatFunc::constant(1)}); }
    static DiffOp multiplication(RatFunc g) { return DiffOp({std::move(g)}); }

    const std::vector<RatFunc>& coeffs() const { return a_; }
    int order() const { return static_cast<int>(a_.size()) - 1; }  // -1: zero
    bool is_zero() const { return a_.empty(); }
    const RatFunc& coeff(int k) const;
    const RatFunc& leading() const { return a_.back(); }

    bool operator==(const DiffOp& o) const { return a_ == o.a_; }

    long term_count() const;  // over all slot numerators and denominators

  private:
    std::vector<RatFunc> a_;
};

// Leibniz expansion c_j = sum_{k>=j} C(k,j) a_k^(k-j).
StdOp factored_to_std(const DiffOp& a, const Session& ctx);
// Inverse, solved top-down; round-trips with factored_to_std.
DiffOp std_to_factored(const StdOp& s, const Session& ctx);

// A = D*Atilde + a0: slots a_1..a_n shifted down, plus the algebraic part.
struct SplitOp {
    DiffOp total_derivative_part;  // Atilde
    RatFunc algebraic_part;        // a0
};
SplitOp split(const DiffOp& a);

// Result applied to f equals a applied to (g*f); multiplications only.
DiffOp compose_mul(const DiffOp& a, const RatFunc& g);

// Result applied to f equals a applied to f^(m).
DiffOp compose_D(const DiffOp& a, int m, const Session& ctx);

DiffOp op_add(const DiffOp& a, const DiffOp& b);
DiffOp op_neg(const DiffOp& a);
// a + lambda*b, slotwise after scaling b.
DiffOp op_linear(const DiffOp& a, const DiffOp& b, const RatFunc& lambda);

// Full right composition: (a o b) f = a(b(f)).
DiffOp compose(const DiffOp& a, const DiffOp& b, const Session& ctx);

// Left multiplication by a function: f -> w * a(f).  Refactoring costs
// differentiations; used only for normalization at boundaries.
DiffOp left_scale(const DiffOp& a, const RatFunc& w, const Session& ctx);

// Apply to a concrete coefficient-field element.
RatFunc apply(const DiffOp& a, const RatFunc& r, const Session& ctx);
RatFunc apply(const StdOp& s, const RatFunc& r, const Session& ctx);

// Linear differential expression sum_i A_i f_i + inhom.  Zero operators
// are never stored.
struct LinDiffExpr {
    std::map<FuncId, DiffOp> terms;
    RatFunc inhom;

    void add_term(FuncId f, const DiffOp& op);
    bool references(FuncId f) const { return terms.count(f) > 0; }
    bool is_zero() const { return terms.empty() && inhom.is_zero(); }
    long term_count_numerators() const;

    bool operator==(const LinDiffExpr& o) const;
};

LinDiffExpr expr_add(const LinDiffExpr& a, const LinDiffExpr& b);
LinDiffExpr expr_neg(const LinDiffExpr& a);

// A applied to the expression: distributes over the map, inhom via apply.
LinDiffExpr apply_expr(const DiffOp& a, const LinDiffExpr& e, const Session& ctx);

// Replace f by rhs throughout e (e must not be rhs's own target).
LinDiffExpr substitute(const LinDiffExpr& e, FuncId f, const LinDiffExpr& rhs,
                       const Session& ctx);

// Evaluate with each function f_i modeled as the given-function
// indeterminate named by vars[f_i]; exact, used for verification.
RatFunc evaluate(const LinDiffExpr& e, const std::map<FuncId, VarKey>& vars,
                 const Session& ctx);

}  // namespace uode
