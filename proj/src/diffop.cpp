#include "uode/diffop.hpp"

#include "uode/errors.hpp"

namespace uode {

namespace {
void trim(std::vector<RatFunc>& v) {
    while (!v.empty() && v.back().is_zero()) v.pop_back();
}

Rat binom(int n, int k) {
    Int b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return Rat(b);
}
}  // namespace

StdOp::StdOp(std::vector<RatFunc> coeffs) : c_(std::move(coeffs)) { trim(c_); }

const RatFunc& StdOp::coeff(int j) const {
    static const RatFunc zero;
    if (j < 0 || j >= static_cast<int>(c_.size())) return zero;
    return c_[j];
}

DiffOp::DiffOp(std::vector<RatFunc> coeffs) : a_(std::move(coeffs)) { trim(a_); }

const RatFunc& DiffOp::coeff(int k) const {
    static const RatFunc zero;
    if (k < 0 || k >= static_cast<int>(a_.size())) return zero;
    return a_[k];
}

long DiffOp::term_count() const {
    long n = 0;
    for (const auto& c : a_) n += c.term_count();
    return n;
}

StdOp factored_to_std(const DiffOp& a, const Session& ctx) {
    if (a.is_zero()) return StdOp();
    int n = a.order();
    std::vector<RatFunc> c(n + 1);
    for (int k = 0; k <= n; ++k) {
        RatFunc deriv = a.coeff(k);
        for (int j = k; j >= 0; --j) {
            c[j] = c[j] + RatFunc(binom(k, j)) * deriv;
            if (j > 0) deriv = differentiate(deriv, ctx);
        }
    }
    return StdOp(std::move(c));
}

DiffOp std_to_factored(const StdOp& s, const Session& ctx) {
    if (s.is_zero()) return DiffOp();
    int n = s.order();
    std::vector<RatFunc> a(n + 1);
    for (int j = n; j >= 0; --j) {
        RatFunc v = s.coeff(j);
        for (int k = j + 1; k <= n; ++k)
            v = v - RatFunc(binom(k, j)) * derivative_n(a[k], k - j, ctx);
        a[j] = std::move(v);
    }
    return DiffOp(std::move(a));
}

SplitOp split(const DiffOp& a) {
    if (a.is_zero()) return {DiffOp(), RatFunc()};
    std::vector<RatFunc> shifted(a.coeffs().begin() + 1, a.coeffs().end());
    return {DiffOp(std::move(shifted)), a.coeff(0)};
}

DiffOp compose_mul(const DiffOp& a, const RatFunc& g) {
    if (g.is_zero()) return DiffOp();
    std::vector<RatFunc> out;
    out.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) out.push_back(c * g);
    return DiffOp(std::move(out));
}

DiffOp compose_D(const DiffOp& a, int m, const Session& ctx) {
    // One unit of m applies D^k(h f') = D^{k+1}(h f) - D^k(h' f) slotwise.
    DiffOp cur = a;
    for (int step = 0; step < m; ++step) {
        if (cur.is_zero()) return cur;
        std::vector<RatFunc> out(cur.coeffs().size() + 1);
        for (int k = 0; k <= cur.order(); ++k) {
            out[k + 1] = out[k + 1] + cur.coeff(k);
            out[k] = out[k] - differentiate(cur.coeff(k), ctx);
        }
        cur = DiffOp(std::move(out));
    }
    return cur;
}

DiffOp op_add(const DiffOp& a, const DiffOp& b) {
    std::vector<RatFunc> out(std::max(a.coeffs().size(), b.coeffs().size()));
    for (std::size_t k = 0; k < out.size(); ++k)
        out[k] = a.coeff(static_cast<int>(k)) + b.coeff(static_cast<int>(k));
    return DiffOp(std::move(out));
}

DiffOp op_neg(const DiffOp& a) {
    std::vector<RatFunc> out;
    out.reserve(a.coeffs().size());
    for (const auto& c : a.coeffs()) out.push_back(-c);
    return DiffOp(std::move(out));
}

DiffOp op_linear(const DiffOp& a, const DiffOp& b, const RatFunc& lambda) {
    return op_add(a, compose_mul(b, lambda));
}

DiffOp compose(const DiffOp& a, const DiffOp& b, const Session& ctx) {
    // a o b = sum_j (a o D^j) o (b_j * .)
    DiffOp out;
    DiffOp a_Dj = a;
    for (int j = 0; j <= b.order(); ++j) {
        if (j > 0) a_Dj = compose_D(a_Dj, 1, ctx);
        if (!b.coeff(j).is_zero())
            out = op_add(out, compose_mul(a_Dj, b.coeff(j)));
    }
    return out;
}

DiffOp left_scale(const DiffOp& a, const RatFunc& w, const Session& ctx) {
    StdOp s = factored_to_std(a, ctx);
    std::vector<RatFunc> c;
    c.reserve(s.coeffs().size());
    for (const auto& cj : s.coeffs()) c.push_back(cj * w);
    return std_to_factored(StdOp(std::move(c)), ctx);
}

RatFunc apply(const DiffOp& a, const RatFunc& r, const Session& ctx) {
    RatFunc sum;
    for (int k = 0; k <= a.order(); ++k) {
        if (a.coeff(k).is_zero()) continue;
        sum = sum + derivative_n(a.coeff(k) * r, k, ctx);
    }
    return sum;
}

RatFunc apply(const StdOp& s, const RatFunc& r, const Session& ctx) {
    RatFunc sum;
    RatFunc d = r;
    for (int j = 0; j <= s.order(); ++j) {
        if (j > 0) d = differentiate(d, ctx);
        if (!s.coeff(j).is_zero()) sum = sum + s.coeff(j) * d;
    }
    return sum;
}

void LinDiffExpr::add_term(FuncId f, const DiffOp& op) {
    if (op.is_zero()) return;
    auto it = terms.find(f);
    if (it == terms.end()) {
        terms.emplace(f, op);
        return;
    }
    DiffOp merged = op_add(it->second, op);
    if (merged.is_zero())
        terms.erase(it);
    else
        it->second = std::move(merged);
}

long LinDiffExpr::term_count_numerators() const {
    long n = inhom.is_zero() ? 0 : static_cast<long>(inhom.num().term_count());
    for (const auto& [f, op] : terms)
        for (const auto& c : op.coeffs())
            n += static_cast<long>(c.num().term_count());
    return n;
}

bool LinDiffExpr::operator==(const LinDiffExpr& o) const {
    return terms == o.terms && inhom == o.inhom;
}

LinDiffExpr expr_add(const LinDiffExpr& a, const LinDiffExpr& b) {
    LinDiffExpr out = a;
    for (const auto& [f, op] : b.terms) out.add_term(f, op);
    out.inhom = out.inhom + b.inhom;
    return out;
}

LinDiffExpr expr_neg(const LinDiffExpr& a) {
    LinDiffExpr out;
    for (const auto& [f, op] : a.terms) out.terms.emplace(f, op_neg(op));
    out.inhom = -a.inhom;
    return out;
}

LinDiffExpr apply_expr(const DiffOp& a, const LinDiffExpr& e, const Session& ctx) {
    LinDiffExpr out;
    for (const auto& [f, op] : e.terms) out.add_term(f, compose(a, op, ctx));
    out.inhom = apply(a, e.inhom, ctx);
    return out;
}

LinDiffExpr substitute(const LinDiffExpr& e, FuncId f, const LinDiffExpr& rhs,
                       const Session& ctx) {
    auto it = e.terms.find(f);
    if (it == e.terms.end()) return e;
    LinDiffExpr out;
    for (const auto& [g, op] : e.terms)
        if (!(g == f)) out.add_term(g, op);
    out.inhom = e.inhom;
    return expr_add(out, apply_expr(it->second, rhs, ctx));
}

RatFunc evaluate(const LinDiffExpr& e, const std::map<FuncId, VarKey>& vars,
                 const Session& ctx) {
    RatFunc sum = e.inhom;
    for (const auto& [f, op] : e.terms) {
        auto it = vars.find(f);
        if (it == vars.end()) throw MathError("evaluate: unmapped function");
        sum = sum + apply(op, RatFunc::variable(it->second), ctx);
    }
    return sum;
}

}  // namespace uode
