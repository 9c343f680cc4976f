#include "uode/ratfunc.hpp"

#include "uode/errors.hpp"
#include "uode/session.hpp"

namespace uode {

namespace {
thread_local std::uint64_t g_diff_calls = 0;
}

std::uint64_t differentiate_call_count() { return g_diff_calls; }

RatFunc::RatFunc(Poly numerator, Poly denominator) {
    if (denominator.is_zero()) throw MathError("division by zero");
    if (numerator.is_zero()) {
        num_ = Poly();
        den_ = Poly::constant(1);
        return;
    }
    if (!denominator.is_constant() && !numerator.is_constant()) {
        Poly g = poly_gcd(numerator, denominator);
        if (!g.is_one()) {
            numerator = *exact_divide(numerator, g);
            denominator = *exact_divide(denominator, g);
        }
    }
    Rat lc = denominator.leading().coeff;
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        numerator = numerator.times(inv);
        denominator = denominator.times(inv);
    }
    num_ = std::move(numerator);
    den_ = std::move(denominator);
}

RatFunc RatFunc::from_coprime(Poly numerator, Poly denominator) {
    if (denominator.is_zero()) throw MathError("division by zero");
    RatFunc r;
    if (numerator.is_zero()) return r;
    Rat lc = denominator.leading().coeff;
    if (lc != 1) {
        Rat inv = Rat(1) / lc;
        numerator = numerator.times(inv);
        denominator = denominator.times(inv);
    }
    r.num_ = std::move(numerator);
    r.den_ = std::move(denominator);
    return r;
}

RatFunc RatFunc::operator-() const {
    RatFunc r(*this);
    r.num_ = -r.num_;
    return r;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_.is_one() && o.den_.is_one()) {
        RatFunc r;
        r.num_ = num_ + o.num_;
        return r;
    }
    // Henrici: with canonical operands, only gcd(d1, d2) can cancel.
    Poly g = poly_gcd(den_, o.den_);
    if (g.is_constant()) {
        Poly num = num_ * o.den_ + o.num_ * den_;
        if (num.is_zero()) return RatFunc();
        Poly den = den_ * o.den_;
        Rat lc = den.leading().coeff;
        RatFunc r;
        r.num_ = lc == 1 ? std::move(num) : num.times(Rat(1) / lc);
        r.den_ = lc == 1 ? std::move(den) : den.times(Rat(1) / lc);
        return r;
    }
    Poly d2r = *exact_divide(o.den_, g);
    Poly num = num_ * d2r + o.num_ * *exact_divide(den_, g);
    Poly den = den_ * d2r;
    if (num.is_zero()) return RatFunc();
    Poly g2 = poly_gcd(num, g);
    if (!g2.is_constant()) {
        num = *exact_divide(num, g2);
        den = *exact_divide(den, g2);
    }
    Rat lc = den.leading().coeff;
    RatFunc r;
    r.num_ = lc == 1 ? std::move(num) : num.times(Rat(1) / lc);
    r.den_ = lc == 1 ? std::move(den) : den.times(Rat(1) / lc);
    return r;
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return RatFunc();
    if (den_.is_one() && o.den_.is_one()) {
        RatFunc r;
        r.num_ = num_ * o.num_;
        return r;
    }
    // cross-cancel, then the product is canonical by construction
    Poly n1 = num_, d2 = o.den_;
    if (!n1.is_constant() && !d2.is_constant()) {
        Poly g = poly_gcd(n1, d2);
        if (!g.is_constant()) {
            n1 = *exact_divide(n1, g);
            d2 = *exact_divide(d2, g);
        }
    }
    Poly n2 = o.num_, d1 = den_;
    if (!n2.is_constant() && !d1.is_constant()) {
        Poly g = poly_gcd(n2, d1);
        if (!g.is_constant()) {
            n2 = *exact_divide(n2, g);
            d1 = *exact_divide(d1, g);
        }
    }
    Poly num = n1 * n2;
    Poly den = d1 * d2;
    Rat lc = den.leading().coeff;
    RatFunc r;
    r.num_ = lc == 1 ? std::move(num) : num.times(Rat(1) / lc);
    r.den_ = lc == 1 ? std::move(den) : den.times(Rat(1) / lc);
    return r;
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
    if (o.is_zero()) throw MathError("division by zero");
    if (is_zero()) return RatFunc();
    return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::inverse() const {
    if (is_zero()) throw MathError("division by zero");
    return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    RatFunc r = RatFunc(Poly::constant(1));
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

int RatFunc::total_degree() const {
    if (is_zero()) return -1;
    return num_.total_degree() + den_.total_degree();
}

long RatFunc::term_count() const {
    long n = static_cast<long>(num_.term_count());
    if (!den_.is_one()) n += static_cast<long>(den_.term_count());
    return n;
}

namespace {

RatFunc var_derivative(const VarKey& v, const Session& ctx) {
    switch (v.kind) {
        case VarKind::BaseVar:
            return RatFunc::constant(1);
        case VarKind::GivenFunc:
            return RatFunc::variable(given_var(v.name, v.order + 1));
        case VarKind::Integral:
            return ctx.integrand(v);
        case VarKind::Constant:
            return RatFunc();
    }
    return RatFunc();
}

// Derivative of a polynomial; a RatFunc because integral indeterminates
// differentiate to their (rational) integrands.
RatFunc poly_derivative(const Poly& p, const Session& ctx) {
    RatFunc sum;
    for (const auto& t : p.terms()) {
        for (const auto& [v, e] : t.mono.vars()) {
            auto reduced = t.mono.divided_by(Monomial::variable(v));
            Poly part = Poly::from_terms({Term{*reduced, t.coeff * e}});
            sum = sum + RatFunc(std::move(part)) * var_derivative(v, ctx);
        }
    }
    return sum;
}

bool has_integral_var(const Poly& p) {
    for (const auto& t : p.terms())
        for (const auto& [v, e] : t.mono.vars())
            if (v.kind == VarKind::Integral) return true;
    return false;
}

// The gcd(d, d') reduction below needs every irreducible factor of the
// denominator to have a nonzero derivative, which constant-only factors
// would break.
bool has_constant_var(const Poly& p) {
    for (const auto& t : p.terms())
        for (const auto& [v, e] : t.mono.vars())
            if (v.kind == VarKind::Constant) return true;
    return false;
}

// Plain polynomial derivative, valid when no integral indeterminate occurs.
Poly poly_derivative_plain(const Poly& p) {
    std::vector<Term> out;
    for (const auto& t : p.terms()) {
        for (const auto& [v, e] : t.mono.vars()) {
            if (v.kind == VarKind::Constant) continue;
            auto reduced = t.mono.divided_by(Monomial::variable(v));
            Monomial m = v.kind == VarKind::BaseVar
                             ? *reduced
                             : reduced->times(Monomial::variable(
                                   given_var(v.name, v.order + 1)));
            out.push_back({std::move(m), t.coeff * e});
        }
    }
    return Poly::from_terms(std::move(out));
}

}  // namespace

RatFunc differentiate(const RatFunc& r, const Session& ctx) {
    ++g_diff_calls;
    if (r.is_zero()) return RatFunc();
    if (has_integral_var(r.num()) || has_integral_var(r.den())) {
        RatFunc dn = poly_derivative(r.num(), ctx);
        if (r.is_polynomial()) return dn;
        RatFunc dd = poly_derivative(r.den(), ctx);
        RatFunc den(r.den() * r.den());
        return (dn * RatFunc(r.den()) - RatFunc(r.num()) * dd) / den;
    }
    if (r.is_polynomial()) return RatFunc(poly_derivative_plain(r.num()));
    // (n/d)' = (n'd - nd')/d^2; with a canonical operand the reduction to
    // canonical form divides out exactly gcd(d, d'), so one small gcd
    // replaces the full-size one.
    const Poly& n = r.num();
    const Poly& d = r.den();
    Poly dn = poly_derivative_plain(n);
    Poly dd = poly_derivative_plain(d);
    Poly num = dn * d - n * dd;
    if (num.is_zero()) return RatFunc();
    if (has_constant_var(d) || dd.is_zero())
        return RatFunc(std::move(num), d * d);
    Poly g = poly_gcd(d, dd);
    if (g.is_constant()) return RatFunc::from_coprime(std::move(num), d * d);
    Poly dred = *exact_divide(d, g);
    return RatFunc::from_coprime(*exact_divide(num, g), d * dred);
}

RatFunc derivative_n(const RatFunc& r, int n, const Session& ctx) {
    RatFunc out = r;
    for (int i = 0; i < n; ++i) out = differentiate(out, ctx);
    return out;
}

RatFunc integrate_formal(const RatFunc& r, Session& ctx) {
    if (r.is_zero()) return RatFunc();
    bool closed_form = r.is_polynomial();
    if (closed_form) {
        for (const auto& t : r.num().terms())
            for (const auto& [v, e] : t.mono.vars())
                if (v.kind != VarKind::BaseVar && v.kind != VarKind::Constant)
                    closed_form = false;
    }
    if (closed_form) {
        // Termwise power rule in the base variable; constants ride along.
        VarKey x = ctx.base();
        std::vector<Term> out;
        for (const auto& t : r.num().terms()) {
            int e = t.mono.exponent_of(x);
            out.push_back({t.mono.times(Monomial::variable(x)),
                           t.coeff / Rat(e + 1)});
        }
        return RatFunc(Poly::from_terms(std::move(out)));
    }
    return RatFunc::variable(ctx.integral_of(r));
}

RatFunc content_gcd(std::span<const RatFunc> cs) {
    bool any = false;
    for (const auto& c : cs) any |= !c.is_zero();
    if (cs.empty() || !any) throw MathError("content gcd of an all-zero list");

    Poly num_gcd;
    Rat cont(0);
    Poly den_lcm = Poly::constant(1);
    for (const auto& c : cs) {
        if (c.is_zero()) continue;
        num_gcd = poly_gcd(num_gcd, c.num());
        cont = rat_gcd(cont, c.num().rational_content());
        den_lcm = poly_lcm(den_lcm, c.den());
    }
    return RatFunc(num_gcd.times(abs(cont)), den_lcm);
}

RatFunc substitute_var(const RatFunc& r, const VarKey& v, const RatFunc& value) {
    auto eval_poly = [&](const Poly& p) {
        RatFunc sum;
        for (const auto& t : p.terms()) {
            int e = t.mono.exponent_of(v);
            if (e == 0) {
                sum = sum + RatFunc(Poly::from_terms({t}));
                continue;
            }
            auto rest = t.mono.divided_by(Monomial::variable(v, e));
            RatFunc part(Poly::from_terms({Term{*rest, t.coeff}}));
            sum = sum + part * value.pow(e);
        }
        return sum;
    };
    if (!r.num().contains(v) && !r.den().contains(v)) return r;
    return eval_poly(r.num()) / eval_poly(r.den());
}

}  // namespace uode
