#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "uode/poly.hpp"

namespace uode {

class Session;

// Canonical rational function: denominator nonzero with leading
// coefficient +1 under the monomial order, primitive gcd(num, den) = 1,
// zero stored as 0/1.
class RatFunc {
  public:
    RatFunc() : num_(), den_(Poly::constant(1)) {}
    explicit RatFunc(Poly numerator) : RatFunc(std::move(numerator), Poly::constant(1)) {}
    explicit RatFunc(const Rat& c) : RatFunc(Poly::constant(c)) {}
    RatFunc(Poly numerator, Poly denominator);  // throws MathError on 0 den

    static RatFunc variable(const VarKey& v) { return RatFunc(Poly::variable(v)); }
    static RatFunc constant(long c) { return RatFunc(Poly::constant(c)); }
    // Caller guarantees gcd(num, den) = 1; only the monic scaling is applied.
    static RatFunc from_coprime(Poly numerator, Poly denominator);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }
    bool is_polynomial() const { return den_.is_one(); }

    RatFunc operator-() const;
    RatFunc operator+(const RatFunc& o) const;
    RatFunc operator-(const RatFunc& o) const;
    RatFunc operator*(const RatFunc& o) const;
    RatFunc operator/(const RatFunc& o) const;  // throws on zero divisor
    RatFunc pow(int e) const;                   // negative e inverts
    RatFunc inverse() const;

    bool operator==(const RatFunc& o) const {
        return num_ == o.num_ && den_ == o.den_;
    }

    // Combined total degree of numerator and denominator; -1 for zero.
    int total_degree() const;
    // Additive terms in numerator plus denominator (denominator 1 not counted).
    long term_count() const;

  private:
    Poly num_, den_;
};

// d/dx with the quotient rule; given-function indeterminates step their
// derivative order, constants vanish, formal integrals reproduce their
// recorded integrand.  Increments the differentiation counter.
RatFunc differentiate(const RatFunc& r, const Session& ctx);

RatFunc derivative_n(const RatFunc& r, int n, const Session& ctx);

// Exact antiderivative when r is polynomial in the base variable (and
// integration constants); otherwise an opaque integral indeterminate with
// recorded integrand.  differentiate(integrate_formal(r)) == r.
RatFunc integrate_formal(const RatFunc& r, Session& ctx);

// gcd of numerators over lcm of denominators; errors on an all-zero list.
RatFunc content_gcd(std::span<const RatFunc> cs);

// Substitute value for every occurrence of v.
RatFunc substitute_var(const RatFunc& r, const VarKey& v, const RatFunc& value);

// Calls to differentiate() on this thread; used to assert that
// multiplicative operator updates perform no differentiation.
std::uint64_t differentiate_call_count();

}  // namespace uode
