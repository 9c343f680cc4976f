#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uode/indeterminates.hpp"

namespace uode {

using Rat = mpq_class;
using Int = mpz_class;

Rat make_rat(const Int& num, const Int& den);
Rat rat_gcd(const Rat& a, const Rat& b);  // gcd(p,r)/lcm(q,s) for p/q, r/s

// Product of powers of indeterminates.  Variables are kept sorted
// ascending by VarKey with strictly positive exponents; the empty
// monomial is 1.
class Monomial {
  public:
    Monomial() = default;
    static Monomial variable(const VarKey& v, int exp = 1);

    const std::vector<std::pair<VarKey, int>>& vars() const { return vars_; }
    bool is_one() const { return vars_.empty(); }
    int total_degree() const;
    int exponent_of(const VarKey& v) const;
    bool contains(const VarKey& v) const { return exponent_of(v) > 0; }

    Monomial times(const Monomial& o) const;
    // Componentwise quotient; nullopt when o does not divide *this.
    std::optional<Monomial> divided_by(const Monomial& o) const;

    // Lexicographic comparison, highest-ranked variable decides first.
    static int compare(const Monomial& a, const Monomial& b);

    bool operator==(const Monomial& o) const { return vars_ == o.vars_; }

  private:
    std::vector<std::pair<VarKey, int>> vars_;
};

struct Term {
    Monomial mono;
    Rat coeff;
};

// Sparse multivariate polynomial over Q.  Terms are kept sorted with the
// leading (largest) monomial first; no zero coefficients; the zero
// polynomial has no terms.
class Poly {
  public:
    Poly() = default;
    static Poly zero() { return Poly(); }
    static Poly constant(const Rat& c);
    static Poly constant(long c) { return constant(Rat(c)); }
    static Poly variable(const VarKey& v, int exp = 1);
    static Poly from_terms(std::vector<Term> terms);  // sorts and merges

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    // Constant value; requires is_constant().
    Rat constant_value() const;

    std::size_t term_count() const { return terms_.size(); }
    int total_degree() const;  // -1 for zero
    const Term& leading() const { return terms_.front(); }

    bool contains(const VarKey& v) const;
    // Smallest-ranked variable occurring, if any.
    std::optional<VarKey> lowest_var() const;
    void collect_vars(std::vector<VarKey>& out) const;

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly times(const Rat& c) const;
    Poly times(const Term& t) const;
    Poly pow(int e) const;  // e >= 0

    bool operator==(const Poly& o) const;

    // Degree in v and coefficient of v^k (a polynomial in the other vars).
    int degree_in(const VarKey& v) const;
    Poly coeff_of(const VarKey& v, int k) const;

    // Rational content: gcd of coefficient numerators over lcm of
    // denominators, signed so content * primitive has the original sign
    // and the primitive part has positive integer leading coefficient.
    Rat rational_content() const;

    std::string str() const;  // debug form

  private:
    std::vector<Term> terms_;
    void normalize();
    friend Poly poly_add_impl(const Poly&, const Poly&, bool);
};

// Exact quotient, or nullopt when d does not divide p.
std::optional<Poly> exact_divide(const Poly& p, const Poly& d);

// Primitive-PRS gcd, normalized primitive with positive leading
// coefficient; poly_gcd(p, 0) = normalized p; poly_gcd(0, 0) = 0.
Poly poly_gcd(const Poly& p, const Poly& q);

Poly poly_lcm(const Poly& p, const Poly& q);

// p scaled to integer-primitive form with positive leading coefficient.
Poly normalize_primitive(const Poly& p);

}  // namespace uode
