#include "uode/poly.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "uode/errors.hpp"

namespace uode {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw MathError("division by zero");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

Rat rat_gcd(const Rat& a, const Rat& b) {
    if (a == 0) return abs(b);
    if (b == 0) return abs(a);
    Int gn, ld;
    mpz_gcd(gn.get_mpz_t(), a.get_num().get_mpz_t(), b.get_num().get_mpz_t());
    mpz_lcm(ld.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
    return make_rat(gn, ld);
}

// ---------------------------------------------------------------- Monomial

Monomial Monomial::variable(const VarKey& v, int exp) {
    Monomial m;
    if (exp != 0) m.vars_.push_back({v, exp});
    return m;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [v, e] : vars_) d += e;
    return d;
}

int Monomial::exponent_of(const VarKey& v) const {
    for (const auto& [w, e] : vars_)
        if (w == v) return e;
    return 0;
}

Monomial Monomial::times(const Monomial& o) const {
    Monomial r;
    r.vars_.reserve(vars_.size() + o.vars_.size());
    auto a = vars_.begin(), b = o.vars_.begin();
    while (a != vars_.end() || b != o.vars_.end()) {
        if (b == o.vars_.end() || (a != vars_.end() && a->first < b->first)) {
            r.vars_.push_back(*a++);
        } else if (a == vars_.end() || b->first < a->first) {
            r.vars_.push_back(*b++);
        } else {
            int e = a->second + b->second;
            if (e != 0) r.vars_.push_back({a->first, e});
            ++a;
            ++b;
        }
    }
    return r;
}

std::optional<Monomial> Monomial::divided_by(const Monomial& o) const {
    Monomial r;
    auto a = vars_.begin();
    for (const auto& [v, e] : o.vars_) {
        while (a != vars_.end() && a->first < v) r.vars_.push_back(*a++);
        if (a == vars_.end() || !(a->first == v) || a->second < e)
            return std::nullopt;
        if (a->second > e) r.vars_.push_back({v, a->second - e});
        ++a;
    }
    while (a != vars_.end()) r.vars_.push_back(*a++);
    return r;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
    // Walk both variable lists from the highest-ranked end.
    auto ia = a.vars_.rbegin(), ib = b.vars_.rbegin();
    while (ia != a.vars_.rend() || ib != b.vars_.rend()) {
        if (ib == b.vars_.rend()) return 1;  // a has a variable b lacks
        if (ia == a.vars_.rend()) return -1;
        if (ia->first == ib->first) {
            if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
            ++ia;
            ++ib;
        } else if (ib->first < ia->first) {
            return 1;  // a's highest outstanding variable outranks b's
        } else {
            return -1;
        }
    }
    return 0;
}

// -------------------------------------------------------------------- Poly

namespace {
bool term_before(const Term& x, const Term& y) {
    return Monomial::compare(x.mono, y.mono) > 0;  // leading first
}
}  // namespace

Poly Poly::constant(const Rat& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({Monomial(), c});
    return p;
}

Poly Poly::variable(const VarKey& v, int exp) {
    Poly p;
    p.terms_.push_back({Monomial::variable(v, exp), Rat(1)});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    Poly p;
    p.terms_ = std::move(terms);
    p.normalize();
    return p;
}

void Poly::normalize() {
    std::sort(terms_.begin(), terms_.end(), term_before);
    std::vector<Term> merged;
    merged.reserve(terms_.size());
    for (auto& t : terms_) {
        if (!merged.empty() && merged.back().mono == t.mono)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(std::move(t));
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff == 0; });
    terms_ = std::move(merged);
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_one() &&
           terms_[0].coeff == 1;
}

Rat Poly::constant_value() const {
    if (terms_.empty()) return Rat(0);
    return terms_[0].coeff;
}

int Poly::total_degree() const {
    int d = -1;
    for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
    return d;
}

bool Poly::contains(const VarKey& v) const {
    for (const auto& t : terms_)
        if (t.mono.contains(v)) return true;
    return false;
}

std::optional<VarKey> Poly::lowest_var() const {
    std::optional<VarKey> best;
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mono.vars())
            if (!best || v < *best) best = v;
    return best;
}

void Poly::collect_vars(std::vector<VarKey>& out) const {
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mono.vars())
            if (std::find(out.begin(), out.end(), v) == out.end())
                out.push_back(v);
}

Poly poly_add_impl(const Poly& p, const Poly& q, bool negate_q) {
    Poly r;
    r.terms_.reserve(p.terms_.size() + q.terms_.size());
    auto a = p.terms_.begin(), b = q.terms_.begin();
    while (a != p.terms_.end() || b != q.terms_.end()) {
        int cmp;
        if (a == p.terms_.end())
            cmp = -1;
        else if (b == q.terms_.end())
            cmp = 1;
        else
            cmp = Monomial::compare(a->mono, b->mono);
        if (cmp > 0) {
            r.terms_.push_back(*a++);
        } else if (cmp < 0) {
            r.terms_.push_back({b->mono, negate_q ? Rat(-b->coeff) : b->coeff});
            ++b;
        } else {
            Rat c = negate_q ? Rat(a->coeff - b->coeff) : Rat(a->coeff + b->coeff);
            if (c != 0) r.terms_.push_back({a->mono, std::move(c)});
            ++a;
            ++b;
        }
    }
    return r;
}

Poly Poly::operator-() const {
    Poly r(*this);
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
}

Poly Poly::operator+(const Poly& o) const { return poly_add_impl(*this, o, false); }
Poly Poly::operator-(const Poly& o) const { return poly_add_impl(*this, o, true); }

Poly Poly::operator*(const Poly& o) const {
    if (is_zero() || o.is_zero()) return Poly();
    struct MonoLess {
        bool operator()(const Monomial& a, const Monomial& b) const {
            return Monomial::compare(a, b) > 0;
        }
    };
    std::map<Monomial, Rat, MonoLess> acc;
    for (const auto& ta : terms_)
        for (const auto& tb : o.terms_)
            acc[ta.mono.times(tb.mono)] += ta.coeff * tb.coeff;
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto& [m, c] : acc)
        if (c != 0) r.terms_.push_back({m, std::move(c)});
    return r;
}

Poly Poly::times(const Rat& c) const {
    if (c == 0) return Poly();
    Poly r(*this);
    for (auto& t : r.terms_) t.coeff *= c;
    return r;
}

Poly Poly::times(const Term& t) const {
    if (t.coeff == 0) return Poly();
    Poly r;
    r.terms_.reserve(terms_.size());
    for (const auto& s : terms_)
        r.terms_.push_back({s.mono.times(t.mono), s.coeff * t.coeff});
    // multiplying by a single term preserves the ordering
    return r;
}

Poly Poly::pow(int e) const {
    Poly r = Poly::constant(1);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

bool Poly::operator==(const Poly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i)
        if (!(terms_[i].mono == o.terms_[i].mono) ||
            terms_[i].coeff != o.terms_[i].coeff)
            return false;
    return true;
}

int Poly::degree_in(const VarKey& v) const {
    int d = is_zero() ? -1 : 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent_of(v));
    return d;
}

Poly Poly::coeff_of(const VarKey& v, int k) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        if (t.mono.exponent_of(v) != k) continue;
        auto rest = t.mono.divided_by(Monomial::variable(v, k));
        out.push_back({*rest, t.coeff});
    }
    return Poly::from_terms(std::move(out));
}

Rat Poly::rational_content() const {
    if (is_zero()) return Rat(0);
    Rat g(0);
    for (const auto& t : terms_) g = rat_gcd(g, t.coeff);
    if (leading().coeff < 0) g = -g;
    return g;
}

Poly normalize_primitive(const Poly& p) {
    if (p.is_zero()) return p;
    return p.times(Rat(1) / p.rational_content());
}

std::optional<Poly> exact_divide(const Poly& p, const Poly& d) {
    if (d.is_zero()) throw MathError("division by zero");
    Poly r = p, q;
    while (!r.is_zero()) {
        auto m = r.leading().mono.divided_by(d.leading().mono);
        if (!m) return std::nullopt;
        Term t{*m, r.leading().coeff / d.leading().coeff};
        q = q + Poly::from_terms({t});
        r = r - d.times(t);
    }
    return q;
}

// ------------------------------------------------------------------- gcd

namespace {

// Coefficients of p viewed as univariate in v, index 0 = constant term.
std::vector<Poly> univar_coeffs(const Poly& p, const VarKey& v) {
    int d = p.degree_in(v);
    std::vector<Poly> cs;
    cs.reserve(d + 1);
    for (int k = 0; k <= d; ++k) cs.push_back(p.coeff_of(v, k));
    return cs;
}

Poly content_in(const Poly& p, const VarKey& v) {
    Poly g;
    for (const auto& c : univar_coeffs(p, v)) g = poly_gcd(g, c);
    return g;
}

// Pseudo-remainder of p by q in the variable v.
Poly prem(Poly p, const Poly& q, const VarKey& v) {
    const int dq = q.degree_in(v);
    const Poly lq = q.coeff_of(v, dq);
    while (!p.is_zero() && p.degree_in(v) >= dq) {
        int dp = p.degree_in(v);
        Poly lp = p.coeff_of(v, dp);
        Poly shift = Poly::variable(v, dp - dq);
        p = p * lq - q * shift * lp;
    }
    return p;
}

}  // namespace

namespace {

// Coprimality certificate for two primitive univariate polynomials: at a
// point beyond twice both Cauchy root bounds, every nonconstant divisor
// evaluates to at least 2 in absolute value, so an integer gcd of 1 at
// that point proves the polynomial gcd is constant.
bool certified_coprime_univariate(const Poly& a, const Poly& b, const VarKey& v) {
    auto ints = [&](const Poly& p, std::vector<Int>& out) {
        out.assign(p.degree_in(v) + 1, Int(0));
        for (const auto& t : p.terms()) {
            if (t.coeff.get_den() != 1) return false;
            if (t.mono.vars().size() > 1) return false;
            if (!t.mono.is_one() && !(t.mono.vars()[0].first == v)) return false;
            out[t.mono.exponent_of(v)] = t.coeff.get_num();
        }
        return true;
    };
    std::vector<Int> ca, cb;
    if (!ints(a, ca) || !ints(b, cb)) return false;

    auto cauchy = [](const std::vector<Int>& c) {
        Int m(0);
        for (const auto& x : c) {
            Int ax = abs(x);
            if (ax > m) m = ax;
        }
        Int lc = abs(c.back());
        return Int(1 + m / lc + 1);
    };
    Int xi = 2 * std::max(cauchy(ca), cauchy(cb)) + 2;
    auto horner = [&](const std::vector<Int>& c) {
        Int acc(0);
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * xi + *it;
        return acc;
    };
    Int g;
    mpz_gcd(g.get_mpz_t(), horner(ca).get_mpz_t(), horner(cb).get_mpz_t());
    return g == 1;
}

}  // namespace

Poly poly_gcd(const Poly& p_in, const Poly& q_in) {
    if (p_in.is_zero()) return normalize_primitive(q_in);
    if (q_in.is_zero()) return normalize_primitive(p_in);
    if (p_in.is_constant() || q_in.is_constant()) return Poly::constant(1);

    // A variable occurring on one side only cannot occur in the gcd;
    // replace that side by its content with respect to it.
    Poly p = p_in, q = q_in;
    while (true) {
        std::vector<VarKey> pv, qv;
        p.collect_vars(pv);
        q.collect_vars(qv);
        std::optional<VarKey> strip_p, strip_q;
        for (const VarKey& v : pv)
            if (!q.contains(v)) {
                strip_p = v;
                break;
            }
        for (const VarKey& v : qv)
            if (!p.contains(v)) {
                strip_q = v;
                break;
            }
        if (!strip_p && !strip_q) break;
        if (strip_p) p = content_in(p, *strip_p);
        if (strip_q) q = content_in(q, *strip_q);
        if (p.is_zero()) return normalize_primitive(q);
        if (q.is_zero()) return normalize_primitive(p);
        if (p.is_constant() || q.is_constant()) return Poly::constant(1);
    }

    // One shared variable with integer coefficients: try the cheap
    // coprimality certificate before any remainder sequence.
    {
        std::vector<VarKey> pv;
        p.collect_vars(pv);
        if (pv.size() == 1) {
            Poly pp = normalize_primitive(p), qq = normalize_primitive(q);
            if (certified_coprime_univariate(pp, qq, pv[0]))
                return Poly::constant(1);
        }
    }

    // Main variable: the shared one of lowest combined degree, so linear
    // indeterminates are eliminated before long univariate sequences run.
    std::vector<VarKey> vars;
    p.collect_vars(vars);
    std::optional<VarKey> main;
    long best = 0;
    for (const VarKey& v : vars) {
        int dp = p.degree_in(v), dq = q.degree_in(v);
        long cost = static_cast<long>(std::max(dp, dq)) * 64 + std::min(dp, dq);
        if (!main || cost < best || (cost == best && v < *main)) {
            main = v;
            best = cost;
        }
    }
    const VarKey v = *main;

    auto primitive_in = [&](const Poly& r) {
        Poly c = content_in(r, v);
        return normalize_primitive(*exact_divide(r, c));
    };

    Poly cg = poly_gcd(content_in(p, v), content_in(q, v));
    Poly a = primitive_in(p);
    Poly b = primitive_in(q);
    if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);

    while (true) {
        Poly r = prem(a, b, v);
        if (r.is_zero()) break;
        if (r.degree_in(v) == 0) {
            b = Poly::constant(1);
            break;
        }
        a = std::move(b);
        b = primitive_in(r);
    }
    return normalize_primitive(cg * b);
}

Poly poly_lcm(const Poly& p, const Poly& q) {
    if (p.is_zero() || q.is_zero()) return Poly();
    Poly g = poly_gcd(p, q);
    return normalize_primitive(*exact_divide(p * q, g));
}

// ------------------------------------------------------------------ debug

std::string Poly::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rat c = t.coeff;
        if (!first) os << (c < 0 ? " - " : " + ");
        else if (c < 0) os << "-";
        first = false;
        Rat ac = abs(c);
        bool wrote = false;
        if (ac != 1 || t.mono.is_one()) {
            os << ac.get_str();
            wrote = true;
        }
        for (const auto& [v, e] : t.mono.vars()) {
            if (wrote) os << "*";
            os << v.name;
            for (int i = 0; i < v.order; ++i) os << "'";
            if (e != 1) os << "^" << e;
            wrote = true;
        }
    }
    return os.str();
}

}  // namespace uode
