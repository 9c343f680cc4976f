#include "uode/parser.hpp"

#include <cctype>
#include <map>

#include "uode/errors.hpp"

namespace uode {

namespace {

enum class Tok { Id, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
  public:
    explicit Lexer(const std::string& text) : s_(text) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (c == '#') {
                while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
            } else if (c == '\n') {
                ++line_;
                col_ = 1;
                ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++col_;
                ++pos_;
            } else {
                break;
            }
        }
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_ = {Tok::End, "", line_, col_};
            return;
        }
        char c = s_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   (std::isalnum(static_cast<unsigned char>(s_[pos_])) ||
                    s_[pos_] == '_'))
                take_char();
            tok_.kind = Tok::Id;
            tok_.text = s_.substr(start, pos_ - start);
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < s_.size() &&
                   std::isdigit(static_cast<unsigned char>(s_[pos_])))
                take_char();
            tok_.kind = Tok::Number;
            tok_.text = s_.substr(start, pos_ - start);
        } else {
            tok_.kind = Tok::Punct;
            tok_.text = std::string(1, c);
            take_char();
        }
    }
    void take_char() {
        ++pos_;
        ++col_;
    }

    const std::string& s_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    Token tok_;
};

// Linear form during expression evaluation: per-function coefficients of
// each derivative order, plus a scalar part.
struct LinearForm {
    std::map<FuncId, std::map<int, RatFunc>> parts;
    RatFunc scalar;

    bool pure_scalar() const { return parts.empty(); }
};

LinearForm lf_scalar(RatFunc r) {
    LinearForm f;
    f.scalar = std::move(r);
    return f;
}

LinearForm lf_neg(LinearForm f) {
    for (auto& [id, m] : f.parts)
        for (auto& [k, c] : m) c = -c;
    f.scalar = -f.scalar;
    return f;
}

LinearForm lf_add(LinearForm a, const LinearForm& b) {
    for (const auto& [id, m] : b.parts)
        for (const auto& [k, c] : m) {
            RatFunc& slot = a.parts[id][k];
            slot = slot + c;
        }
    a.scalar = a.scalar + b.scalar;
    return a;
}

// d/dx with the product rule; coefficients differentiate, orders shift.
LinearForm lf_diff(const LinearForm& f, const Session& ctx) {
    LinearForm out;
    for (const auto& [id, m] : f.parts)
        for (const auto& [k, c] : m) {
            RatFunc& up = out.parts[id][k + 1];
            up = up + c;
            RatFunc dc = differentiate(c, ctx);
            if (!dc.is_zero()) {
                RatFunc& same = out.parts[id][k];
                same = same + dc;
            }
        }
    out.scalar = differentiate(f.scalar, ctx);
    return out;
}

void lf_clean(LinearForm& f) {
    for (auto it = f.parts.begin(); it != f.parts.end();) {
        std::erase_if(it->second, [](const auto& kv) { return kv.second.is_zero(); });
        it = it->second.empty() ? f.parts.erase(it) : std::next(it);
    }
}

class Parser {
  public:
    Parser(const std::string& text, OdeDocument& doc)
        : lex_(text), doc_(doc), ctx_(*doc.session) {}

    // --- entry points ---

    void parse_document_body() {
        bool saw_vars = false;
        while (lex_.peek().kind == Tok::Id &&
               (lex_.peek().text == "vars" || lex_.peek().text == "funcs" ||
                lex_.peek().text == "given" || lex_.peek().text == "consts")) {
            Token kw = lex_.take();
            auto ids = id_list();
            expect(";");
            if (kw.text == "vars") {
                if (saw_vars || ids.size() != 1)
                    fail(kw, "exactly one base variable must be declared");
                saw_vars = true;
                base_name_ = ids[0].text;
                if (base_name_ != ctx_.base_name())
                    fail(kw, "session base variable mismatch");
            } else if (kw.text == "funcs") {
                for (auto& id : ids) {
                    check_fresh(id);
                    doc_.funcs.push_back(ctx_.declare_function(id.text));
                }
            } else if (kw.text == "given") {
                for (auto& id : ids) {
                    check_fresh(id);
                    ctx_.declare_given(id.text);
                }
            } else {
                for (auto& id : ids) {
                    check_fresh(id);
                    ctx_.declare_constant(id.text);
                }
            }
        }
        while (lex_.peek().kind == Tok::Id && lex_.peek().text == "eq") {
            Token kw = lex_.take();
            expect(":");
            LinearForm lhs = expr();
            expect("=");
            LinearForm rhs = expr();
            expect(";");
            LinearForm diff = lf_add(lhs, lf_neg(rhs));
            lf_clean(diff);
            if (diff.parts.empty() && diff.scalar.is_zero())
                fail(kw, "equation is trivially 0 = 0");
            doc_.equations.push_back(to_uode(diff));
        }
        if (lex_.peek().kind != Tok::End)
            fail(lex_.peek(), "unexpected trailing input");
        if (doc_.equations.empty())
            fail(lex_.peek(), "no equations");
    }

    void parse_solution_body(SolutionDocument& out) {
        while (lex_.peek().kind == Tok::Id) {
            Token id = lex_.take();
            auto f = ctx_.find_function(id.text);
            if (!f) fail(id, "assignment to undeclared function " + id.text);
            expect("=");
            LinearForm rhs = expr();
            expect(";");
            lf_clean(rhs);
            out.assignments.push_back({*f, to_expr(rhs)});
        }
        if (lex_.peek().kind != Tok::End)
            fail(lex_.peek(), "unexpected trailing input");
    }

    LinDiffExpr parse_single_expression() {
        LinearForm f = expr();
        if (lex_.peek().kind != Tok::End)
            fail(lex_.peek(), "unexpected trailing input");
        lf_clean(f);
        return to_expr(f);
    }

    void allow_new_functions(bool on) { allow_new_functions_ = on; }

  private:
    // --- helpers ---

    [[noreturn]] void fail(const Token& at, const std::string& msg) {
        throw ParseError(msg, at.line, at.col);
    }

    void expect(const std::string& p) {
        Token t = lex_.take();
        if (t.text != p) fail(t, "expected '" + p + "'");
    }

    std::vector<Token> id_list() {
        std::vector<Token> ids;
        while (true) {
            Token t = lex_.take();
            if (t.kind != Tok::Id) fail(t, "expected identifier");
            ids.push_back(t);
            if (lex_.peek().text != ",") break;
            lex_.take();
        }
        return ids;
    }

    void check_fresh(const Token& id) {
        if (id.text == "D" || id.text == "Int")
            fail(id, "reserved identifier " + id.text);
        if (ctx_.name_taken(id.text) || id.text == base_name_)
            fail(id, "identifier declared twice: " + id.text);
    }


    // --- grammar ---

    LinearForm expr() {
        bool neg = false;
        if (lex_.peek().text == "+" || lex_.peek().text == "-")
            neg = lex_.take().text == "-";
        LinearForm acc = term();
        if (neg) acc = lf_neg(std::move(acc));
        while (lex_.peek().text == "+" || lex_.peek().text == "-") {
            bool minus = lex_.take().text == "-";
            LinearForm t = term();
            acc = lf_add(std::move(acc), minus ? lf_neg(std::move(t)) : t);
        }
        return acc;
    }

    LinearForm term() {
        Token at = lex_.peek();
        LinearForm acc = factor();
        while (lex_.peek().text == "*" || lex_.peek().text == "/") {
            bool div = lex_.take().text == "/";
            LinearForm rhs = factor();
            if (div) {
                if (!rhs.pure_scalar())
                    fail(at, "division by an unknown function");
                if (rhs.scalar.is_zero()) fail(at, "division by zero");
                for (auto& [id, m] : acc.parts)
                    for (auto& [k, c] : m) c = c / rhs.scalar;
                acc.scalar = acc.scalar / rhs.scalar;
            } else if (rhs.pure_scalar()) {
                for (auto& [id, m] : acc.parts)
                    for (auto& [k, c] : m) c = c * rhs.scalar;
                acc.scalar = acc.scalar * rhs.scalar;
            } else if (acc.pure_scalar()) {
                RatFunc s = acc.scalar;
                acc = rhs;
                for (auto& [id, m] : acc.parts)
                    for (auto& [k, c] : m) c = c * s;
                acc.scalar = acc.scalar * s;
            } else {
                fail(at, "nonlinear term: product of unknown functions");
            }
        }
        return acc;
    }

    LinearForm factor() {
        Token at = lex_.peek();
        LinearForm base = primary();
        if (lex_.peek().text == "^") {
            lex_.take();
            bool neg = false;
            if (lex_.peek().text == "-") {
                neg = true;
                lex_.take();
            }
            Token e = lex_.take();
            if (e.kind != Tok::Number) fail(e, "expected integer exponent");
            int exp = std::stoi(e.text);
            if (!base.pure_scalar()) {
                if (neg || exp != 1)
                    fail(at, "nonlinear term: power of an unknown function");
                return base;
            }
            return lf_scalar(base.scalar.pow(neg ? -exp : exp));
        }
        return base;
    }

    LinearForm primary() {
        Token t = lex_.take();
        if (t.kind == Tok::Number) {
            return lf_scalar(RatFunc(Rat(Int(t.text.c_str()))));
        }
        if (t.text == "(") {
            LinearForm inner = expr();
            expect(")");
            return inner;
        }
        if (t.kind != Tok::Id) fail(t, "expected a term");

        if (t.text == "Int") {
            expect("(");
            LinearForm inner = expr();
            expect(")");
            if (!inner.pure_scalar())
                fail(t, "Int of an unknown function is not allowed");
            return lf_scalar(RatFunc::variable(ctx_.integral_of(inner.scalar)));
        }
        if (t.text == "D") {
            // D(f, n), or more generally D(expr, n) with the product rule.
            expect("(");
            LinearForm inner = expr();
            expect(",");
            Token n = lex_.take();
            if (n.kind != Tok::Number) fail(n, "expected derivative order");
            expect(")");
            int k = std::stoi(n.text);
            for (int i = 0; i < k; ++i) inner = lf_diff(inner, ctx_);
            return inner;
        }
        int order = 0;
        while (lex_.peek().text == "'") {
            lex_.take();
            ++order;
        }
        return reference(t, order);
    }

    LinearForm reference(const Token& id, int order) {
        const std::string& name = id.text;
        if (name == ctx_.base_name()) {
            if (order > 0) fail(id, "derivative of a non-function");
            return lf_scalar(RatFunc::variable(base_var(name)));
        }
        if (ctx_.is_given(name))
            return lf_scalar(RatFunc::variable(given_var(name, order)));
        if (ctx_.is_constant(name)) {
            if (order > 0) fail(id, "derivative of a non-function");
            return lf_scalar(RatFunc::variable(constant_var(name)));
        }
        if (auto f = ctx_.find_function(name)) {
            LinearForm lf;
            lf.parts[*f][order] = RatFunc::constant(1);
            return lf;
        }
        if (allow_new_functions_) {
            FuncId f = ctx_.declare_function(name);
            doc_.funcs.push_back(f);
            LinearForm lf;
            lf.parts[f][order] = RatFunc::constant(1);
            return lf;
        }
        fail(id, "undeclared symbol " + name);
    }

    // --- conversion ---

    LinDiffExpr to_expr(const LinearForm& f) {
        LinDiffExpr e;
        for (const auto& [id, m] : f.parts) {
            int top = m.rbegin()->first;
            std::vector<RatFunc> c(top + 1);
            for (const auto& [k, coeff] : m) c[k] = coeff;
            e.add_term(id, std_to_factored(StdOp(std::move(c)), ctx_));
        }
        e.inhom = f.scalar;
        return e;
    }

    Uode to_uode(const LinearForm& f) { return Uode::make(to_expr(f)); }

    Lexer lex_;
    OdeDocument& doc_;
    Session& ctx_;
    std::string base_name_;
    bool allow_new_functions_ = false;
};

}  // namespace

OdeDocument parse_document(const std::string& text) {
    OdeDocument doc;
    doc.session = std::make_shared<Session>("x");
    // Peek at the vars declaration to name the base variable before any
    // symbol is interned.
    {
        Lexer probe(text);
        if (probe.peek().kind == Tok::Id && probe.peek().text == "vars") {
            probe.take();
            Token name = probe.take();
            if (name.kind == Tok::Id)
                doc.session = std::make_shared<Session>(name.text);
        }
    }
    Parser p(text, doc);
    p.parse_document_body();
    return doc;
}

SolutionDocument parse_solution(const std::string& text, OdeDocument& doc) {
    SolutionDocument out;
    Parser p(text, doc);
    p.allow_new_functions(true);
    p.parse_solution_body(out);
    return out;
}

LinDiffExpr parse_expression(const std::string& text, OdeDocument& doc) {
    Parser p(text, doc);
    p.allow_new_functions(true);
    return p.parse_single_expression();
}

}  // namespace uode
