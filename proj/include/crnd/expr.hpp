#pragma once

// Expression front-end.
//
//   expr    := term (('+'|'-') term)*
//   term    := factor ('*' factor)*
//   factor  := base ('^' nat)?
//   base    := '(' expr ')' | 'conj' '(' expr ')' | '-' base | literal | var
//   literal := int | int '/' int | 'i' | 'sqrt' '(' ('2'|'3') ')'
//
// Unary minus is part of `base`, so it binds tighter than '^': "-z^2" is (-z)^2.

#include "crnd/jet.hpp"

#include <cctype>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace crnd {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t pos)
        : std::runtime_error("at position " + std::to_string(pos) + ": " + msg), pos_(pos)
    {
    }
    [[nodiscard]] std::size_t position() const noexcept { return pos_; }

private:
    std::size_t pos_;
};

struct Expr {
    enum class Kind { variable, number, imaginary_unit, sqrt2, sqrt3, conj, negate, add, subtract, multiply, power };

    Kind kind = Kind::number;
    std::size_t pos = 0;
    std::string name;        // variable
    Rational value;          // number
    unsigned exponent = 0;   // power
    std::vector<Expr> args;  // operands
};

namespace detail {

class ExprParser {
public:
    ExprParser(std::string_view text, const VarSpace& vars) : text_(text), vars_(vars) {}

    Expr parse()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c)
    {
        if (!accept(c)) {
            if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
    }

    bool peek_digit()
    {
        skip_ws();
        return pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]));
    }

    bool peek_ident()
    {
        skip_ws();
        return pos_ < text_.size()
            && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_');
    }

    std::string_view digits()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail("expected an integer");
        return text_.substr(start, pos_ - start);
    }

    std::string_view ident()
    {
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size()
               && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        return text_.substr(start, pos_ - start);
    }

    static Expr node(Expr::Kind k, std::size_t pos, std::vector<Expr> args = {})
    {
        Expr e;
        e.kind = k;
        e.pos = pos;
        e.args = std::move(args);
        return e;
    }

    Expr expr()
    {
        Expr lhs = term();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (accept('+')) {
                lhs = node(Expr::Kind::add, at, {std::move(lhs), term()});
            } else if (accept('-')) {
                lhs = node(Expr::Kind::subtract, at, {std::move(lhs), term()});
            } else {
                return lhs;
            }
        }
    }

    Expr term()
    {
        Expr lhs = factor();
        for (;;) {
            skip_ws();
            const std::size_t at = pos_;
            if (!accept('*')) return lhs;
            lhs = node(Expr::Kind::multiply, at, {std::move(lhs), factor()});
        }
    }

    Expr factor()
    {
        Expr b = base();
        skip_ws();
        const std::size_t at = pos_;
        if (!accept('^')) return b;
        if (!peek_digit()) fail("exponent must be a nonnegative integer literal");
        const std::string_view d = digits();
        if (d.size() > 3 || std::stoul(std::string(d)) > 255) throw ParseError("exponent too large", at);
        Expr p = node(Expr::Kind::power, at, {std::move(b)});
        p.exponent = static_cast<unsigned>(std::stoul(std::string(d)));
        return p;
    }

    Expr base()
    {
        skip_ws();
        const std::size_t at = pos_;
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (accept('(')) {
            Expr e = expr();
            expect(')');
            return e;
        }
        if (accept('-')) return node(Expr::Kind::negate, at, {base()});
        if (peek_digit()) {
            Expr num = node(Expr::Kind::number, at);
            num.value = Rational::from_integer_string(digits());
            skip_ws();
            if (pos_ < text_.size() && text_[pos_] == '/') {
                ++pos_;
                const std::size_t dpos = pos_;
                if (!peek_digit()) fail("expected an integer denominator after '/'");
                const Rational den = Rational::from_integer_string(digits());
                if (den.is_zero()) throw ParseError("zero denominator", dpos);
                num.value = num.value / den;
            }
            return num;
        }
        if (peek_ident()) {
            const std::string_view id = ident();
            if (id == "i") return node(Expr::Kind::imaginary_unit, at);
            if (id == "conj") {
                expect('(');
                Expr inner = expr();
                expect(')');
                return node(Expr::Kind::conj, at, {std::move(inner)});
            }
            if (id == "sqrt") {
                expect('(');
                skip_ws();
                const std::size_t arg_at = pos_;
                std::string_view d;
                if (peek_digit()) d = digits();
                skip_ws();
                if (d.empty() || (d != "2" && d != "3") || pos_ >= text_.size() || text_[pos_] != ')') {
                    std::size_t end = arg_at;
                    int depth = 1;
                    while (end < text_.size() && depth > 0) {
                        if (text_[end] == '(') ++depth;
                        if (text_[end] == ')') --depth;
                        if (depth > 0) ++end;
                    }
                    throw ParseError("unsupported radical sqrt(" + std::string(text_.substr(arg_at, end - arg_at))
                                         + "): only sqrt(2) and sqrt(3) are supported (coefficients live in "
                                           "Q(sqrt2, sqrt3)(i))",
                                     at);
                }
                expect(')');
                return node(d == "2" ? Expr::Kind::sqrt2 : Expr::Kind::sqrt3, at);
            }
            if (!vars_.find(id)) throw ParseError("unknown variable '" + std::string(id) + "'", at);
            Expr v = node(Expr::Kind::variable, at);
            v.name = std::string(id);
            return v;
        }
        fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    }

    std::string_view text_;
    const VarSpace& vars_;
    std::size_t pos_ = 0;
};

inline Jet power(const Jet& b, unsigned e)
{
    Jet result = Jet::constant(b.space(), b.order(), 1);
    Jet sq = b;
    bool first = true;
    while (e > 0) {
        if (e & 1u) {
            result = first ? sq : result * sq;
            first = false;
        }
        e >>= 1u;
        if (e > 0) sq = sq * sq;
    }
    return result;
}

}  // namespace detail

/// Parses `text`; every identifier must be a holomorphic or real variable of `vars`.
inline Expr parse_expr(std::string_view text, const VarSpace& vars)
{
    return detail::ExprParser(text, vars).parse();
}

/// Upper bound on the total degree of the polynomial an expression denotes.
inline int degree_bound(const Expr& e)
{
    switch (e.kind) {
    case Expr::Kind::variable: return 1;
    case Expr::Kind::number:
    case Expr::Kind::imaginary_unit:
    case Expr::Kind::sqrt2:
    case Expr::Kind::sqrt3: return 0;
    case Expr::Kind::conj:
    case Expr::Kind::negate: return degree_bound(e.args[0]);
    case Expr::Kind::add:
    case Expr::Kind::subtract: return std::max(degree_bound(e.args[0]), degree_bound(e.args[1]));
    case Expr::Kind::multiply: return degree_bound(e.args[0]) + degree_bound(e.args[1]);
    case Expr::Kind::power: return static_cast<int>(e.exponent) * degree_bound(e.args[0]);
    }
    return 0;
}

/// Evaluates an expression to a jet of the given order over `space`.
inline Jet to_jet(const Expr& e, const SpacePtr& space, int order)
{
    switch (e.kind) {
    case Expr::Kind::variable: {
        const auto idx = space->find(e.name);
        if (!idx) throw ParseError("unknown variable '" + e.name + "'", e.pos);
        return Jet::variable(space, order, *idx);
    }
    case Expr::Kind::number: return Jet::constant(space, order, Scalar(e.value));
    case Expr::Kind::imaginary_unit: return Jet::constant(space, order, Scalar::i());
    case Expr::Kind::sqrt2: return Jet::constant(space, order, Scalar(SurdScalar::sqrt2()));
    case Expr::Kind::sqrt3: return Jet::constant(space, order, Scalar(SurdScalar::sqrt3()));
    case Expr::Kind::conj: return to_jet(e.args[0], space, order).conj_swap();
    case Expr::Kind::negate: return -to_jet(e.args[0], space, order);
    case Expr::Kind::add: return to_jet(e.args[0], space, order) + to_jet(e.args[1], space, order);
    case Expr::Kind::subtract: return to_jet(e.args[0], space, order) - to_jet(e.args[1], space, order);
    case Expr::Kind::multiply: return to_jet(e.args[0], space, order) * to_jet(e.args[1], space, order);
    case Expr::Kind::power: return detail::power(to_jet(e.args[0], space, order), e.exponent);
    }
    throw ParseError("malformed expression", e.pos);
}

inline Jet parse_jet(std::string_view text, const SpacePtr& space, int order)
{
    return to_jet(parse_expr(text, *space), space, order);
}

/// Parses a constant such as "1", "-1/2", "sqrt(2)*i".
inline Scalar parse_scalar(std::string_view text)
{
    static const SpacePtr none = std::make_shared<const VarSpace>(std::vector<Variable>{});
    return parse_jet(text, none, 0).eval0();
}

}  // namespace crnd
