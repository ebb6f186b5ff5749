// SPDX-License-Identifier: MIT
#pragma once

#include "crlift/jet.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace crlift {

/// Syntax or semantic failure while parsing an expression string. `position`
/// is the zero-based character offset the failure was detected at.
class ParseError : public std::runtime_error {
  public:
    ParseError(const std::string& message, size_t position)
        : std::runtime_error(message + " at position " + std::to_string(position)),
          position_(position) {}

    size_t position() const { return position_; }

  private:
    size_t position_;
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Immutable expression tree over the variables x, y, z. Potentials use x, y;
/// holomorphic data (the harmonic kind's generating function) uses z.
/// Exponents of `^` must fold to a constant at parse time, which keeps
/// integer powers exact (repeated multiplication, valid on negative bases)
/// and makes symbolic differentiation total.
struct ExprNode {
    enum class Kind { kConstant, kVariable, kUnary, kBinary };

    Kind kind;
    double value = 0.0; // kConstant
    char var = 'x';     // kVariable
    char op = 0;        // kBinary: + - * / ^ ; kUnary: 'n' (neg) or first letter is unused
    std::string fn;     // kUnary: neg, sin, cos, exp, log, sqrt
    ExprPtr a, b;
};

namespace exprdetail {

inline ExprPtr make_const(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::kConstant;
    n->value = v;
    return n;
}

inline ExprPtr make_var(char v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::kVariable;
    n->var = v;
    return n;
}

inline ExprPtr make_unary(const std::string& fn, ExprPtr a) {
    if (a->kind == ExprNode::Kind::kConstant) {
        const double v = a->value;
        if (fn == "neg") return make_const(-v);
        if (fn == "sin") return make_const(std::sin(v));
        if (fn == "cos") return make_const(std::cos(v));
        if (fn == "exp") return make_const(std::exp(v));
        if (fn == "log" && v > 0.0) return make_const(std::log(v));
        if (fn == "sqrt" && v >= 0.0) return make_const(std::sqrt(v));
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::kUnary;
    n->fn = fn;
    n->a = std::move(a);
    return n;
}

inline bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprNode::Kind::kConstant && e->value == v;
}

inline ExprPtr make_binary(char op, ExprPtr a, ExprPtr b) {
    const bool ca = a->kind == ExprNode::Kind::kConstant;
    const bool cb = b->kind == ExprNode::Kind::kConstant;
    if (ca && cb) {
        switch (op) {
            case '+': return make_const(a->value + b->value);
            case '-': return make_const(a->value - b->value);
            case '*': return make_const(a->value * b->value);
            case '/':
                if (b->value != 0.0) return make_const(a->value / b->value);
                break;
            case '^': return make_const(std::pow(a->value, b->value));
        }
    }
    if (op == '+') {
        if (is_const(a, 0.0)) return b;
        if (is_const(b, 0.0)) return a;
    }
    if (op == '-' && is_const(b, 0.0)) return a;
    if (op == '*') {
        if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
        if (is_const(a, 1.0)) return b;
        if (is_const(b, 1.0)) return a;
    }
    if (op == '/' && is_const(b, 1.0)) return a;
    if (op == '^') {
        if (is_const(b, 1.0)) return a;
        if (is_const(b, 0.0)) return make_const(1.0);
    }
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::kBinary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

struct Token {
    enum class Kind { kNumber, kIdent, kOp, kLParen, kRParen, kEnd };
    Kind kind;
    double number = 0.0;
    std::string ident;
    char op = 0;
    size_t pos = 0;
};

class Lexer {
  public:
    explicit Lexer(std::string_view text) : text_(text) { advance(); }

    const Token& peek() const { return tok_; }

    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

  private:
    void advance() {
        while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
        tok_.pos = i_;
        if (i_ >= text_.size()) {
            tok_.kind = Token::Kind::kEnd;
            return;
        }
        const char ch = text_[i_];
        if (std::isdigit(static_cast<unsigned char>(ch)) ||
            (ch == '.' && i_ + 1 < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[i_ + 1])))) {
            // materialize a NUL-terminated view for strtod
            const std::string tail(text_.substr(i_));
            char* end = nullptr;
            tok_.number = std::strtod(tail.c_str(), &end);
            if (end == tail.c_str()) throw ParseError("malformed number", i_);
            tok_.kind = Token::Kind::kNumber;
            i_ += static_cast<size_t>(end - tail.c_str());
            return;
        }
        if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
            size_t j = i_;
            while (j < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
                ++j;
            tok_.kind = Token::Kind::kIdent;
            tok_.ident = std::string(text_.substr(i_, j - i_));
            i_ = j;
            return;
        }
        switch (ch) {
            case '+':
            case '-':
            case '*':
            case '/':
            case '^':
                tok_.kind = Token::Kind::kOp;
                tok_.op = ch;
                ++i_;
                return;
            case '(':
                tok_.kind = Token::Kind::kLParen;
                ++i_;
                return;
            case ')':
                tok_.kind = Token::Kind::kRParen;
                ++i_;
                return;
            default:
                throw ParseError(std::string("unexpected character '") + ch + "'", i_);
        }
    }

    std::string_view text_;
    size_t i_ = 0;
    Token tok_;
};

inline int binding_power(char op) {
    switch (op) {
        case '+':
        case '-': return 10;
        case '*':
        case '/': return 20;
        case '^': return 40;
        default: return -1;
    }
}

class Parser {
  public:
    explicit Parser(std::string_view text) : lex_(text) {}

    ExprPtr parse() {
        ExprPtr e = expression(0);
        const Token& t = lex_.peek();
        if (t.kind != Token::Kind::kEnd)
            throw ParseError("unexpected trailing input", t.pos);
        return e;
    }

  private:
    static constexpr int kNegPower = 25; // binds tighter than * /, looser than ^

    ExprPtr expression(int min_bp) {
        ExprPtr lhs = primary();
        for (;;) {
            const Token& t = lex_.peek();
            if (t.kind != Token::Kind::kOp) break;
            const int bp = binding_power(t.op);
            if (bp < min_bp) break;
            const Token op = lex_.next();
            // '^' is right-associative, everything else left-associative
            const int next_bp = (op.op == '^') ? bp : bp + 1;
            ExprPtr rhs = expression(next_bp);
            if (op.op == '^') {
                if (rhs->kind != ExprNode::Kind::kConstant)
                    throw ParseError("exponent must be a constant", op.pos);
            }
            lhs = make_binary(op.op, std::move(lhs), std::move(rhs));
        }
        return lhs;
    }

    ExprPtr primary() {
        const Token t = lex_.next();
        switch (t.kind) {
            case Token::Kind::kNumber:
                return make_const(t.number);
            case Token::Kind::kIdent: {
                if (lex_.peek().kind == Token::Kind::kLParen) {
                    if (t.ident != "sin" && t.ident != "cos" && t.ident != "exp" &&
                        t.ident != "log" && t.ident != "sqrt")
                        throw ParseError("unknown function '" + t.ident + "'", t.pos);
                    lex_.next(); // (
                    ExprPtr arg = expression(0);
                    const Token close = lex_.next();
                    if (close.kind != Token::Kind::kRParen)
                        throw ParseError("expected ')'", close.pos);
                    return make_unary(t.ident, std::move(arg));
                }
                if (t.ident == "x" || t.ident == "y" || t.ident == "z")
                    return make_var(t.ident[0]);
                if (t.ident == "pi") return make_const(3.14159265358979323846);
                throw ParseError("unknown identifier '" + t.ident + "'", t.pos);
            }
            case Token::Kind::kLParen: {
                ExprPtr e = expression(0);
                const Token close = lex_.next();
                if (close.kind != Token::Kind::kRParen)
                    throw ParseError("expected ')'", close.pos);
                return e;
            }
            case Token::Kind::kOp:
                if (t.op == '-') return make_unary("neg", expression(kNegPower));
                if (t.op == '+') return expression(kNegPower);
                throw ParseError(std::string("unexpected operator '") + t.op + "'", t.pos);
            case Token::Kind::kRParen:
                throw ParseError("unexpected ')'", t.pos);
            case Token::Kind::kEnd:
                throw ParseError("unexpected end of expression", t.pos);
        }
        throw ParseError("unreachable", t.pos);
    }

    Lexer lex_;
};

} // namespace exprdetail

/// Parses an infix arithmetic expression over x, y, z with functions
/// sin, cos, exp, log, sqrt and operators + - * / ^ (right-associative,
/// constant exponent). Throws ParseError with a character position.
inline ExprPtr parse_expression(std::string_view text) {
    return exprdetail::Parser(text).parse();
}

/// Variable bindings for expression evaluation. Unbound variables referenced
/// by the tree raise std::invalid_argument.
template <typename T>
struct VarBindings {
    std::optional<T> x, y, z;
};

namespace exprdetail {

inline bool near_integer(double v, long long& n) {
    const double r = std::nearbyint(v);
    if (std::abs(v - r) < 1e-12 && std::abs(r) <= 64.0) {
        n = static_cast<long long>(r);
        return true;
    }
    return false;
}

template <typename T>
T pow_integer(const T& base, long long n) {
    if (n < 0) return 1.0 / pow_integer(base, -n);
    T acc = base * 0.0 + 1.0;
    T cur = base;
    long long m = n;
    while (m > 0) {
        if (m & 1) acc = acc * cur;
        cur = cur * cur;
        m >>= 1;
    }
    return acc;
}

} // namespace exprdetail

/// Evaluates the tree over any scalar-like type with field arithmetic and
/// ADL-visible exp/log/sqrt/sin/cos/pow (jets and std::complex both work).
template <typename T>
T evaluate(const ExprPtr& e, const VarBindings<T>& vars) {
    using std::cos;
    using std::exp;
    using std::log;
    using std::pow;
    using std::sin;
    using std::sqrt;
    switch (e->kind) {
        case ExprNode::Kind::kConstant: {
            // anchor the constant to the structure of a bound variable so jet
            // base points line up
            if (vars.x) return (*vars.x) * 0.0 + e->value;
            if (vars.y) return (*vars.y) * 0.0 + e->value;
            if (vars.z) return (*vars.z) * 0.0 + e->value;
            throw std::invalid_argument("expression evaluation needs at least one bound variable");
        }
        case ExprNode::Kind::kVariable: {
            const std::optional<T>* slot = nullptr;
            if (e->var == 'x') slot = &vars.x;
            if (e->var == 'y') slot = &vars.y;
            if (e->var == 'z') slot = &vars.z;
            if (!slot || !*slot)
                throw std::invalid_argument(std::string("variable '") + e->var +
                                            "' is not available in this context");
            return **slot;
        }
        case ExprNode::Kind::kUnary: {
            T a = evaluate(e->a, vars);
            if (e->fn == "neg") return -a;
            if (e->fn == "sin") return sin(a);
            if (e->fn == "cos") return cos(a);
            if (e->fn == "exp") return exp(a);
            if (e->fn == "log") return log(a);
            if (e->fn == "sqrt") return sqrt(a);
            throw std::logic_error("unknown unary function " + e->fn);
        }
        case ExprNode::Kind::kBinary: {
            T a = evaluate(e->a, vars);
            if (e->op == '^') {
                if (e->b->kind != ExprNode::Kind::kConstant)
                    throw std::logic_error("exponent node is not a constant");
                const double alpha = e->b->value;
                long long n = 0;
                if (exprdetail::near_integer(alpha, n)) return exprdetail::pow_integer(a, n);
                return pow(a, alpha);
            }
            T b = evaluate(e->b, vars);
            switch (e->op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
            }
            throw std::logic_error("unknown binary operator");
        }
    }
    throw std::logic_error("unreachable expression node");
}

/// Exact symbolic derivative with respect to `var` (one of x, y, z), with
/// constant folding so repeated differentiation stays small.
inline ExprPtr differentiate(const ExprPtr& e, char var) {
    using exprdetail::make_binary;
    using exprdetail::make_const;
    using exprdetail::make_unary;
    switch (e->kind) {
        case ExprNode::Kind::kConstant:
            return make_const(0.0);
        case ExprNode::Kind::kVariable:
            return make_const(e->var == var ? 1.0 : 0.0);
        case ExprNode::Kind::kUnary: {
            ExprPtr da = differentiate(e->a, var);
            if (e->fn == "neg") return make_unary("neg", da);
            if (e->fn == "sin") return make_binary('*', make_unary("cos", e->a), da);
            if (e->fn == "cos")
                return make_unary("neg", make_binary('*', make_unary("sin", e->a), da));
            if (e->fn == "exp") return make_binary('*', make_unary("exp", e->a), da);
            if (e->fn == "log") return make_binary('/', da, e->a);
            if (e->fn == "sqrt")
                return make_binary('/', da, make_binary('*', make_const(2.0), make_unary("sqrt", e->a)));
            throw std::logic_error("unknown unary function " + e->fn);
        }
        case ExprNode::Kind::kBinary: {
            if (e->op == '^') {
                // exponent is constant by the parse invariant
                const double alpha = e->b->value;
                ExprPtr da = differentiate(e->a, var);
                return make_binary(
                    '*', make_const(alpha),
                    make_binary('*', make_binary('^', e->a, make_const(alpha - 1.0)), da));
            }
            ExprPtr da = differentiate(e->a, var);
            ExprPtr db = differentiate(e->b, var);
            switch (e->op) {
                case '+': return make_binary('+', da, db);
                case '-': return make_binary('-', da, db);
                case '*':
                    return make_binary('+', make_binary('*', da, e->b),
                                       make_binary('*', e->a, db));
                case '/':
                    // (a/b)' = a'/b - a b'/b^2
                    return make_binary(
                        '-', make_binary('/', da, e->b),
                        make_binary('/', make_binary('*', e->a, db),
                                    make_binary('*', e->b, e->b)));
            }
            throw std::logic_error("unknown binary operator");
        }
    }
    throw std::logic_error("unreachable expression node");
}

/// True when the tree references the given variable.
inline bool references_variable(const ExprPtr& e, char var) {
    switch (e->kind) {
        case ExprNode::Kind::kConstant: return false;
        case ExprNode::Kind::kVariable: return e->var == var;
        case ExprNode::Kind::kUnary: return references_variable(e->a, var);
        case ExprNode::Kind::kBinary:
            return references_variable(e->a, var) || references_variable(e->b, var);
    }
    return false;
}

} // namespace crlift
