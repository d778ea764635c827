#pragma once

// Expression DSL: parse, print, evaluate, differentiate.
//
// Grammar (whitespace-insensitive):
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" ("-")? number)?
//   atom   := number | "x" | call | "(" expr ")"
//   call   := ("exp"|"ln"|"abs"|"max"|"min") "(" expr ("," expr)* ")"
//
// Unary minus is desugared at parse time: a negated literal folds into a
// negative constant, anything else becomes mul(-1, e). The only variable
// is "x"; pow exponents are numeric literals.

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <charconv>
#include <vector>

namespace hadaudit {

enum class ExprKind {
    Constant,
    Variable,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // child ^ constant exponent
    Exp,
    Ln,
    Abs,
    Max,
    Min,
};

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    ExprKind kind;
    double value = 0.0;  // Constant payload, or Pow exponent
    std::vector<ExprPtr> children;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, std::size_t offset, std::string expected)
        : std::runtime_error(std::move(msg)), offset_(offset),
          expected_(std::move(expected)) {}
    std::size_t offset() const { return offset_; }
    const std::string& expected() const { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NonDifferentiable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline ExprPtr make_const(double v) {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Constant, v, {}});
}

inline ExprPtr make_var() {
    return std::make_shared<ExprNode>(ExprNode{ExprKind::Variable, 0.0, {}});
}

inline ExprPtr make_node(ExprKind kind, std::vector<ExprPtr> children,
                         double payload = 0.0) {
    return std::make_shared<ExprNode>(
        ExprNode{kind, payload, std::move(children)});
}

inline bool is_const(const ExprPtr& e, double v) {
    return e->kind == ExprKind::Constant && e->value == v;
}

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
    if (a->kind != b->kind) return false;
    if (a->kind == ExprKind::Constant || a->kind == ExprKind::Pow) {
        if (a->value != b->value) return false;
    }
    if (a->children.size() != b->children.size()) return false;
    for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!expr_equal(a->children[i], b->children[i])) return false;
    return true;
}

inline double eval_expr(const ExprPtr& ast, double x) {
    switch (ast->kind) {
        case ExprKind::Constant: return ast->value;
        case ExprKind::Variable: return x;
        case ExprKind::Add:
            return eval_expr(ast->children[0], x) + eval_expr(ast->children[1], x);
        case ExprKind::Sub:
            return eval_expr(ast->children[0], x) - eval_expr(ast->children[1], x);
        case ExprKind::Mul:
            return eval_expr(ast->children[0], x) * eval_expr(ast->children[1], x);
        case ExprKind::Div: {
            double d = eval_expr(ast->children[1], x);
            if (d == 0.0) throw DomainError("division by zero");
            return eval_expr(ast->children[0], x) / d;
        }
        case ExprKind::Pow: {
            double base = eval_expr(ast->children[0], x);
            double p = ast->value;
            if (base == 0.0 && p < 0.0)
                throw DomainError("zero raised to negative exponent");
            double r = std::pow(base, p);
            if (std::isnan(r))
                throw DomainError("pow outside real domain");
            return r;
        }
        case ExprKind::Exp: return std::exp(eval_expr(ast->children[0], x));
        case ExprKind::Ln: {
            double v = eval_expr(ast->children[0], x);
            if (v <= 0.0) throw DomainError("ln of non-positive value");
            return std::log(v);
        }
        case ExprKind::Abs: return std::fabs(eval_expr(ast->children[0], x));
        case ExprKind::Max: {
            double best = eval_expr(ast->children[0], x);
            for (std::size_t i = 1; i < ast->children.size(); ++i)
                best = std::max(best, eval_expr(ast->children[i], x));
            return best;
        }
        case ExprKind::Min: {
            double best = eval_expr(ast->children[0], x);
            for (std::size_t i = 1; i < ast->children.size(); ++i)
                best = std::min(best, eval_expr(ast->children[i], x));
            return best;
        }
    }
    throw std::logic_error("unreachable expr kind");
}

namespace detail {

inline bool literal_only(const ExprPtr& e) {
    if (e->kind == ExprKind::Variable) return false;
    for (const auto& c : e->children)
        if (!literal_only(c)) return false;
    return true;
}

// Folds literal-only subtrees to constants; no other rewriting.
inline ExprPtr fold_constants(const ExprPtr& e) {
    if (e->kind == ExprKind::Constant || e->kind == ExprKind::Variable) return e;
    std::vector<ExprPtr> kids;
    kids.reserve(e->children.size());
    bool all_const = true;
    for (const auto& c : e->children) {
        kids.push_back(fold_constants(c));
        all_const = all_const && kids.back()->kind == ExprKind::Constant;
    }
    ExprPtr folded = make_node(e->kind, std::move(kids), e->value);
    if (all_const) {
        try {
            return make_const(eval_expr(folded, 0.0));
        } catch (const DomainError&) {
            // 1/0 and friends stay symbolic; evaluation reports them.
        }
    }
    return folded;
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    ExprPtr parse() {
        ExprPtr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size())
            fail("unexpected trailing input", "end of input");
        return fold_constants(e);
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& msg, const std::string& expected) {
        throw ParseError(msg + " at offset " + std::to_string(pos_), pos_,
                         expected);
    }

    void skip_ws() {
        while (pos_ < text_.size() &&
               (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                text_[pos_] == '\n' || text_[pos_] == '\r'))
            ++pos_;
    }

    bool peek_char(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    bool accept(char c) {
        if (peek_char(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c))
            fail(std::string("expected '") + c + "'", std::string(1, c));
    }

    ExprPtr parse_expr() {
        ExprPtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make_node(ExprKind::Add, {lhs, parse_term()});
            else if (accept('-'))
                lhs = make_node(ExprKind::Sub, {lhs, parse_term()});
            else
                return lhs;
        }
    }

    ExprPtr parse_term() {
        ExprPtr lhs = parse_factor();
        for (;;) {
            if (accept('*'))
                lhs = make_node(ExprKind::Mul, {lhs, parse_factor()});
            else if (accept('/'))
                lhs = make_node(ExprKind::Div, {lhs, parse_factor()});
            else
                return lhs;
        }
    }

    ExprPtr parse_factor() {
        if (accept('-')) {
            ExprPtr e = parse_power();
            if (e->kind == ExprKind::Constant) return make_const(-e->value);
            return make_node(ExprKind::Mul, {make_const(-1.0), e});
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (accept('^')) {
            bool neg = accept('-');
            double p = parse_number();
            return make_node(ExprKind::Pow, {base}, neg ? -p : p);
        }
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= text_.size())
            fail("unexpected end of input", "number, 'x', function call or '('");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_expr();
            expect(')');
            return e;
        }
        if (c >= '0' && c <= '9') return make_const(parse_number());
        if (c >= 'a' && c <= 'z') {
            std::size_t start = pos_;
            while (pos_ < text_.size() && text_[pos_] >= 'a' && text_[pos_] <= 'z')
                ++pos_;
            std::string_view name = text_.substr(start, pos_ - start);
            if (name == "x") return make_var();
            ExprKind kind;
            std::size_t min_arity = 1, max_arity = 1;
            if (name == "exp") kind = ExprKind::Exp;
            else if (name == "ln") kind = ExprKind::Ln;
            else if (name == "abs") kind = ExprKind::Abs;
            else if (name == "max") { kind = ExprKind::Max; min_arity = 2; max_arity = 64; }
            else if (name == "min") { kind = ExprKind::Min; min_arity = 2; max_arity = 64; }
            else {
                pos_ = start;
                fail("unknown identifier '" + std::string(name) + "'",
                     "x, exp, ln, abs, max or min");
            }
            expect('(');
            std::vector<ExprPtr> args;
            args.push_back(parse_expr());
            while (accept(',')) args.push_back(parse_expr());
            expect(')');
            if (args.size() < min_arity || args.size() > max_arity)
                fail("wrong argument count for " + std::string(name),
                     "argument list");
            return make_node(kind, std::move(args));
        }
        fail(std::string("unexpected character '") + c + "'",
             "number, 'x', function call or '('");
    }

    double parse_number() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
            ++pos_;
        if (pos_ == start) fail("expected number", "decimal literal");
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            std::size_t frac = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                ++pos_;
            if (pos_ == frac) fail("expected digits after '.'", "digit");
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_;
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                ++pos_;
            std::size_t digits = pos_;
            while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9')
                ++pos_;
            if (pos_ == digits) pos_ = save;  // "2e" is "2" then identifier
        }
        double out = 0.0;
        auto res = std::from_chars(text_.data() + start, text_.data() + pos_, out);
        if (res.ec != std::errc()) fail("invalid numeric literal", "number");
        return out;
    }
};

}  // namespace detail

inline ExprPtr parse_expr(std::string_view text) {
    return detail::Parser(text).parse();
}

namespace detail {

// Precedence levels for minimal-parenthesis printing.
inline int precedence(ExprKind k) {
    switch (k) {
        case ExprKind::Add:
        case ExprKind::Sub: return 1;
        case ExprKind::Mul:
        case ExprKind::Div: return 2;
        case ExprKind::Pow: return 3;
        default: return 4;
    }
}

inline std::string print_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline void print_child(const ExprPtr& e, bool parens, std::string& out);

inline void print_rec(const ExprPtr& e, std::string& out) {
    switch (e->kind) {
        case ExprKind::Constant:
            out += print_number(e->value);
            return;
        case ExprKind::Variable:
            out += 'x';
            return;
        case ExprKind::Add:
        case ExprKind::Sub:
        case ExprKind::Mul:
        case ExprKind::Div: {
            int prec = precedence(e->kind);
            const char op = e->kind == ExprKind::Add ? '+'
                          : e->kind == ExprKind::Sub ? '-'
                          : e->kind == ExprKind::Mul ? '*' : '/';
            const ExprPtr& l = e->children[0];
            const ExprPtr& r = e->children[1];
            bool lp = precedence(l->kind) < prec;
            print_child(l, lp, out);
            out += op;
            // These operators parse left-associative, so a right operand at
            // equal precedence always needs parens to keep its grouping;
            // the leading '-' of a negative constant re-binds, so wrap it.
            bool rp = precedence(r->kind) <= prec ||
                      (r->kind == ExprKind::Constant && r->value < 0.0);
            print_child(r, rp, out);
            return;
        }
        case ExprKind::Pow: {
            const ExprPtr& base = e->children[0];
            bool bp = precedence(base->kind) <= 3 ||
                      (base->kind == ExprKind::Constant && base->value < 0.0);
            print_child(base, bp, out);
            out += '^';
            out += print_number(e->value);
            return;
        }
        case ExprKind::Exp:
        case ExprKind::Ln:
        case ExprKind::Abs:
        case ExprKind::Max:
        case ExprKind::Min: {
            out += e->kind == ExprKind::Exp ? "exp"
                 : e->kind == ExprKind::Ln ? "ln"
                 : e->kind == ExprKind::Abs ? "abs"
                 : e->kind == ExprKind::Max ? "max" : "min";
            out += '(';
            for (std::size_t i = 0; i < e->children.size(); ++i) {
                if (i) out += ',';
                print_rec(e->children[i], out);
            }
            out += ')';
            return;
        }
    }
}

inline void print_child(const ExprPtr& e, bool parens, std::string& out) {
    if (parens) out += '(';
    print_rec(e, out);
    if (parens) out += ')';
}

}  // namespace detail

inline std::string canonical_print(const ExprPtr& ast) {
    std::string out;
    detail::print_rec(ast, out);
    return out;
}

namespace detail {

inline ExprPtr diff1(const ExprPtr& e) {
    switch (e->kind) {
        case ExprKind::Constant: return make_const(0.0);
        case ExprKind::Variable: return make_const(1.0);
        case ExprKind::Add:
            return make_node(ExprKind::Add,
                             {diff1(e->children[0]), diff1(e->children[1])});
        case ExprKind::Sub:
            return make_node(ExprKind::Sub,
                             {diff1(e->children[0]), diff1(e->children[1])});
        case ExprKind::Mul: {
            const ExprPtr& u = e->children[0];
            const ExprPtr& v = e->children[1];
            return make_node(
                ExprKind::Add,
                {make_node(ExprKind::Mul, {diff1(u), v}),
                 make_node(ExprKind::Mul, {u, diff1(v)})});
        }
        case ExprKind::Div: {
            const ExprPtr& u = e->children[0];
            const ExprPtr& v = e->children[1];
            ExprPtr num = make_node(
                ExprKind::Sub,
                {make_node(ExprKind::Mul, {diff1(u), v}),
                 make_node(ExprKind::Mul, {u, diff1(v)})});
            return make_node(ExprKind::Div,
                             {num, make_node(ExprKind::Pow, {v}, 2.0)});
        }
        case ExprKind::Pow: {
            const ExprPtr& u = e->children[0];
            double p = e->value;
            if (p == 0.0) return make_const(0.0);
            ExprPtr inner = p == 1.0 ? u : make_node(ExprKind::Pow, {u}, p - 1.0);
            ExprPtr scaled = make_node(ExprKind::Mul, {make_const(p), inner});
            if (p == 1.0) scaled = make_const(p);
            return make_node(ExprKind::Mul, {scaled, diff1(u)});
        }
        case ExprKind::Exp:
            return make_node(ExprKind::Mul, {e, diff1(e->children[0])});
        case ExprKind::Ln:
            return make_node(ExprKind::Div,
                             {diff1(e->children[0]), e->children[0]});
        case ExprKind::Abs:
        case ExprKind::Max:
        case ExprKind::Min:
            throw NonDifferentiable("piecewise node in expression");
    }
    throw std::logic_error("unreachable expr kind");
}

}  // namespace detail

inline bool is_differentiable(const ExprPtr& e) {
    if (e->kind == ExprKind::Abs || e->kind == ExprKind::Max ||
        e->kind == ExprKind::Min)
        return false;
    for (const auto& c : e->children)
        if (!is_differentiable(c)) return false;
    return true;
}

inline ExprPtr differentiate(const ExprPtr& ast, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("derivative order must be 1 or 2");
    ExprPtr d = detail::fold_constants(detail::diff1(ast));
    if (order == 2) d = detail::fold_constants(detail::diff1(d));
    return d;
}

}  // namespace hadaudit
