#include "dwlab/expr.hpp"

#include "dwlab/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <utility>
#include <vector>

namespace dwlab {

namespace {

ExprPtr make_const(Complex c) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprNode::Op::Const;
    n->constant = c;
    return n;
}

ExprPtr make_var() {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprNode::Op::Var;
    return n;
}

ExprPtr make_binary(ExprNode::Op op, ExprPtr l, ExprPtr r) {
    auto n = std::make_shared<ExprNode>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    n->pole_guard = (op == ExprNode::Op::Div);
    return n;
}

ExprPtr make_neg(ExprPtr c) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprNode::Op::Neg;
    n->lhs = std::move(c);
    return n;
}

ExprPtr make_pow(ExprPtr base, int k) {
    auto n = std::make_shared<ExprNode>();
    n->op = ExprNode::Op::Pow;
    n->lhs = std::move(base);
    n->exponent = k;
    n->pole_guard = (k < 0);
    return n;
}

bool is_const(const ExprPtr& n, Complex v) {
    return n->op == ExprNode::Op::Const && n->constant == v;
}

// Light simplifier used when building derivative trees.
ExprPtr simplified(ExprNode::Op op, ExprPtr l, ExprPtr r) {
    const Complex zero(0.0, 0.0), one(1.0, 0.0);
    switch (op) {
    case ExprNode::Op::Add:
        if (is_const(l, zero)) return r;
        if (is_const(r, zero)) return l;
        break;
    case ExprNode::Op::Sub:
        if (is_const(r, zero)) return l;
        if (is_const(l, zero)) return make_neg(r);
        break;
    case ExprNode::Op::Mul:
        if (is_const(l, zero) || is_const(r, zero)) return make_const(zero);
        if (is_const(l, one)) return r;
        if (is_const(r, one)) return l;
        break;
    case ExprNode::Op::Div:
        if (is_const(l, zero)) return make_const(zero);
        if (is_const(r, one)) return l;
        break;
    default:
        break;
    }
    return make_binary(op, std::move(l), std::move(r));
}

struct Parser {
    const std::string& text;
    std::size_t pos = 0;

    explicit Parser(const std::string& s) : text(s) {}

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::vector<std::string>& expected) {
        skip_ws();
        std::string msg = "syntax error at offset " + std::to_string(pos) + ", expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += " | ";
            msg += expected[i];
        }
        throw ParseError(msg, pos, expected);
    }

    ExprPtr parse() {
        ExprPtr e = expression();
        skip_ws();
        if (pos != text.size()) fail({"operator", "end of input"});
        return e;
    }

    ExprPtr expression() {
        ExprPtr e = term();
        while (true) {
            if (accept('+'))
                e = make_binary(ExprNode::Op::Add, e, term());
            else if (accept('-'))
                e = make_binary(ExprNode::Op::Sub, e, term());
            else
                return e;
        }
    }

    ExprPtr term() {
        ExprPtr e = unary();
        while (true) {
            if (accept('*'))
                e = make_binary(ExprNode::Op::Mul, e, unary());
            else if (accept('/'))
                e = make_binary(ExprNode::Op::Div, e, unary());
            else
                return e;
        }
    }

    ExprPtr unary() {
        if (accept('-')) return make_neg(unary());
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (accept('^')) return make_pow(std::move(base), exponent());
        return base;
    }

    int exponent() {
        skip_ws();
        bool negative = accept('-');
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail({"integer exponent"});
        if (pos < text.size() && text[pos] == '.') {
            pos = start;
            fail({"integer exponent (non-integer not allowed)"});
        }
        int value = 0;
        auto [p, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
        if (ec != std::errc()) fail({"integer exponent in range"});
        return negative ? -value : value;
    }

    ExprPtr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos;
            ExprPtr e = expression();
            if (!accept(')')) fail({"')'"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        fail({"number", "'z'", "'i'", "'('", "'-'"});
    }

    ExprPtr number() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos < text.size() && text[pos] == '.') {
            ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        if (pos == start || (pos == start + 1 && text[start] == '.'))
            fail({"number"});
        const double v = std::strtod(text.c_str() + start, nullptr);
        if (pos < text.size() && text[pos] == 'i') {
            ++pos;
            return make_const(Complex(0.0, v));
        }
        return make_const(Complex(v, 0.0));
    }

    ExprPtr identifier() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isalnum(static_cast<unsigned char>(text[pos]))) ++pos;
        const std::string name = text.substr(start, pos - start);
        if (name == "z") return make_var();
        if (name == "i") return make_const(Complex(0.0, 1.0));
        pos = start;
        throw ParseError("unknown identifier '" + name + "' at offset " + std::to_string(start),
                         start, {"'z'", "'i'"});
    }
};

Complex int_pow(Complex base, int k) {
    if (k < 0) {
        if (std::abs(base) == 0.0)
            throw InvalidInput("expression: zero raised to a negative power");
        return 1.0 / int_pow(base, -k);
    }
    Complex result(1.0, 0.0);
    Complex acc = base;
    unsigned e = static_cast<unsigned>(k);
    while (e) {
        if (e & 1u) result *= acc;
        acc *= acc;
        e >>= 1u;
    }
    return result;
}

int precedence(ExprNode::Op op) {
    switch (op) {
    case ExprNode::Op::Add:
    case ExprNode::Op::Sub: return 1;
    case ExprNode::Op::Mul:
    case ExprNode::Op::Div: return 2;
    case ExprNode::Op::Neg: return 3;
    case ExprNode::Op::Pow: return 4;
    default: return 5;
    }
}

std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

std::string format_const(Complex c) {
    if (c.imag() == 0.0) return format_double(c.real());
    if (c.real() == 0.0) {
        if (c.imag() == 1.0) return "i";
        if (c.imag() == -1.0) return "-i";
        return format_double(c.imag()) + "i";
    }
    std::string s = "(" + format_double(c.real());
    if (c.imag() > 0.0)
        s += "+" + (c.imag() == 1.0 ? std::string() : format_double(c.imag())) + "i";
    else
        s += "-" + (c.imag() == -1.0 ? std::string() : format_double(-c.imag())) + "i";
    return s + ")";
}

void print_rec(const ExprNode& n, int parent_prec, std::string& out) {
    const int prec = precedence(n.op);
    const bool parens = prec < parent_prec;
    if (parens) out += '(';
    switch (n.op) {
    case ExprNode::Op::Var: out += 'z'; break;
    case ExprNode::Op::Const: out += format_const(n.constant); break;
    case ExprNode::Op::Add:
        print_rec(*n.lhs, prec, out);
        out += " + ";
        print_rec(*n.rhs, prec + 1, out);
        break;
    case ExprNode::Op::Sub:
        print_rec(*n.lhs, prec, out);
        out += " - ";
        print_rec(*n.rhs, prec + 1, out);
        break;
    case ExprNode::Op::Mul:
        print_rec(*n.lhs, prec, out);
        out += "*";
        print_rec(*n.rhs, prec + 1, out);
        break;
    case ExprNode::Op::Div:
        print_rec(*n.lhs, prec, out);
        out += "/";
        print_rec(*n.rhs, prec + 1, out);
        break;
    case ExprNode::Op::Neg:
        out += '-';
        print_rec(*n.lhs, prec, out);
        break;
    case ExprNode::Op::Pow:
        print_rec(*n.lhs, prec + 1, out);
        out += '^';
        if (n.exponent < 0) {
            out += "-";
            out += std::to_string(-n.exponent);
        } else {
            out += std::to_string(n.exponent);
        }
        break;
    }
    if (parens) out += ')';
}

} // namespace

ExprPtr parse_expression(const std::string& text) {
    Parser p(text);
    return p.parse();
}

Complex eval_expr(const ExprNode& node, Complex z) {
    switch (node.op) {
    case ExprNode::Op::Var: return z;
    case ExprNode::Op::Const: return node.constant;
    case ExprNode::Op::Add: return eval_expr(*node.lhs, z) + eval_expr(*node.rhs, z);
    case ExprNode::Op::Sub: return eval_expr(*node.lhs, z) - eval_expr(*node.rhs, z);
    case ExprNode::Op::Mul: return eval_expr(*node.lhs, z) * eval_expr(*node.rhs, z);
    case ExprNode::Op::Div: {
        const Complex num = eval_expr(*node.lhs, z);
        const Complex den = eval_expr(*node.rhs, z);
        if (std::abs(den) == 0.0)
            throw InvalidInput("expression: evaluation at a recorded pole");
        return num / den;
    }
    case ExprNode::Op::Neg: return -eval_expr(*node.lhs, z);
    case ExprNode::Op::Pow: return int_pow(eval_expr(*node.lhs, z), node.exponent);
    }
    throw InvalidInput("expression: corrupt node");
}

ExprPtr differentiate(const ExprPtr& node) {
    using Op = ExprNode::Op;
    switch (node->op) {
    case Op::Var: return make_const(Complex(1.0, 0.0));
    case Op::Const: return make_const(Complex(0.0, 0.0));
    case Op::Add: return simplified(Op::Add, differentiate(node->lhs), differentiate(node->rhs));
    case Op::Sub: return simplified(Op::Sub, differentiate(node->lhs), differentiate(node->rhs));
    case Op::Mul:
        return simplified(Op::Add, simplified(Op::Mul, differentiate(node->lhs), node->rhs),
                          simplified(Op::Mul, node->lhs, differentiate(node->rhs)));
    case Op::Div: {
        ExprPtr num = simplified(Op::Sub, simplified(Op::Mul, differentiate(node->lhs), node->rhs),
                                 simplified(Op::Mul, node->lhs, differentiate(node->rhs)));
        return simplified(Op::Div, std::move(num), make_pow(node->rhs, 2));
    }
    case Op::Neg: return make_neg(differentiate(node->lhs));
    case Op::Pow: {
        if (node->exponent == 0) return make_const(Complex(0.0, 0.0));
        ExprPtr scaled = simplified(Op::Mul, make_const(Complex(double(node->exponent), 0.0)),
                                    node->exponent == 1
                                        ? make_const(Complex(1.0, 0.0))
                                        : make_pow(node->lhs, node->exponent - 1));
        return simplified(Op::Mul, std::move(scaled), differentiate(node->lhs));
    }
    }
    throw InvalidInput("expression: corrupt node");
}

std::string print_expr(const ExprNode& node) {
    std::string out;
    print_rec(node, 0, out);
    return out;
}

} // namespace dwlab
