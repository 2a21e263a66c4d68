#pragma once

#include "dwlab/complex_ext.hpp"

#include <memory>
#include <string>

namespace dwlab {

// Expression tree over the variable z with complex literals, + - * /,
// integer powers and unary minus.
struct ExprNode {
    enum class Op { Var, Const, Add, Sub, Mul, Div, Pow, Neg };

    Op op;
    Complex constant{0.0, 0.0}; // Const
    int exponent = 0;           // Pow
    bool pole_guard = false;    // set on Div and on Pow with negative exponent
    std::shared_ptr<const ExprNode> lhs, rhs;
};

using ExprPtr = std::shared_ptr<const ExprNode>;

// Grammar: expression := term {('+'|'-') term}; term := unary {('*'|'/') unary};
// unary := '-' unary | power; power := primary ['^' ['-'] integer];
// primary := number['i'] | 'i' | 'z' | '(' expression ')'.
// Failures throw ParseError with the byte offset and expected-token set.
ExprPtr parse_expression(const std::string& text);

// Throws InvalidInput at a guarded pole (zero denominator / zero base with
// negative exponent).
Complex eval_expr(const ExprNode& node, Complex z);

// Exact symbolic derivative tree.
ExprPtr differentiate(const ExprPtr& node);

// Canonical form: print(parse(print(parse(s)))) == print(parse(s)).
std::string print_expr(const ExprNode& node);

} // namespace dwlab
