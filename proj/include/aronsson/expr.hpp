#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace aronsson {

/// Error raised while lexing/parsing an expression. `pos` is the 0-based
/// offset into the source string.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t pos_)
        : std::runtime_error(what + " at position " + std::to_string(pos_)), pos(pos_) {}
    std::size_t pos;
};

/// Error raised while evaluating an expression (division by zero etc.).
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed boundary expression over the grammar:
///   numbers, variables x and y, binary + - * / ^, unary -, abs, min, max,
///   parentheses. ^ binds tighter than unary minus and requires a constant
///   integer exponent >= 0.
class Expression {
public:
    Expression() = default;

    double eval(double x, double y = 0.0) const;
    bool is_constant() const;
    const std::string& source() const { return src_; }

    /// Parse `src`, throwing ParseError with position on failure.
    static Expression parse(const std::string& src);

    struct Node;  // implementation detail, defined in expr.cpp

private:
    std::shared_ptr<const Node> root_;
    std::string src_;
    friend class ExprParser;
};

inline Expression parse_expr(const std::string& src) { return Expression::parse(src); }

}  // namespace aronsson
