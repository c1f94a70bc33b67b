#include "aronsson/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace aronsson {

struct Expression::Node {
    enum class Op { Const, VarX, VarY, Add, Sub, Mul, Div, Pow, Neg, Abs, Min, Max };
    Op op;
    double value = 0.0;  // Const
    long ipow = 0;       // Pow exponent
    std::shared_ptr<const Node> a, b;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make(Node::Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

NodePtr make_const(double v) {
    auto n = std::make_shared<Node>();
    n->op = Node::Op::Const;
    n->value = v;
    return n;
}

double eval_node(const Node& n, double x, double y) {
    using Op = Node::Op;
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::VarX: return x;
        case Op::VarY: return y;
        case Op::Add: return eval_node(*n.a, x, y) + eval_node(*n.b, x, y);
        case Op::Sub: return eval_node(*n.a, x, y) - eval_node(*n.b, x, y);
        case Op::Mul: return eval_node(*n.a, x, y) * eval_node(*n.b, x, y);
        case Op::Div: {
            double d = eval_node(*n.b, x, y);
            if (d == 0.0) throw EvalError("division by zero");
            return eval_node(*n.a, x, y) / d;
        }
        case Op::Pow: {
            double base = eval_node(*n.a, x, y);
            double r = 1.0;
            for (long i = 0; i < n.ipow; ++i) r *= base;
            return r;
        }
        case Op::Neg: return -eval_node(*n.a, x, y);
        case Op::Abs: return std::fabs(eval_node(*n.a, x, y));
        case Op::Min: return std::fmin(eval_node(*n.a, x, y), eval_node(*n.b, x, y));
        case Op::Max: return std::fmax(eval_node(*n.a, x, y), eval_node(*n.b, x, y));
    }
    throw EvalError("corrupt expression node");
}

bool const_node(const Node& n) {
    using Op = Node::Op;
    switch (n.op) {
        case Op::Const: return true;
        case Op::VarX:
        case Op::VarY: return false;
        case Op::Neg:
        case Op::Abs:
        case Op::Pow: return const_node(*n.a);
        default: return const_node(*n.a) && const_node(*n.b);
    }
}

}  // namespace

class ExprParser {
public:
    explicit ExprParser(const std::string& src) : s_(src) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // expression := term { (+|-) term }
    NodePtr expression() {
        NodePtr e = term();
        for (;;) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                e = make(c == '+' ? Node::Op::Add : Node::Op::Sub, e, term());
            } else {
                return e;
            }
        }
    }

    // term := unary { (*|/) unary }
    NodePtr term() {
        NodePtr e = unary();
        for (;;) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos_;
                e = make(c == '*' ? Node::Op::Mul : Node::Op::Div, e, unary());
            } else {
                return e;
            }
        }
    }

    // unary := '-' unary | power
    NodePtr unary() {
        if (consume('-')) return make(Node::Op::Neg, unary());
        return power();
    }

    // power := primary { '^' primary }, left associative; the exponent must be
    // a constant integer >= 0.
    NodePtr power() {
        NodePtr e = primary();
        while (peek() == '^') {
            ++pos_;
            std::size_t at = pos_;
            NodePtr exp = primary();
            if (!const_node(*exp)) throw ParseError("exponent must be constant", at);
            double v = eval_node(*exp, 0.0, 0.0);
            double r = std::round(v);
            if (!(std::fabs(v - r) <= 1e-9) || r < 0.0)
                throw ParseError("exponent must be a nonnegative integer", at);
            auto n = std::make_shared<Node>();
            n->op = Node::Op::Pow;
            n->a = e;
            n->ipow = static_cast<long>(r);
            e = n;
        }
        return e;
    }

    NodePtr primary() {
        char c = peek();
        if (c == '\0') throw ParseError("unexpected end of input", pos_);
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            if (!consume(')')) throw ParseError("expected ')'", pos_);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
        throw ParseError(std::string("unexpected character '") + c + "'", pos_);
    }

    NodePtr number() {
        skip_ws();
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", pos_);
        pos_ += static_cast<std::size_t>(end - begin);
        return make_const(v);
    }

    NodePtr identifier() {
        skip_ws();
        std::size_t at = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
            name += s_[pos_++];
        if (name == "x") return make(Node::Op::VarX);
        if (name == "y") return make(Node::Op::VarY);
        if (name == "abs") return call(Node::Op::Abs, 1, at);
        if (name == "min") return call(Node::Op::Min, 2, at);
        if (name == "max") return call(Node::Op::Max, 2, at);
        throw ParseError("unknown identifier '" + name + "'", at);
    }

    NodePtr call(Node::Op op, int arity, std::size_t at) {
        if (!consume('(')) throw ParseError("expected '(' after function name", at);
        NodePtr a = expression();
        NodePtr b;
        if (arity == 2) {
            if (!consume(',')) throw ParseError("expected ','", pos_);
            b = expression();
        }
        if (!consume(')')) throw ParseError("expected ')'", pos_);
        return make(op, a, b);
    }
};

Expression Expression::parse(const std::string& src) {
    Expression e;
    e.root_ = ExprParser(src).parse();
    e.src_ = src;
    return e;
}

double Expression::eval(double x, double y) const {
    if (!root_) throw EvalError("empty expression");
    return eval_node(*root_, x, y);
}

bool Expression::is_constant() const { return root_ && const_node(*root_); }

}  // namespace aronsson
