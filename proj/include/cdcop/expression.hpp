#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdcop {

/// Binary cost expression over two slots, x0 and x1.
///
/// Nodes are stored in post-order so evaluation is a single linear pass over
/// a value stack. Trees are built bottom-up with the free operators below.
///
/// Text form is a prefix s-expression:
///
///     expr  := number | "x0" | "x1"
///            | "(" op expr expr+ ")"        op in + * (left fold)
///            | "(" "-" expr expr ")" | "(" "-" expr ")" | "(" "neg" expr ")"
///            | "(" "/" expr expr ")" | "(" "^" expr integer ")"
///
/// e.g. `(- (^ x0 2) (^ x1 2))` is x0^2 - x1^2.
class Expression {
public:
    enum class Op : std::uint8_t { Constant, Var, Add, Sub, Mul, Div, Pow, Neg };

    struct Node {
        Op op = Op::Constant;
        double value = 0.0;  // Constant
        int arg = 0;         // Var: slot, Pow: exponent
    };

    Expression() : Expression(constant(0.0)) {}

    static Expression constant(double value);
    static Expression var(int slot);

    /// Throws DivisionByZero if a Div node's denominator evaluates to 0.
    double evaluate(double slot0, double slot1) const;

    /// Lane-wise evaluation: out[k] = f(slot0[k], slot1[k]). Same error rule.
    void evaluate_batch(std::span<const double> slot0, std::span<const double> slot1, std::span<double> out) const;

    bool references(int slot) const;
    const std::vector<Node>& nodes() const { return nodes_; }

    std::string to_string() const;
    static Expression parse(std::string_view text);

    friend Expression operator+(Expression lhs, const Expression& rhs);
    friend Expression operator-(Expression lhs, const Expression& rhs);
    friend Expression operator*(Expression lhs, const Expression& rhs);
    friend Expression operator/(Expression lhs, const Expression& rhs);
    friend Expression operator-(Expression operand);
    friend Expression pow(Expression base, int exponent);

    friend bool operator==(const Expression& a, const Expression& b);

private:
    explicit Expression(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}
    static Expression binary(Op op, Expression lhs, const Expression& rhs);

    std::vector<Node> nodes_;
    std::size_t max_depth_ = 1;
};

inline bool operator==(const Expression::Node& a, const Expression::Node& b) {
    return a.op == b.op && a.value == b.value && a.arg == b.arg;
}

/// Shorthand for eval_expr in free-function form.
inline double eval_expr(const Expression& expr, double a, double b) { return expr.evaluate(a, b); }

/// Shortest round-trip decimal text for a double.
std::string format_number(double value);

}  // namespace cdcop
