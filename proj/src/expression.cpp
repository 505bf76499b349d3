#include "cdcop/expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>

#include "cdcop/errors.hpp"

namespace cdcop {

Expression Expression::constant(double value) {
    return Expression({Node{Op::Constant, value, 0}});
}

Expression Expression::var(int slot) {
    if (slot != 0 && slot != 1) {
        throw ParseError("variable slot must be 0 or 1, got " + std::to_string(slot));
    }
    return Expression({Node{Op::Var, 0.0, slot}});
}

Expression Expression::binary(Op op, Expression lhs, const Expression& rhs) {
    lhs.max_depth_ = std::max(lhs.max_depth_, rhs.max_depth_ + 1);
    lhs.nodes_.insert(lhs.nodes_.end(), rhs.nodes_.begin(), rhs.nodes_.end());
    lhs.nodes_.push_back(Node{op, 0.0, 0});
    return lhs;
}

Expression operator+(Expression lhs, const Expression& rhs) {
    return Expression::binary(Expression::Op::Add, std::move(lhs), rhs);
}
Expression operator-(Expression lhs, const Expression& rhs) {
    return Expression::binary(Expression::Op::Sub, std::move(lhs), rhs);
}
Expression operator*(Expression lhs, const Expression& rhs) {
    return Expression::binary(Expression::Op::Mul, std::move(lhs), rhs);
}
Expression operator/(Expression lhs, const Expression& rhs) {
    return Expression::binary(Expression::Op::Div, std::move(lhs), rhs);
}

Expression operator-(Expression operand) {
    operand.nodes_.push_back(Expression::Node{Expression::Op::Neg, 0.0, 0});
    return operand;
}

Expression pow(Expression base, int exponent) {
    if (exponent < 0) {
        throw ParseError("exponent must be a non-negative integer");
    }
    base.nodes_.push_back(Expression::Node{Expression::Op::Pow, 0.0, exponent});
    return base;
}

bool operator==(const Expression& a, const Expression& b) { return a.nodes_ == b.nodes_; }

namespace {

double integer_power(double base, int exponent) {
    double result = 1.0;
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

template <typename Stack>
double run(const std::vector<Expression::Node>& nodes, double slot0, double slot1, Stack& stack) {
    using Op = Expression::Op;
    std::size_t top = 0;
    for (const auto& node : nodes) {
        switch (node.op) {
        case Op::Constant:
            stack[top++] = node.value;
            break;
        case Op::Var:
            stack[top++] = node.arg == 0 ? slot0 : slot1;
            break;
        case Op::Neg:
            stack[top - 1] = -stack[top - 1];
            break;
        case Op::Pow:
            stack[top - 1] = integer_power(stack[top - 1], node.arg);
            break;
        default: {
            const double rhs = stack[--top];
            double& lhs = stack[top - 1];
            switch (node.op) {
            case Op::Add: lhs += rhs; break;
            case Op::Sub: lhs -= rhs; break;
            case Op::Mul: lhs *= rhs; break;
            case Op::Div:
                if (rhs == 0.0) throw DivisionByZero("division by zero in cost expression");
                lhs /= rhs;
                break;
            default: break;
            }
        }
        }
    }
    return stack[0];
}

}  // namespace

double Expression::evaluate(double slot0, double slot1) const {
    constexpr std::size_t kInline = 32;
    if (max_depth_ <= kInline) {
        std::array<double, kInline> stack;
        return run(nodes_, slot0, slot1, stack);
    }
    std::vector<double> stack(max_depth_);
    return run(nodes_, slot0, slot1, stack);
}

void Expression::evaluate_batch(std::span<const double> slot0, std::span<const double> slot1,
                                std::span<double> out) const {
    const std::size_t lanes = out.size();
    thread_local std::vector<double> scratch;
    if (scratch.size() < max_depth_ * lanes) scratch.resize(max_depth_ * lanes);
    double* base = scratch.data();
    std::size_t top = 0;  // stack height in rows of `lanes`
    for (const auto& node : nodes_) {
        switch (node.op) {
        case Op::Constant: {
            double* row = base + top++ * lanes;
            std::fill(row, row + lanes, node.value);
            break;
        }
        case Op::Var: {
            double* row = base + top++ * lanes;
            const double* src = node.arg == 0 ? slot0.data() : slot1.data();
            std::copy(src, src + lanes, row);
            break;
        }
        case Op::Neg: {
            double* row = base + (top - 1) * lanes;
            for (std::size_t k = 0; k < lanes; ++k) row[k] = -row[k];
            break;
        }
        case Op::Pow: {
            double* row = base + (top - 1) * lanes;
            if (node.arg == 2) {
                for (std::size_t k = 0; k < lanes; ++k) row[k] *= row[k];
            } else {
                for (std::size_t k = 0; k < lanes; ++k) row[k] = integer_power(row[k], node.arg);
            }
            break;
        }
        default: {
            --top;
            const double* rhs = base + top * lanes;
            double* lhs = base + (top - 1) * lanes;
            switch (node.op) {
            case Op::Add:
                for (std::size_t k = 0; k < lanes; ++k) lhs[k] += rhs[k];
                break;
            case Op::Sub:
                for (std::size_t k = 0; k < lanes; ++k) lhs[k] -= rhs[k];
                break;
            case Op::Mul:
                for (std::size_t k = 0; k < lanes; ++k) lhs[k] *= rhs[k];
                break;
            case Op::Div:
                for (std::size_t k = 0; k < lanes; ++k) {
                    if (rhs[k] == 0.0) throw DivisionByZero("division by zero in cost expression");
                    lhs[k] /= rhs[k];
                }
                break;
            default: break;
            }
        }
        }
    }
    std::copy(base, base + lanes, out.data());
}

bool Expression::references(int slot) const {
    for (const auto& node : nodes_) {
        if (node.op == Op::Var && node.arg == slot) return true;
    }
    return false;
}

std::string format_number(double value) {
    std::array<char, 64> buf;
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

std::string Expression::to_string() const {
    std::vector<std::string> stack;
    for (const auto& node : nodes_) {
        switch (node.op) {
        case Op::Constant:
            stack.push_back(format_number(node.value));
            break;
        case Op::Var:
            stack.push_back(node.arg == 0 ? "x0" : "x1");
            break;
        case Op::Neg:
            stack.back() = "(neg " + stack.back() + ")";
            break;
        case Op::Pow:
            stack.back() = "(^ " + stack.back() + " " + std::to_string(node.arg) + ")";
            break;
        default: {
            std::string rhs = std::move(stack.back());
            stack.pop_back();
            const char* sym = node.op == Op::Add   ? "+"
                              : node.op == Op::Sub ? "-"
                              : node.op == Op::Mul ? "*"
                                                   : "/";
            stack.back() = std::string("(") + sym + " " + stack.back() + " " + rhs + ")";
        }
        }
    }
    return stack.back();
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expression parse_all() {
        Expression e = parse_expr();
        skip_space();
        if (pos_ != text_.size()) fail("trailing input");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("expression parse error at offset " + std::to_string(pos_) + ": " + what +
                         " in `" + std::string(text_) + "`");
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view atom() {
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')' &&
               !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (start == pos_) fail("expected atom");
        return text_.substr(start, pos_ - start);
    }

    bool at_close() {
        skip_space();
        return pos_ < text_.size() && text_[pos_] == ')';
    }

    Expression parse_expr() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        if (text_[pos_] == '(') {
            ++pos_;
            return parse_list();
        }
        if (text_[pos_] == ')') fail("unexpected ')'");
        const std::string_view tok = atom();
        if (tok == "x0") return Expression::var(0);
        if (tok == "x1") return Expression::var(1);
        double value = 0.0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc() || end != tok.data() + tok.size()) fail("bad atom `" + std::string(tok) + "`");
        return Expression::constant(value);
    }

    Expression parse_list() {
        const std::string op(atom());
        std::vector<Expression> args;
        std::optional<int> exponent;
        while (!at_close()) {
            if (pos_ >= text_.size()) fail("missing ')'");
            if (op == "^" && args.size() == 1) {
                const std::string_view tok = atom();
                int n = 0;
                auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), n);
                if (ec != std::errc() || end != tok.data() + tok.size() || n < 0) {
                    fail("exponent must be a non-negative integer literal");
                }
                exponent = n;
                args.emplace_back();
                continue;
            }
            args.push_back(parse_expr());
        }
        ++pos_;  // ')'

        if (op == "+" || op == "*") {
            if (args.size() < 2) fail("`" + op + "` needs at least two operands");
            Expression acc = std::move(args[0]);
            for (std::size_t i = 1; i < args.size(); ++i) {
                acc = op == "+" ? std::move(acc) + args[i] : std::move(acc) * args[i];
            }
            return acc;
        }
        if (op == "-") {
            if (args.size() == 1) return -std::move(args[0]);
            if (args.size() == 2) return std::move(args[0]) - args[1];
            fail("`-` takes one or two operands");
        }
        if (op == "neg") {
            if (args.size() != 1) fail("`neg` takes one operand");
            return -std::move(args[0]);
        }
        if (op == "/") {
            if (args.size() != 2) fail("`/` takes two operands");
            return std::move(args[0]) / args[1];
        }
        if (op == "^") {
            if (args.size() != 2 || !exponent) fail("`^` takes a base and an integer exponent");
            return pow(std::move(args[0]), *exponent);
        }
        fail("unknown operator `" + op + "`");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text) { return Parser(text).parse_all(); }

}  // namespace cdcop
