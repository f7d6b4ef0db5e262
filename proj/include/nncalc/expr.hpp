#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nncalc/errors.hpp"

namespace nncalc::expr {

// Small expression language over positive-real arithmetic. Two operator
// families coexist with mirrored precedence, loosest first:
//
//   ~+ ~-        multiplicative-field add/subtract
//   ~* ~/        multiplicative-field multiply/divide
//   + -          classical
//   * /          classical
//   - (unary)
//   ^            classical power, right-associative
//
// Atoms: positive decimal literals, constants `e` and `pi`, declared
// variables, `ln exp sin cos sqrt abs`, parentheses. The full grammar is in
// docs/grammar.ebnf.

enum class BinaryOp { Add, Sub, Mul, Div, Pow, NnAdd, NnSub, NnMul, NnDiv };
enum class UnaryOp { Neg, Ln, Exp, Sin, Cos, Sqrt, Abs };
enum class ConstantId { E, Pi };

struct Node {
    enum class Kind { Number, Constant, Variable, Unary, Binary };

    Kind kind;
    double number = 0.0;
    ConstantId constant = ConstantId::E;
    int slot = -1;
    std::string name;
    UnaryOp un = UnaryOp::Neg;
    BinaryOp op = BinaryOp::Add;
    std::shared_ptr<const Node> a, b;
};

class Expr {
public:
    Expr() = default;

    // Parses `source` against the declared variable names; any other
    // identifier is rejected with its position.
    static Expr parse(std::string_view source, std::span<const std::string> allowed_vars);
    static Expr parse(std::string_view source, std::initializer_list<std::string> allowed_vars);

    // Values in declaration order of allowed_vars.
    double evaluate(std::span<const double> values) const;

    // Named bindings; every declared variable must be bound.
    double evaluate(const std::map<std::string, double>& bindings) const;

    // Extended-precision evaluation. Trees are evaluated in long double
    // throughout; this variant skips the final narrowing so that callers
    // dividing tiny differences by tiny steps keep the extra bits.
    long double evaluate_precise(std::span<const double> values) const;

    // Canonical form: minimal parentheses, single spaces around binary
    // operators. parse(str()) reproduces the same tree.
    std::string str() const;

    const std::vector<std::string>& variables() const { return vars_; }

    // Whether the tree mentions the given variable.
    bool references(std::string_view var) const;

    bool empty() const { return root_ == nullptr; }

private:
    std::shared_ptr<const Node> root_;
    std::vector<std::string> vars_;
};

} // namespace nncalc::expr
