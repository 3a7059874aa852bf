#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace maxent {

enum class NodeKind : unsigned char {
  Literal,
  Variable,   // x1..xD, 1-based index in `var`
  VectorArg,  // the bare symbol x, valid only inside an aggregate argument
  Add, Sub, Mul, Div, Pow,
  Negate,
  Log, Exp, Sqrt, Sign,
  Sum, Mean, Min, Max,  // aggregates over components; child is evaluated per component
};

struct ExprNode {
  NodeKind kind;
  double value = 0.0;  // Literal
  int var = 0;         // Variable
  int lhs = -1;
  int rhs = -1;
};

/// Parsed derived-parameter expression f(x).
///
/// Grammar (whitespace insignificant; no implicit multiplication):
///   expr    := term (('+' | '-') term)*
///   term    := factor (('*' | '/') factor)*
///   factor  := unary ('^' factor)?            right-associative
///   unary   := '-' unary | primary
///   primary := NUMBER | 'x'INDEX | FUNC '(' expr ')' | AGG '(' expr ')'
///            | '(' expr ')'
///   FUNC    := log | exp | sqrt | sign
///   AGG     := sum | mean | min | max
/// Unary minus binds tighter than '^', so "-x1^2" is (-x1)^2. Inside an
/// aggregate argument the bare symbol `x` denotes the current component, so
/// "mean(exp(x))" is the mean of exp over all components. Aggregates do not
/// nest.
struct DerivedExpr {
  int dimension = 0;
  std::vector<ExprNode> nodes;
  int root = -1;
};

/// Parses `text` against a base dimension. Throws ParseError with a byte
/// position on syntax errors, unknown identifiers, or variable indices
/// outside [1, dimension].
DerivedExpr parse(std::string_view text, int dimension);

/// Evaluates f(x). Throws EvalError naming the offending subexpression on
/// domain violations; the result is always finite.
double evaluate(const DerivedExpr& e, std::span<const double> x);

/// Canonical fully parenthesized text; parse(pretty_print(e)) is
/// structurally equal to e.
std::string pretty_print(const DerivedExpr& e);

/// Renders the subtree rooted at `node`.
std::string pretty_print_node(const DerivedExpr& e, int node);

bool structurally_equal(const DerivedExpr& a, const DerivedExpr& b);

}  // namespace maxent
