#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "maxent/error.hpp"
#include "maxent/expr.hpp"

using namespace maxent;

namespace {

// Independent reference interpreter over the public node layout. Mirrors
// the documented semantics directly; kept separate from the library
// evaluator on purpose.
double reference_eval(const DerivedExpr& e, int idx, std::span<const double> x,
                      int component) {
  const ExprNode& n = e.nodes[idx];
  auto rec = [&](int child) { return reference_eval(e, child, x, component); };
  switch (n.kind) {
    case NodeKind::Literal: return n.value;
    case NodeKind::Variable: return x[n.var - 1];
    case NodeKind::VectorArg: return x[component];
    case NodeKind::Add: return rec(n.lhs) + rec(n.rhs);
    case NodeKind::Sub: return rec(n.lhs) - rec(n.rhs);
    case NodeKind::Mul: return rec(n.lhs) * rec(n.rhs);
    case NodeKind::Div: return rec(n.lhs) / rec(n.rhs);
    case NodeKind::Pow: return std::pow(rec(n.lhs), rec(n.rhs));
    case NodeKind::Negate: return -rec(n.lhs);
    case NodeKind::Log: return std::log(rec(n.lhs));
    case NodeKind::Exp: return std::exp(rec(n.lhs));
    case NodeKind::Sqrt: return std::sqrt(rec(n.lhs));
    case NodeKind::Sign: {
      const double v = rec(n.lhs);
      return v > 0 ? 1.0 : v < 0 ? -1.0 : 0.0;
    }
    case NodeKind::Sum:
    case NodeKind::Mean: {
      double acc = 0.0;
      for (int k = 0; k < e.dimension; ++k) acc += reference_eval(e, n.lhs, x, k);
      return n.kind == NodeKind::Mean ? acc / e.dimension : acc;
    }
    case NodeKind::Min:
    case NodeKind::Max: {
      double best = reference_eval(e, n.lhs, x, 0);
      for (int k = 1; k < e.dimension; ++k) {
        const double v = reference_eval(e, n.lhs, x, k);
        best = n.kind == NodeKind::Min ? std::min(best, v) : std::max(best, v);
      }
      return best;
    }
  }
  return std::nan("");
}

// Random AST generator for the property tests. Literals are nonnegative so
// the canonical printed form re-parses to the identical tree.
struct AstGen {
  std::mt19937_64 rng;
  DerivedExpr expr;

  explicit AstGen(std::uint64_t seed, int dim) : rng(seed) { expr.dimension = dim; }

  int add(ExprNode n) {
    expr.nodes.push_back(n);
    return static_cast<int>(expr.nodes.size() - 1);
  }

  int leaf(bool in_aggregate) {
    std::uniform_int_distribution<int> pick(0, in_aggregate ? 2 : 1);
    switch (pick(rng)) {
      case 0: {
        std::uniform_real_distribution<double> lit(0.0, 3.0);
        return add({NodeKind::Literal, lit(rng), 0, -1, -1});
      }
      case 1: {
        std::uniform_int_distribution<int> var(1, expr.dimension);
        return add({NodeKind::Variable, 0.0, var(rng), -1, -1});
      }
      default:
        return add({NodeKind::VectorArg, 0.0, 0, -1, -1});
    }
  }

  int node(int depth, bool in_aggregate) {
    if (depth <= 0) return leaf(in_aggregate);
    std::uniform_int_distribution<int> pick(0, in_aggregate ? 10 : 11);
    const int choice = pick(rng);
    switch (choice) {
      case 0: return leaf(in_aggregate);
      case 1: case 2: case 3: case 4: {
        static const NodeKind binops[] = {NodeKind::Add, NodeKind::Sub, NodeKind::Mul,
                                          NodeKind::Div};
        const int l = node(depth - 1, in_aggregate);
        const int r = node(depth - 1, in_aggregate);
        return add({binops[choice - 1], 0.0, 0, l, r});
      }
      case 5: {
        const int l = node(depth - 1, in_aggregate);
        const int r = leaf(in_aggregate);
        return add({NodeKind::Pow, 0.0, 0, l, r});
      }
      case 6: return add({NodeKind::Negate, 0.0, 0, node(depth - 1, in_aggregate), -1});
      case 7: case 8: case 9: case 10: {
        static const NodeKind fns[] = {NodeKind::Log, NodeKind::Exp, NodeKind::Sqrt,
                                       NodeKind::Sign};
        return add({fns[choice - 7], 0.0, 0, node(depth - 1, in_aggregate), -1});
      }
      default: {
        static const NodeKind aggs[] = {NodeKind::Sum, NodeKind::Mean, NodeKind::Min,
                                        NodeKind::Max};
        std::uniform_int_distribution<int> pick_agg(0, 3);
        return add({aggs[pick_agg(rng)], 0.0, 0, node(depth - 1, true), -1});
      }
    }
  }

  DerivedExpr generate(int depth) {
    expr.nodes.clear();
    expr.root = node(depth, false);
    return expr;
  }
};

}  // namespace

TEST_CASE("parse builds the expected trees") {
  const DerivedExpr e = parse("x1+x2", 2);
  REQUIRE(e.root >= 0);
  const ExprNode& root = e.nodes[e.root];
  CHECK(root.kind == NodeKind::Add);
  CHECK(e.nodes[root.lhs].kind == NodeKind::Variable);
  CHECK(e.nodes[root.lhs].var == 1);
  CHECK(e.nodes[root.rhs].var == 2);

  const DerivedExpr m = parse("mean(x)", 3);
  CHECK(m.nodes[m.root].kind == NodeKind::Mean);
  // mean(x) is (x1+x2+x3)/3
  CHECK(evaluate(m, std::vector<double>{1.0, 2.0, 6.0}) == doctest::Approx(3.0));
  const DerivedExpr sum3 = parse("(x1 + x2 + x3) / 3", 3);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 100; ++i) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    CHECK(evaluate(m, x) == doctest::Approx(evaluate(sum3, x)).epsilon(1e-14));
  }
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse("x3", 2), ParseError);
  CHECK_THROWS_AS(parse("", 2), ParseError);
  CHECK_THROWS_AS(parse("  ", 2), ParseError);
  CHECK_THROWS_AS(parse("x1 +", 2), ParseError);
  CHECK_THROWS_AS(parse("foo(x1)", 2), ParseError);
  CHECK_THROWS_AS(parse("2x1", 2), ParseError);   // no implicit multiplication
  CHECK_THROWS_AS(parse("x", 2), ParseError);     // bare x outside aggregates
  CHECK_THROWS_AS(parse("sum(mean(x))", 2), ParseError);  // no nested aggregates
  CHECK_THROWS_AS(parse("x1 + x2)", 2), ParseError);
  CHECK_THROWS_AS(parse("log(x1", 2), ParseError);

  try {
    parse("x1 + @", 2);
    FAIL("expected a parse error");
  } catch (const ParseError& err) {
    CHECK(err.position == 5);
  }
}

TEST_CASE("evaluate handles arithmetic and composition") {
  CHECK(evaluate(parse("x1+x2", 2), std::vector<double>{0.25, 0.5}) == 0.75);
  CHECK(evaluate(parse("exp(log(x1))", 1), std::vector<double>{0.7}) ==
        doctest::Approx(0.7).epsilon(1e-12));
  CHECK(evaluate(parse("mean(x)", 3), std::vector<double>{3.0, 6.0, 9.0}) == 6.0);
  CHECK(evaluate(parse("min(x)", 3), std::vector<double>{3.0, -6.0, 9.0}) == -6.0);
  CHECK(evaluate(parse("max(x)", 3), std::vector<double>{3.0, -6.0, 9.0}) == 9.0);
  CHECK(evaluate(parse("sum(exp(x))", 2), std::vector<double>{0.0, 1.0}) ==
        doctest::Approx(1.0 + std::exp(1.0)).epsilon(1e-14));
  CHECK(evaluate(parse("sign(x1 - x2)", 2), std::vector<double>{0.2, 0.7}) == -1.0);
  CHECK(evaluate(parse("sign(x1 - x2)", 2), std::vector<double>{0.7, 0.2}) == 1.0);
  CHECK(evaluate(parse("sign(x1 - x2)", 2), std::vector<double>{0.7, 0.7}) == 0.0);
  // Precedence: unary minus binds tighter than '^'; '^' is right-associative.
  CHECK(evaluate(parse("-x1^2", 1), std::vector<double>{3.0}) == 9.0);
  CHECK(evaluate(parse("2^3^2", 1), std::vector<double>{0.0}) == 512.0);
  CHECK(evaluate(parse("2^-1", 1), std::vector<double>{0.0}) == 0.5);
}

TEST_CASE("evaluate reports domain errors with the offending subexpression") {
  auto expect_eval_error = [](const char* text, std::vector<double> x,
                              const char* needle) {
    const DerivedExpr e = parse(text, static_cast<int>(x.size()));
    try {
      evaluate(e, x);
      FAIL_CHECK("expected EvalError for " << text);
    } catch (const EvalError& err) {
      CHECK(std::string(err.what()).find(needle) != std::string::npos);
    }
  };
  expect_eval_error("log(x1)", {-1.0}, "log(x1)");
  expect_eval_error("log(x1)", {0.0}, "nonpositive");
  expect_eval_error("sqrt(x1 - 2)", {1.0}, "sqrt");
  expect_eval_error("x1 / (x2 - x2)", {1.0, 3.0}, "division by zero");
  expect_eval_error("exp(x1)", {1000.0}, "non-finite");
  expect_eval_error("x1 ^ x2", {-2.0, 0.5}, "non-finite");
}

TEST_CASE("pretty_print canonical forms") {
  CHECK(pretty_print(parse("x1+x2", 2)) == "(x1 + x2)");
  CHECK(pretty_print(parse("x1+x2*x3", 3)) == "(x1 + (x2 * x3))");
  CHECK(pretty_print(parse("-x1", 1)) == "(-x1)");
  CHECK(pretty_print(parse("mean(x)", 3)) == "mean(x)");
  CHECK(pretty_print(parse("log(mean(exp(x)))", 3)) == "log(mean(exp(x)))");

  const DerivedExpr m = parse("mean(x)", 3);
  CHECK(structurally_equal(parse(pretty_print(m), 3), m));
}

TEST_CASE("round-trip: parse(pretty_print(e)) is structurally equal") {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    AstGen gen(seed, 1 + static_cast<int>(seed % 3));
    const DerivedExpr e = gen.generate(static_cast<int>(seed % 6) + 1);
    const std::string text = pretty_print(e);
    const DerivedExpr back = parse(text, e.dimension);
    if (!structurally_equal(back, e)) {
      CAPTURE(text);
      FAIL_CHECK("round-trip mismatch at seed " << seed);
    }
    ++checked;
  }
  CHECK(checked == 1000);
}

TEST_CASE("evaluation agrees with the reference interpreter") {
  std::mt19937_64 input_rng(99);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 600; ++seed) {
    const int dim = 1 + static_cast<int>(seed % 3);
    AstGen gen(seed * 7 + 1, dim);
    const DerivedExpr e = gen.generate(static_cast<int>(seed % 5) + 1);
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> x(dim);
      for (auto& v : x) v = pos(input_rng);
      double got;
      try {
        got = evaluate(e, x);
      } catch (const EvalError&) {
        continue;  // domain error; the reference would produce nan/inf here
      }
      const double want = reference_eval(e, e.root, x, -1);
      CHECK(got == doctest::Approx(want).epsilon(1e-12));
      ++compared;
    }
  }
  CHECK(compared > 1000);
}

TEST_CASE("parsing is deterministic") {
  const std::string text = "log(x1) + mean(exp(x)) * 2 - x2 ^ 0.5";
  const DerivedExpr a = parse(text, 2);
  const DerivedExpr b = parse(text, 2);
  CHECK(structurally_equal(a, b));
  CHECK(pretty_print(a) == pretty_print(b));
}
