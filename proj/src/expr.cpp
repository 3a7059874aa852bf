#include "maxent/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "maxent/error.hpp"
#include "maxent/numeric.hpp"

namespace maxent {

namespace {

constexpr int kMaxDepth = 200;

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Lexer {
  std::string_view text;
  std::size_t pos = 0;

  Tok kind = Tok::End;
  std::size_t tok_pos = 0;
  double number = 0.0;
  std::string_view ident;

  void next() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    tok_pos = pos;
    if (pos >= text.size()) {
      kind = Tok::End;
      return;
    }
    const char c = text[pos];
    switch (c) {
      case '+': kind = Tok::Plus; ++pos; return;
      case '-': kind = Tok::Minus; ++pos; return;
      case '*': kind = Tok::Star; ++pos; return;
      case '/': kind = Tok::Slash; ++pos; return;
      case '^': kind = Tok::Caret; ++pos; return;
      case '(': kind = Tok::LParen; ++pos; return;
      case ')': kind = Tok::RParen; ++pos; return;
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* first = text.data() + pos;
      const char* last = text.data() + text.size();
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc{} || ptr == first)
        throw ParseError("malformed number at position " + std::to_string(pos), pos);
      pos += static_cast<std::size_t>(ptr - first);
      kind = Tok::Number;
      number = v;
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = pos;
      while (end < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[end])) || text[end] == '_'))
        ++end;
      kind = Tok::Ident;
      ident = text.substr(pos, end - pos);
      pos = end;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "' at position " +
                         std::to_string(pos),
                     pos);
  }
};

struct Parser {
  Lexer lex;
  int dimension;
  std::vector<ExprNode>* nodes;
  int aggregate_depth = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at position " + std::to_string(lex.tok_pos), lex.tok_pos);
  }

  int add(ExprNode n) {
    nodes->push_back(n);
    return static_cast<int>(nodes->size() - 1);
  }

  int parse_expr(int depth) {
    if (depth > kMaxDepth) fail("expression too deeply nested");
    int left = parse_term(depth + 1);
    while (lex.kind == Tok::Plus || lex.kind == Tok::Minus) {
      const NodeKind op = (lex.kind == Tok::Plus) ? NodeKind::Add : NodeKind::Sub;
      lex.next();
      const int right = parse_term(depth + 1);
      left = add({op, 0.0, 0, left, right});
    }
    return left;
  }

  int parse_term(int depth) {
    if (depth > kMaxDepth) fail("expression too deeply nested");
    int left = parse_factor(depth + 1);
    while (lex.kind == Tok::Star || lex.kind == Tok::Slash) {
      const NodeKind op = (lex.kind == Tok::Star) ? NodeKind::Mul : NodeKind::Div;
      lex.next();
      const int right = parse_factor(depth + 1);
      left = add({op, 0.0, 0, left, right});
    }
    return left;
  }

  int parse_factor(int depth) {
    if (depth > kMaxDepth) fail("expression too deeply nested");
    const int base = parse_unary(depth + 1);
    if (lex.kind == Tok::Caret) {
      lex.next();
      const int exponent = parse_factor(depth + 1);  // right-associative
      return add({NodeKind::Pow, 0.0, 0, base, exponent});
    }
    return base;
  }

  int parse_unary(int depth) {
    if (depth > kMaxDepth) fail("expression too deeply nested");
    if (lex.kind == Tok::Minus) {
      lex.next();
      const int child = parse_unary(depth + 1);
      return add({NodeKind::Negate, 0.0, 0, child, -1});
    }
    return parse_primary(depth + 1);
  }

  int parse_primary(int depth) {
    if (depth > kMaxDepth) fail("expression too deeply nested");
    switch (lex.kind) {
      case Tok::Number: {
        const double v = lex.number;
        lex.next();
        return add({NodeKind::Literal, v, 0, -1, -1});
      }
      case Tok::LParen: {
        lex.next();
        const int inner = parse_expr(depth + 1);
        if (lex.kind != Tok::RParen) fail("expected ')'");
        lex.next();
        return inner;
      }
      case Tok::Ident:
        return parse_ident(depth);
      default:
        fail("expected a number, identifier, or '('");
    }
  }

  int parse_ident(int depth) {
    const std::string_view name = lex.ident;
    const std::size_t at = lex.tok_pos;

    if (name == "x") {
      lex.next();
      if (aggregate_depth == 0)
        throw ParseError(
            "bare 'x' is only valid inside an aggregate argument at position " +
                std::to_string(at),
            at);
      return add({NodeKind::VectorArg, 0.0, 0, -1, -1});
    }
    if (name.size() > 1 && name[0] == 'x' &&
        std::isdigit(static_cast<unsigned char>(name[1]))) {
      int idx = 0;
      auto [ptr, ec] = std::from_chars(name.data() + 1, name.data() + name.size(), idx);
      if (ec != std::errc{} || ptr != name.data() + name.size())
        throw ParseError("unknown identifier '" + std::string(name) + "' at position " +
                             std::to_string(at),
                         at);
      if (idx < 1 || idx > dimension)
        throw ParseError("variable index out of range for dimension " +
                             std::to_string(dimension) + ": '" + std::string(name) +
                             "' at position " + std::to_string(at),
                         at);
      lex.next();
      return add({NodeKind::Variable, 0.0, idx, -1, -1});
    }

    NodeKind fn;
    bool aggregate = false;
    if (name == "log") fn = NodeKind::Log;
    else if (name == "exp") fn = NodeKind::Exp;
    else if (name == "sqrt") fn = NodeKind::Sqrt;
    else if (name == "sign") fn = NodeKind::Sign;
    else if (name == "sum") { fn = NodeKind::Sum; aggregate = true; }
    else if (name == "mean") { fn = NodeKind::Mean; aggregate = true; }
    else if (name == "min") { fn = NodeKind::Min; aggregate = true; }
    else if (name == "max") { fn = NodeKind::Max; aggregate = true; }
    else
      throw ParseError("unknown identifier '" + std::string(name) + "' at position " +
                           std::to_string(at),
                       at);

    lex.next();
    if (lex.kind != Tok::LParen) fail("expected '(' after function name");
    lex.next();
    if (aggregate) {
      if (aggregate_depth > 0)
        throw ParseError("aggregates cannot nest at position " + std::to_string(at), at);
      ++aggregate_depth;
      const int arg = parse_expr(depth + 1);
      --aggregate_depth;
      if (lex.kind != Tok::RParen) fail("expected ')'");
      lex.next();
      return add({fn, 0.0, 0, arg, -1});
    }
    const int arg = parse_expr(depth + 1);
    if (lex.kind != Tok::RParen) fail("expected ')'");
    lex.next();
    return add({fn, 0.0, 0, arg, -1});
  }
};

struct Evaluator {
  const DerivedExpr& e;
  std::span<const double> x;

  [[noreturn]] void domain_error(const std::string& what, int node) const {
    throw EvalError(what + " in " + pretty_print_node(e, node));
  }

  double check_finite(double v, int node) const {
    if (!std::isfinite(v)) domain_error("non-finite result", node);
    return v;
  }

  // `component` is the active aggregate component, or -1 outside aggregates.
  double eval(int idx, int component) const {
    const ExprNode& n = e.nodes[idx];
    switch (n.kind) {
      case NodeKind::Literal: return n.value;
      case NodeKind::Variable: return x[n.var - 1];
      case NodeKind::VectorArg: return x[component];
      case NodeKind::Add:
        return check_finite(eval(n.lhs, component) + eval(n.rhs, component), idx);
      case NodeKind::Sub:
        return check_finite(eval(n.lhs, component) - eval(n.rhs, component), idx);
      case NodeKind::Mul:
        return check_finite(eval(n.lhs, component) * eval(n.rhs, component), idx);
      case NodeKind::Div: {
        const double den = eval(n.rhs, component);
        if (den == 0.0) domain_error("division by zero", idx);
        return check_finite(eval(n.lhs, component) / den, idx);
      }
      case NodeKind::Pow: {
        const double a = eval(n.lhs, component);
        const double b = eval(n.rhs, component);
        return check_finite(std::pow(a, b), idx);
      }
      case NodeKind::Negate: return -eval(n.lhs, component);
      case NodeKind::Log: {
        const double a = eval(n.lhs, component);
        if (a <= 0.0) domain_error("log of a nonpositive value", idx);
        return check_finite(std::log(a), idx);
      }
      case NodeKind::Exp:
        return check_finite(std::exp(eval(n.lhs, component)), idx);
      case NodeKind::Sqrt: {
        const double a = eval(n.lhs, component);
        if (a < 0.0) domain_error("sqrt of a negative value", idx);
        return std::sqrt(a);
      }
      case NodeKind::Sign: {
        const double a = eval(n.lhs, component);
        return (a > 0.0) ? 1.0 : (a < 0.0) ? -1.0 : 0.0;
      }
      case NodeKind::Sum:
      case NodeKind::Mean: {
        double acc = 0.0;
        for (int k = 0; k < e.dimension; ++k) acc += eval(n.lhs, k);
        if (n.kind == NodeKind::Mean) acc /= static_cast<double>(e.dimension);
        return check_finite(acc, idx);
      }
      case NodeKind::Min:
      case NodeKind::Max: {
        double best = eval(n.lhs, 0);
        for (int k = 1; k < e.dimension; ++k) {
          const double v = eval(n.lhs, k);
          best = (n.kind == NodeKind::Min) ? std::min(best, v) : std::max(best, v);
        }
        return best;
      }
    }
    throw Error("unreachable node kind");
  }
};

void print_node(const DerivedExpr& e, int idx, std::string& out) {
  const ExprNode& n = e.nodes[idx];
  auto binary = [&](const char* op) {
    out += '(';
    print_node(e, n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(e, n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Literal: out += format_double_shortest(n.value); return;
    case NodeKind::Variable: out += 'x'; out += std::to_string(n.var); return;
    case NodeKind::VectorArg: out += 'x'; return;
    case NodeKind::Add: binary("+"); return;
    case NodeKind::Sub: binary("-"); return;
    case NodeKind::Mul: binary("*"); return;
    case NodeKind::Div: binary("/"); return;
    case NodeKind::Pow: binary("^"); return;
    case NodeKind::Negate:
      out += "(-";
      print_node(e, n.lhs, out);
      out += ')';
      return;
    case NodeKind::Log: out += "log("; break;
    case NodeKind::Exp: out += "exp("; break;
    case NodeKind::Sqrt: out += "sqrt("; break;
    case NodeKind::Sign: out += "sign("; break;
    case NodeKind::Sum: out += "sum("; break;
    case NodeKind::Mean: out += "mean("; break;
    case NodeKind::Min: out += "min("; break;
    case NodeKind::Max: out += "max("; break;
  }
  print_node(e, n.lhs, out);
  out += ')';
}

bool nodes_equal(const DerivedExpr& a, int ia, const DerivedExpr& b, int ib) {
  const ExprNode& na = a.nodes[ia];
  const ExprNode& nb = b.nodes[ib];
  if (na.kind != nb.kind) return false;
  switch (na.kind) {
    case NodeKind::Literal: return na.value == nb.value;
    case NodeKind::Variable: return na.var == nb.var;
    case NodeKind::VectorArg: return true;
    default: break;
  }
  if ((na.lhs >= 0) != (nb.lhs >= 0) || (na.rhs >= 0) != (nb.rhs >= 0)) return false;
  if (na.lhs >= 0 && !nodes_equal(a, na.lhs, b, nb.lhs)) return false;
  if (na.rhs >= 0 && !nodes_equal(a, na.rhs, b, nb.rhs)) return false;
  return true;
}

}  // namespace

DerivedExpr parse(std::string_view text, int dimension) {
  if (dimension < 1) throw ConfigError("parse: dimension must be >= 1");
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) { blank = false; break; }
  if (blank) throw ParseError("empty expression", 0);

  DerivedExpr out;
  out.dimension = dimension;
  Parser p{Lexer{text}, dimension, &out.nodes};
  p.lex.next();
  out.root = p.parse_expr(0);
  if (p.lex.kind != Tok::End) p.fail("unexpected trailing input");
  return out;
}

double evaluate(const DerivedExpr& e, std::span<const double> x) {
  if (e.root < 0) throw ConfigError("evaluate: empty expression");
  if (x.size() != static_cast<std::size_t>(e.dimension))
    throw ConfigError("evaluate: point dimension mismatch");
  return Evaluator{e, x}.eval(e.root, -1);
}

std::string pretty_print(const DerivedExpr& e) { return pretty_print_node(e, e.root); }

std::string pretty_print_node(const DerivedExpr& e, int node) {
  std::string out;
  print_node(e, node, out);
  return out;
}

bool structurally_equal(const DerivedExpr& a, const DerivedExpr& b) {
  if (a.dimension != b.dimension) return false;
  if ((a.root < 0) != (b.root < 0)) return false;
  if (a.root < 0) return true;
  return nodes_equal(a, a.root, b, b.root);
}

}  // namespace maxent
