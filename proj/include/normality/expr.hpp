#pragma once

// Holomorphic family expressions: parser, canonical printer, evaluator and
// forward-mode complex differentiation.
//
// A family {f_j} is one expression in the variables z1..zn and the integer
// parameter j. The grammar admits only holomorphic constructs, so every
// node has a complex derivative and the Wirtinger derivative d/d(conj z)
// vanishes identically. That is what lets `wirtinger_grad` propagate plain
// complex derivatives through the tree.
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := atom ('^' atom)?
//   atom   := 'z' DIGITS | 'j' | NUMBER | 'i' | 'exp' '(' expr ')'
//           | '(' expr ')' | '-' atom

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "normality/error.hpp"

namespace normality {

using Complex = std::complex<double>;

/// A point of C^n.
using CPoint = std::vector<Complex>;

/// (df/dz_1, ..., df/dz_n) for a holomorphic f.
using CGradient = std::vector<Complex>;

namespace expr {

enum class NodeKind { Var, Param, Real, ImagUnit, Add, Sub, Mul, Div, Pow, Exp, Neg };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  int var_index = 0;  // 0-based, Var only
  double real = 0.0;  // Real only
  NodePtr lhs;        // unary operand, or left operand
  NodePtr rhs;        // right operand / exponent
};

inline NodePtr make_node(NodeKind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  return std::make_shared<const Node>(Node{kind, 0, 0.0, std::move(lhs), std::move(rhs)});
}

inline NodePtr make_var(int index) {
  return std::make_shared<const Node>(Node{NodeKind::Var, index, 0.0, nullptr, nullptr});
}

inline NodePtr make_real(double v) {
  return std::make_shared<const Node>(Node{NodeKind::Real, 0, v, nullptr, nullptr});
}

}  // namespace expr

/// A parsed family {f_j} on C^n. Immutable; copies share the tree.
class FamilyExpr {
public:
  FamilyExpr(expr::NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {}

  const expr::Node& root() const { return *root_; }
  const expr::NodePtr& root_ptr() const { return root_; }
  int dim() const { return dim_; }

private:
  expr::NodePtr root_;
  int dim_;
};

namespace expr {
namespace detail {

inline bool is_forbidden_name(std::string_view name) {
  static constexpr std::string_view kNames[] = {"conj", "bar",  "abs",  "re",  "im",
                                                "real", "imag", "arg",  "norm", "Re",
                                                "Im",   "mod",  "conjugate"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

inline bool is_multivalued_name(std::string_view name) {
  static constexpr std::string_view kNames[] = {"log", "ln", "sqrt", "pow", "root"};
  for (auto n : kNames)
    if (n == name) return true;
  return false;
}

class Parser {
public:
  Parser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  NodePtr parse() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError("syntax error: " + what, pos_); }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (accept('+'))
        lhs = make_node(NodeKind::Add, lhs, parse_term());
      else if (accept('-'))
        lhs = make_node(NodeKind::Sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    for (;;) {
      if (accept('*'))
        lhs = make_node(NodeKind::Mul, lhs, parse_factor());
      else if (accept('/'))
        lhs = make_node(NodeKind::Div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_atom();
    skip_ws();
    if (accept('^')) {
      skip_ws();
      std::size_t at = pos_;
      NodePtr exponent = parse_atom();
      check_exponent(*exponent, at);
      return make_node(NodeKind::Pow, base, exponent);
    }
    return base;
  }

  // Exponents may only combine j and real literals; the value is checked to
  // be a non-negative integer at evaluation time.
  void check_exponent(const Node& n, std::size_t at) const {
    switch (n.kind) {
      case NodeKind::Var:
      case NodeKind::ImagUnit:
      case NodeKind::Exp:
      case NodeKind::Div:
        throw ParseError("exponent must be an integer combination of j and literals", at);
      case NodeKind::Param:
      case NodeKind::Real:
        return;
      default:
        if (n.lhs) check_exponent(*n.lhs, at);
        if (n.rhs) check_exponent(*n.rhs, at);
    }
  }

  NodePtr parse_atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = parse_expr();
      expect(')');
      return e;
    }
    if (c == '-') {
      ++pos_;
      return make_node(NodeKind::Neg, parse_atom());
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr parse_number() {
    std::size_t start = pos_;
    auto digits = [&] {
      std::size_t s = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      return pos_ - s;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail("malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) {
        // "2exp(...)" is not a number with exponent; leave 'e' for the caller.
        pos_ = save;
      }
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) {
      pos_ = start;
      fail("malformed number");
    }
    return make_real(value);
  }

  NodePtr parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view name = src_.substr(start, pos_ - start);

    if (name == "z") {
      std::size_t dstart = pos_;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      if (dstart == pos_) {
        pos_ = start;
        fail("variable 'z' needs an index");
      }
      int k = 0;
      auto [ptr, ec] = std::from_chars(src_.data() + dstart, src_.data() + pos_, k);
      if (ec != std::errc() || k < 1 || k > dim_)
        throw ParseError("variable index out of range: z" + std::string(src_.substr(dstart, pos_ - dstart)) +
                             " (dimension " + std::to_string(dim_) + ")",
                         start);
      return make_var(k - 1);
    }
    if (name == "j") return make_node(NodeKind::Param);
    if (name == "i") return make_node(NodeKind::ImagUnit);
    if (name == "exp") {
      expect('(');
      NodePtr arg = parse_expr();
      expect(')');
      return make_node(NodeKind::Exp, arg);
    }
    if (is_forbidden_name(name))
      throw ParseError("forbidden non-holomorphic construct '" + std::string(name) + "'", start);
    if (is_multivalued_name(name))
      throw ParseError("multivalued function '" + std::string(name) + "' is not supported", start);
    pos_ = start;
    fail("unknown identifier '" + std::string(name) + "'");
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

inline std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void print_node(const Node& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Var: out += "z" + std::to_string(n.var_index + 1); break;
    case NodeKind::Param: out += "j"; break;
    case NodeKind::ImagUnit: out += "i"; break;
    case NodeKind::Real: out += format_real(n.real); break;
    case NodeKind::Add: binary(" + "); break;
    case NodeKind::Sub: binary(" - "); break;
    case NodeKind::Mul: binary("*"); break;
    case NodeKind::Div: binary("/"); break;
    case NodeKind::Pow: binary("^"); break;
    case NodeKind::Exp:
      out += "exp(";
      print_node(*n.lhs, out);
      out += ')';
      break;
    case NodeKind::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      break;
  }
}

inline bool equal_nodes(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Var: return a.var_index == b.var_index;
    case NodeKind::Real: return a.real == b.real;
    case NodeKind::Param:
    case NodeKind::ImagUnit: return true;
    default:
      if (!equal_nodes(*a.lhs, *b.lhs)) return false;
      return !a.rhs || equal_nodes(*a.rhs, *b.rhs);
  }
}

constexpr double kVanishingDenominator = 1e-300;

inline Complex int_pow(Complex base, std::uint64_t k) {
  Complex result{1.0, 0.0};
  while (k != 0) {
    if (k & 1U) result *= base;
    base *= base;
    k >>= 1U;
  }
  return result;
}

inline Complex eval_node(const Node& n, int j, std::span<const Complex> z);

inline std::uint64_t eval_exponent(const Node& n, int j, std::span<const Complex> z) {
  Complex e = eval_node(n, j, z);
  double r = std::round(e.real());
  if (e.imag() != 0.0 || std::abs(e.real() - r) > 1e-9 || r < 0.0 || r > 1e15)
    throw EvalError("exponent must evaluate to a non-negative integer, got " + format_real(e.real()));
  return static_cast<std::uint64_t>(r);
}

inline Complex eval_node(const Node& n, int j, std::span<const Complex> z) {
  switch (n.kind) {
    case NodeKind::Var: return z[static_cast<std::size_t>(n.var_index)];
    case NodeKind::Param: return {static_cast<double>(j), 0.0};
    case NodeKind::Real: return {n.real, 0.0};
    case NodeKind::ImagUnit: return {0.0, 1.0};
    case NodeKind::Add: return eval_node(*n.lhs, j, z) + eval_node(*n.rhs, j, z);
    case NodeKind::Sub: return eval_node(*n.lhs, j, z) - eval_node(*n.rhs, j, z);
    case NodeKind::Mul: return eval_node(*n.lhs, j, z) * eval_node(*n.rhs, j, z);
    case NodeKind::Div: {
      Complex den = eval_node(*n.rhs, j, z);
      if (std::abs(den) < kVanishingDenominator) throw EvalError("denominator vanishes");
      return eval_node(*n.lhs, j, z) / den;
    }
    case NodeKind::Pow: return int_pow(eval_node(*n.lhs, j, z), eval_exponent(*n.rhs, j, z));
    case NodeKind::Exp: return std::exp(eval_node(*n.lhs, j, z));
    case NodeKind::Neg: return -eval_node(*n.lhs, j, z);
  }
  return {};
}

/// Value plus gradient with respect to z1..zn.
struct Jet {
  Complex value;
  CGradient grad;
};

inline Jet jet_node(const Node& n, int j, std::span<const Complex> z) {
  const std::size_t dim = z.size();
  switch (n.kind) {
    case NodeKind::Var: {
      Jet r{z[static_cast<std::size_t>(n.var_index)], CGradient(dim)};
      r.grad[static_cast<std::size_t>(n.var_index)] = 1.0;
      return r;
    }
    case NodeKind::Param:
    case NodeKind::Real:
    case NodeKind::ImagUnit: return {eval_node(n, j, z), CGradient(dim)};
    case NodeKind::Add:
    case NodeKind::Sub: {
      Jet a = jet_node(*n.lhs, j, z);
      Jet b = jet_node(*n.rhs, j, z);
      const double s = n.kind == NodeKind::Add ? 1.0 : -1.0;
      a.value += s * b.value;
      for (std::size_t k = 0; k < dim; ++k) a.grad[k] += s * b.grad[k];
      return a;
    }
    case NodeKind::Mul: {
      Jet a = jet_node(*n.lhs, j, z);
      Jet b = jet_node(*n.rhs, j, z);
      for (std::size_t k = 0; k < dim; ++k) a.grad[k] = a.grad[k] * b.value + a.value * b.grad[k];
      a.value *= b.value;
      return a;
    }
    case NodeKind::Div: {
      Jet b = jet_node(*n.rhs, j, z);
      if (std::abs(b.value) < kVanishingDenominator) throw EvalError("denominator vanishes");
      Jet a = jet_node(*n.lhs, j, z);
      const Complex q = a.value / b.value;
      for (std::size_t k = 0; k < dim; ++k) a.grad[k] = (a.grad[k] - q * b.grad[k]) / b.value;
      a.value = q;
      return a;
    }
    case NodeKind::Pow: {
      const std::uint64_t k = eval_exponent(*n.rhs, j, z);
      Jet a = jet_node(*n.lhs, j, z);
      if (k == 0) return {Complex{1.0, 0.0}, CGradient(dim)};
      const Complex slope = static_cast<double>(k) * int_pow(a.value, k - 1);
      for (auto& g : a.grad) g *= slope;
      a.value = int_pow(a.value, k);
      return a;
    }
    case NodeKind::Exp: {
      Jet a = jet_node(*n.lhs, j, z);
      a.value = std::exp(a.value);
      for (auto& g : a.grad) g *= a.value;
      return a;
    }
    case NodeKind::Neg: {
      Jet a = jet_node(*n.lhs, j, z);
      a.value = -a.value;
      for (auto& g : a.grad) g = -g;
      return a;
    }
  }
  return {};
}

inline void check_point(const FamilyExpr& f, std::span<const Complex> z) {
  if (static_cast<int>(z.size()) != f.dim())
    throw DomainError("point has dimension " + std::to_string(z.size()) + ", family has dimension " +
                      std::to_string(f.dim()));
}

}  // namespace detail

/// Parses `src` as a family on C^n. Throws ParseError on malformed input,
/// out-of-range variables and non-holomorphic constructs.
inline FamilyExpr parse_family(std::string_view src, int n) {
  if (n < 1) throw DomainError("dimension must be positive");
  return FamilyExpr(detail::Parser(src, n).parse(), n);
}

/// Canonical text form; `parse_family(print(f), f.dim())` reproduces f.
inline std::string print(const FamilyExpr& f) {
  std::string out;
  detail::print_node(f.root(), out);
  return out;
}

/// Structural equality of two expression trees.
inline bool same_tree(const FamilyExpr& a, const FamilyExpr& b) {
  return a.dim() == b.dim() && detail::equal_nodes(a.root(), b.root());
}

/// The reciprocal family {1/f_j}.
inline FamilyExpr reciprocal(const FamilyExpr& f) {
  return FamilyExpr(make_node(NodeKind::Div, make_real(1.0), f.root_ptr()), f.dim());
}

}  // namespace expr

/// f_j(z).
inline Complex eval(const FamilyExpr& f, int j, std::span<const Complex> z) {
  expr::detail::check_point(f, z);
  return expr::detail::eval_node(f.root(), j, z);
}

/// f_j(z) together with its complex gradient.
inline expr::detail::Jet eval_with_grad(const FamilyExpr& f, int j, std::span<const Complex> z) {
  expr::detail::check_point(f, z);
  return expr::detail::jet_node(f.root(), j, z);
}

/// (df_j/dz_1, ..., df_j/dz_n) at z by forward-mode differentiation.
inline CGradient wirtinger_grad(const FamilyExpr& f, int j, std::span<const Complex> z) {
  return eval_with_grad(f, j, z).grad;
}

}  // namespace normality
