#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "gaf/errors.hpp"

namespace gaf {

using Complex = std::complex<double>;
using ParamMap = std::map<std::string, Complex>;

/// Immutable AST for the small complex-expression language used by configs
/// (seed fields, potentials, and holomorphic maps z(zeta)).
///
/// Grammar: literals ("1.5", "2i", bare "i"), the variable ("z" or "zeta"),
/// named parameters, operators + - * / ^ (integer powers only, right
/// associative), functions conj, exp, re, im, abs, sqrt (principal branch).
/// Precedence: ^  >  unary minus  >  * /  >  + -.
class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
public:
  enum class Kind { Literal, Variable, Parameter, Negate, Add, Sub, Mul, Div, Pow, Call };
  enum class Func { Conj, Exp, Re, Im, Abs, Sqrt };

  Kind kind;
  Complex literal{};         // Literal
  std::string name;          // Variable ("z"/"zeta") or Parameter name
  ExprPtr lhs, rhs;          // children (rhs unused for unary)
  int exponent = 0;          // Pow
  Func func = Func::Conj;    // Call

  static ExprPtr make_literal(Complex v);
  static ExprPtr make_variable(std::string name);
  static ExprPtr make_parameter(std::string name);
  static ExprPtr make_negate(ExprPtr a);
  static ExprPtr make_binary(Kind op, ExprPtr a, ExprPtr b);
  static ExprPtr make_pow(ExprPtr base, int n);
  static ExprPtr make_call(Func f, ExprPtr a);
};

/// Parse source text into an AST. Throws ParseError (byte offset + expected
/// token set) on malformed input.
ExprPtr parse(const std::string& src);

/// Evaluate at a point with all free parameters bound. Throws DivisionByZero
/// (carrying the evaluation point) or UnboundParameter.
Complex eval(const Expr& e, Complex z, const ParamMap& params = {});
inline Complex eval(const ExprPtr& e, Complex z, const ParamMap& params = {}) {
  return eval(*e, z, params);
}

/// Exact symbolic derivative d/dz for expressions holomorphic in the
/// variable. Throws NotHolomorphic if conj/re/im/abs touches the variable.
ExprPtr derivative(const ExprPtr& e);

/// Minimal-parentheses rendering; parse(print(e)) is structurally identical
/// to e for any tree the parser can produce.
std::string print(const Expr& e);
inline std::string print(const ExprPtr& e) { return print(*e); }

/// Structural equality.
bool equal(const Expr& a, const Expr& b);
inline bool equal(const ExprPtr& a, const ExprPtr& b) { return equal(*a, *b); }

/// True if the variable occurs anywhere in the tree.
bool depends_on_variable(const Expr& e);

/// Expression plus its parameter bindings; enough to evaluate anywhere.
struct ExprHandle {
  ExprPtr expr;
  ParamMap params;

  explicit operator bool() const { return static_cast<bool>(expr); }
  Complex operator()(Complex z) const { return eval(*expr, z, params); }
};

} // namespace gaf
