#include "gaf/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <optional>

namespace gaf {

ExprPtr Expr::make_literal(Complex v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Literal;
  e->literal = v;
  return e;
}

ExprPtr Expr::make_variable(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Variable;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::make_parameter(std::string name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Parameter;
  e->name = std::move(name);
  return e;
}

ExprPtr Expr::make_negate(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Negate;
  e->lhs = std::move(a);
  return e;
}

ExprPtr Expr::make_binary(Kind op, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = op;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr Expr::make_pow(ExprPtr base, int n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = n;
  return e;
}

ExprPtr Expr::make_call(Func f, ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Call;
  e->func = f;
  e->lhs = std::move(a);
  return e;
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok { Number, ImagNumber, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind;
  std::size_t offset;
  double number = 0.0;
  std::string text;
};

struct Lexer {
  const std::string& src;
  std::size_t pos = 0;

  explicit Lexer(const std::string& s) : src(s) {}

  Token next() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    const std::size_t start = pos;
    if (pos >= src.size()) return {Tok::End, start};
    const char c = src[pos];
    switch (c) {
      case '+': ++pos; return {Tok::Plus, start};
      case '-': ++pos; return {Tok::Minus, start};
      case '*': ++pos; return {Tok::Star, start};
      case '/': ++pos; return {Tok::Slash, start};
      case '^': ++pos; return {Tok::Caret, start};
      case '(': ++pos; return {Tok::LParen, start};
      case ')': ++pos; return {Tok::RParen, start};
      default: break;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && pos + 1 < src.size() &&
         std::isdigit(static_cast<unsigned char>(src[pos + 1])))) {
      std::size_t p = pos;
      while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
      if (p < src.size() && src[p] == '.') {
        ++p;
        while (p < src.size() && std::isdigit(static_cast<unsigned char>(src[p]))) ++p;
      }
      if (p < src.size() && (src[p] == 'e' || src[p] == 'E')) {
        std::size_t q = p + 1;
        if (q < src.size() && (src[q] == '+' || src[q] == '-')) ++q;
        if (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) {
          ++q;
          while (q < src.size() && std::isdigit(static_cast<unsigned char>(src[q]))) ++q;
          p = q;
        }
      }
      Token t{Tok::Number, start};
      t.number = std::stod(src.substr(pos, p - pos));
      pos = p;
      if (pos < src.size() && src[pos] == 'i') {
        ++pos;
        t.kind = Tok::ImagNumber;
      }
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t p = pos;
      while (p < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[p])) || src[p] == '_'))
        ++p;
      Token t{Tok::Ident, start};
      t.text = src.substr(pos, p - pos);
      pos = p;
      return t;
    }
    throw ParseError(start, "token", "unexpected character '" + std::string(1, c) +
                                         "' at offset " + std::to_string(start));
  }
};

// ---------------------------------------------------------------------------
// Parser (recursive descent; ^ > unary minus > * / > + -)
// ---------------------------------------------------------------------------

std::optional<Expr::Func> function_by_name(const std::string& s) {
  if (s == "conj") return Expr::Func::Conj;
  if (s == "exp") return Expr::Func::Exp;
  if (s == "re") return Expr::Func::Re;
  if (s == "im") return Expr::Func::Im;
  if (s == "abs") return Expr::Func::Abs;
  if (s == "sqrt") return Expr::Func::Sqrt;
  return std::nullopt;
}

struct Parser {
  Lexer lex;
  Token cur;

  explicit Parser(const std::string& s) : lex(s) { cur = lex.next(); }

  [[noreturn]] void fail(const std::string& expected) {
    throw ParseError(cur.offset, expected,
                     "parse error at offset " + std::to_string(cur.offset) +
                         ": expected " + expected);
  }

  void advance() { cur = lex.next(); }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    while (cur.kind == Tok::Plus || cur.kind == Tok::Minus) {
      const auto op = cur.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
      advance();
      e = Expr::make_binary(op, std::move(e), parse_term());
    }
    return e;
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_unary();
    while (cur.kind == Tok::Star || cur.kind == Tok::Slash) {
      const auto op = cur.kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div;
      advance();
      e = Expr::make_binary(op, std::move(e), parse_unary());
    }
    return e;
  }

  ExprPtr parse_unary() {
    if (cur.kind == Tok::Minus) {
      advance();
      return Expr::make_negate(parse_unary());
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (cur.kind != Tok::Caret) return base;
    const std::size_t caret_at = cur.offset;
    advance();
    ExprPtr e = parse_unary(); // right associative; folded to an int below
    return Expr::make_pow(std::move(base), fold_integer_exponent(*e, caret_at));
  }

  int fold_integer_exponent(const Expr& e, std::size_t at) {
    Complex v;
    try {
      v = eval(e, Complex(0, 0), {});
    } catch (const Error&) {
      throw ParseError(at, "integer exponent",
                       "exponent of '^' must be a constant integer (offset " +
                           std::to_string(at) + ")");
    }
    if (depends_on_variable(e) || v.imag() != 0.0 || v.real() != std::floor(v.real()) ||
        std::abs(v.real()) > 64)
      throw ParseError(at, "integer exponent",
                       "exponent of '^' must be a constant integer with |n| <= 64 (offset " +
                           std::to_string(at) + ")");
    return static_cast<int>(v.real());
  }

  ExprPtr parse_atom() {
    switch (cur.kind) {
      case Tok::Number: {
        const double v = cur.number;
        advance();
        return Expr::make_literal(Complex(v, 0.0));
      }
      case Tok::ImagNumber: {
        const double v = cur.number;
        advance();
        return Expr::make_literal(Complex(0.0, v));
      }
      case Tok::LParen: {
        advance();
        ExprPtr e = parse_expr();
        if (cur.kind != Tok::RParen) fail("')'");
        advance();
        return e;
      }
      case Tok::Ident: {
        const std::string name = cur.text;
        const std::size_t at = cur.offset;
        advance();
        if (name == "i") return Expr::make_literal(Complex(0.0, 1.0));
        if (auto f = function_by_name(name)) {
          if (cur.kind != Tok::LParen)
            throw ParseError(at, "'('", "'" + name + "' is a function; expected '(' after it");
          advance();
          ExprPtr arg = parse_expr();
          if (cur.kind != Tok::RParen) fail("')'");
          advance();
          return Expr::make_call(*f, std::move(arg));
        }
        if (name == "z" || name == "zeta") return Expr::make_variable(name);
        return Expr::make_parameter(name);
      }
      default:
        fail("operand");
    }
  }
};

} // namespace

ExprPtr parse(const std::string& src) {
  Parser p(src);
  ExprPtr e = p.parse_expr();
  if (p.cur.kind != Tok::End) p.fail("operator or end of input");
  return e;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

Complex ipow(Complex base, int n, Complex at) {
  if (n < 0) {
    if (base == Complex(0.0, 0.0))
      throw DivisionByZero(at, "negative power of zero during evaluation");
    return 1.0 / ipow(base, -n, at);
  }
  Complex acc(1.0, 0.0);
  Complex b = base;
  unsigned e = static_cast<unsigned>(n);
  while (e) {
    if (e & 1u) acc *= b;
    b *= b;
    e >>= 1u;
  }
  return acc;
}

} // namespace

Complex eval(const Expr& e, Complex z, const ParamMap& params) {
  switch (e.kind) {
    case Expr::Kind::Literal: return e.literal;
    case Expr::Kind::Variable: return z;
    case Expr::Kind::Parameter: {
      auto it = params.find(e.name);
      if (it == params.end())
        throw UnboundParameter("unbound parameter '" + e.name + "'");
      return it->second;
    }
    case Expr::Kind::Negate: return -eval(*e.lhs, z, params);
    case Expr::Kind::Add: return eval(*e.lhs, z, params) + eval(*e.rhs, z, params);
    case Expr::Kind::Sub: return eval(*e.lhs, z, params) - eval(*e.rhs, z, params);
    case Expr::Kind::Mul: return eval(*e.lhs, z, params) * eval(*e.rhs, z, params);
    case Expr::Kind::Div: {
      const Complex den = eval(*e.rhs, z, params);
      if (den == Complex(0.0, 0.0))
        throw DivisionByZero(z, "division by zero during evaluation");
      return eval(*e.lhs, z, params) / den;
    }
    case Expr::Kind::Pow: return ipow(eval(*e.lhs, z, params), e.exponent, z);
    case Expr::Kind::Call: {
      const Complex v = eval(*e.lhs, z, params);
      switch (e.func) {
        case Expr::Func::Conj: return std::conj(v);
        case Expr::Func::Exp: return std::exp(v);
        case Expr::Func::Re: return Complex(v.real(), 0.0);
        case Expr::Func::Im: return Complex(v.imag(), 0.0);
        case Expr::Func::Abs: return Complex(std::abs(v), 0.0);
        case Expr::Func::Sqrt: return std::sqrt(v);
      }
      return v;
    }
  }
  return {};
}

bool depends_on_variable(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Variable: return true;
    case Expr::Kind::Literal:
    case Expr::Kind::Parameter: return false;
    default:
      if (e.lhs && depends_on_variable(*e.lhs)) return true;
      if (e.rhs && depends_on_variable(*e.rhs)) return true;
      return false;
  }
}

// ---------------------------------------------------------------------------
// Symbolic derivative with constant folding
// ---------------------------------------------------------------------------

namespace {

bool is_literal(const ExprPtr& e, Complex v) {
  return e->kind == Expr::Kind::Literal && e->literal == v;
}

bool is_zero(const ExprPtr& e) { return is_literal(e, Complex(0, 0)); }
bool is_one(const ExprPtr& e) { return is_literal(e, Complex(1, 0)); }

ExprPtr lit(Complex v) { return Expr::make_literal(v); }

ExprPtr fold_add(ExprPtr a, ExprPtr b) {
  if (is_zero(a)) return b;
  if (is_zero(b)) return a;
  if (a->kind == Expr::Kind::Literal && b->kind == Expr::Kind::Literal)
    return lit(a->literal + b->literal);
  return Expr::make_binary(Expr::Kind::Add, std::move(a), std::move(b));
}

ExprPtr fold_neg(ExprPtr a) {
  if (a->kind == Expr::Kind::Literal) return lit(-a->literal);
  if (a->kind == Expr::Kind::Negate) return a->lhs;
  return Expr::make_negate(std::move(a));
}

ExprPtr fold_sub(ExprPtr a, ExprPtr b) {
  if (is_zero(b)) return a;
  if (is_zero(a)) return fold_neg(std::move(b));
  if (a->kind == Expr::Kind::Literal && b->kind == Expr::Kind::Literal)
    return lit(a->literal - b->literal);
  return Expr::make_binary(Expr::Kind::Sub, std::move(a), std::move(b));
}

ExprPtr fold_mul(ExprPtr a, ExprPtr b) {
  if (is_zero(a) || is_zero(b)) return lit(Complex(0, 0));
  if (is_one(a)) return b;
  if (is_one(b)) return a;
  if (a->kind == Expr::Kind::Literal && b->kind == Expr::Kind::Literal)
    return lit(a->literal * b->literal);
  return Expr::make_binary(Expr::Kind::Mul, std::move(a), std::move(b));
}

ExprPtr fold_div(ExprPtr a, ExprPtr b) {
  if (is_zero(a)) return lit(Complex(0, 0));
  if (is_one(b)) return a;
  if (a->kind == Expr::Kind::Literal && b->kind == Expr::Kind::Literal &&
      b->literal != Complex(0, 0))
    return lit(a->literal / b->literal);
  return Expr::make_binary(Expr::Kind::Div, std::move(a), std::move(b));
}

ExprPtr fold_pow(ExprPtr base, int n) {
  if (n == 0) return lit(Complex(1, 0));
  if (n == 1) return base;
  return Expr::make_pow(std::move(base), n);
}

ExprPtr derive(const ExprPtr& e) {
  if (!depends_on_variable(*e)) return lit(Complex(0, 0));
  switch (e->kind) {
    case Expr::Kind::Variable: return lit(Complex(1, 0));
    case Expr::Kind::Negate: return fold_neg(derive(e->lhs));
    case Expr::Kind::Add: return fold_add(derive(e->lhs), derive(e->rhs));
    case Expr::Kind::Sub: return fold_sub(derive(e->lhs), derive(e->rhs));
    case Expr::Kind::Mul:
      return fold_add(fold_mul(derive(e->lhs), e->rhs), fold_mul(e->lhs, derive(e->rhs)));
    case Expr::Kind::Div:
      return fold_div(fold_sub(fold_mul(derive(e->lhs), e->rhs), fold_mul(e->lhs, derive(e->rhs))),
                      fold_pow(e->rhs, 2));
    case Expr::Kind::Pow:
      return fold_mul(fold_mul(lit(Complex(e->exponent, 0)), fold_pow(e->lhs, e->exponent - 1)),
                      derive(e->lhs));
    case Expr::Kind::Call:
      switch (e->func) {
        case Expr::Func::Exp: return fold_mul(e, derive(e->lhs));
        case Expr::Func::Sqrt:
          return fold_div(derive(e->lhs), fold_mul(lit(Complex(2, 0)), e));
        case Expr::Func::Conj:
        case Expr::Func::Re:
        case Expr::Func::Im:
        case Expr::Func::Abs:
          throw NotHolomorphic(
              "derivative: non-holomorphic function applied to the variable");
      }
      break;
    default:
      break;
  }
  throw NotHolomorphic("derivative: unsupported node");
}

} // namespace

ExprPtr derivative(const ExprPtr& e) { return derive(e); }

// ---------------------------------------------------------------------------
// Printing and structural equality
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string print_literal(Complex v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) {
    if (v.imag() == 1.0) return "i";
    return format_double(v.imag()) + "i";
  }
  // General complex literals only arise from folding; render as arithmetic.
  const double im = v.imag();
  if (im < 0.0)
    return "(" + format_double(v.real()) + "-" + format_double(-im) + "i)";
  return "(" + format_double(v.real()) + "+" + format_double(im) + "i)";
}

const char* func_name(Expr::Func f) {
  switch (f) {
    case Expr::Func::Conj: return "conj";
    case Expr::Func::Exp: return "exp";
    case Expr::Func::Re: return "re";
    case Expr::Func::Im: return "im";
    case Expr::Func::Abs: return "abs";
    case Expr::Func::Sqrt: return "sqrt";
  }
  return "?";
}

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Negate: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print_rec(const Expr& e, int min_prec, std::string& out) {
  const int prec = precedence(e);
  const bool parens = prec < min_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case Expr::Kind::Literal: out += print_literal(e.literal); break;
    case Expr::Kind::Variable:
    case Expr::Kind::Parameter: out += e.name; break;
    case Expr::Kind::Negate:
      out += '-';
      print_rec(*e.lhs, 3, out);
      break;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      print_rec(*e.lhs, 1, out);
      out += (e.kind == Expr::Kind::Add) ? '+' : '-';
      print_rec(*e.rhs, 2, out);
      break;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      print_rec(*e.lhs, 2, out);
      out += (e.kind == Expr::Kind::Mul) ? '*' : '/';
      print_rec(*e.rhs, 3, out);
      break;
    case Expr::Kind::Pow:
      print_rec(*e.lhs, 5, out);
      out += '^';
      out += std::to_string(e.exponent);
      break;
    case Expr::Kind::Call:
      out += func_name(e.func);
      out += '(';
      print_rec(*e.lhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

} // namespace

std::string print(const Expr& e) {
  std::string out;
  print_rec(e, 0, out);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Literal:
      return a.literal.real() == b.literal.real() && a.literal.imag() == b.literal.imag();
    case Expr::Kind::Variable:
    case Expr::Kind::Parameter:
      return a.name == b.name;
    case Expr::Kind::Negate:
      return equal(*a.lhs, *b.lhs);
    case Expr::Kind::Pow:
      return a.exponent == b.exponent && equal(*a.lhs, *b.lhs);
    case Expr::Kind::Call:
      return a.func == b.func && equal(*a.lhs, *b.lhs);
    default:
      return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

} // namespace gaf
