#include "gaf/field.hpp"

#include <algorithm>
#include <cmath>

namespace gaf {

double weight_p(FieldWeight w) { return w == FieldWeight::Scalar ? 0.0 : 0.5; }

double weight_q(FieldWeight w) { return w == FieldWeight::Density ? 0.5 : 0.0; }

const char* weight_name(FieldWeight w) {
  switch (w) {
    case FieldWeight::Scalar: return "scalar";
    case FieldWeight::Spinor: return "spinor";
    case FieldWeight::Density: return "density";
  }
  return "?";
}

ComplexField make_constant_field(const GridDomain& g, Complex value, FieldWeight w) {
  ComplexField f;
  f.domain = g;
  f.weight = w;
  f.values.assign(static_cast<std::size_t>(g.size()), value);
  return f;
}

ComplexField sample_expression(const GridDomain& g, const ExprHandle& h, FieldWeight w) {
  ComplexField f;
  f.domain = g;
  f.weight = w;
  f.expr = h;
  f.values.resize(static_cast<std::size_t>(g.size()));
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      f.values[g.index(j, k)] = h(g.node(j, k));
  return f;
}

ComplexField sample_function(const GridDomain& g,
                             const std::function<Complex(Complex)>& fn,
                             FieldWeight w) {
  ComplexField f;
  f.domain = g;
  f.weight = w;
  f.values.resize(static_cast<std::size_t>(g.size()));
  for (int k = 0; k < g.ny; ++k)
    for (int j = 0; j < g.nx; ++j)
      f.values[g.index(j, k)] = fn(g.node(j, k));
  return f;
}

namespace {

ComplexField zip(const ComplexField& a, const ComplexField& b, const char* where,
                 Complex (*op)(Complex, Complex)) {
  require_same_grid(a.domain, b.domain, where);
  ComplexField out;
  out.domain = a.domain;
  out.weight = a.weight;
  out.values.resize(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out.values[i] = op(a.values[i], b.values[i]);
  return out;
}

} // namespace

ComplexField add(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, "add", [](Complex x, Complex y) { return x + y; });
}

ComplexField sub(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, "sub", [](Complex x, Complex y) { return x - y; });
}

ComplexField mul(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, "mul", [](Complex x, Complex y) { return x * y; });
}

ComplexField div(const ComplexField& a, const ComplexField& b) {
  return zip(a, b, "div", [](Complex x, Complex y) { return x / y; });
}

ComplexField scale(const ComplexField& a, Complex s) {
  ComplexField out = a;
  out.expr = {};
  for (auto& v : out.values) v *= s;
  return out;
}

ComplexField conj_field(const ComplexField& a) {
  ComplexField out = a;
  out.expr = {};
  for (auto& v : out.values) v = std::conj(v);
  return out;
}

ComplexField shift(const ComplexField& a, Complex s) {
  ComplexField out = a;
  out.expr = {};
  for (auto& v : out.values) v += s;
  return out;
}

FieldNorms field_norms(const ComplexField& f) {
  const GridDomain& g = f.domain;
  const double hx = g.hx(), hy = g.hy();
  FieldNorms n;
  double sum = 0.0;
  for (int k = 0; k < g.ny; ++k) {
    const double wy = (k == 0 || k == g.ny - 1) ? 0.5 : 1.0;
    for (int j = 0; j < g.nx; ++j) {
      const double wx = (j == 0 || j == g.nx - 1) ? 0.5 : 1.0;
      const Complex v = f.values[g.index(j, k)];
      sum += wx * wy * std::norm(v);
      n.sup = std::max(n.sup, std::abs(v));
      n.max_real_part = std::max(n.max_real_part, std::abs(v.real()));
    }
  }
  n.l2 = std::sqrt(hx * hy * sum);
  return n;
}

FieldNorms interior_norms(const ComplexField& f, int margin) {
  const GridDomain& g = f.domain;
  const int m = std::min({margin, (g.nx - 1) / 2, (g.ny - 1) / 2});
  FieldNorms n;
  double sum = 0.0;
  for (int k = m; k < g.ny - m; ++k)
    for (int j = m; j < g.nx - m; ++j) {
      const Complex v = f.values[g.index(j, k)];
      sum += std::norm(v);
      n.sup = std::max(n.sup, std::abs(v));
      n.max_real_part = std::max(n.max_real_part, std::abs(v.real()));
    }
  n.l2 = std::sqrt(g.hx() * g.hy() * sum);
  return n;
}

double relative_residual(const ComplexField& num, const ComplexField& den, int margin) {
  require_same_grid(num.domain, den.domain, "relative_residual");
  const double n = interior_norms(num, margin).l2;
  const double d = interior_norms(den, margin).l2;
  return n / std::max(d, kNormFloor);
}

double sup_difference(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.domain, b.domain, "sup_difference");
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    s = std::max(s, std::abs(a.values[i] - b.values[i]));
  return s;
}

} // namespace gaf
