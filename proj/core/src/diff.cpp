#include "gaf/diff.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "fftw_util.hpp"

namespace gaf {

const char* scheme_name(DiffScheme s) {
  return s == DiffScheme::Centered4 ? "centered4" : "spectral";
}

double scheme_tolerance(DiffScheme s) {
  return s == DiffScheme::Centered4 ? 1e-5 : 1e-9;
}

namespace {

// 4th-order first derivative of one line of samples; one-sided 5-point
// stencils at the two outermost nodes on each side. Falls back to 2nd order
// for lines shorter than 5 nodes.
void derive_line_centered4(const Complex* f, Complex* out, int n, double h,
                           std::ptrdiff_t stride) {
  auto F = [&](int i) { return f[i * stride]; };
  const double s12 = 1.0 / (12.0 * h);
  if (n >= 5) {
    out[0 * stride] = (-25.0 * F(0) + 48.0 * F(1) - 36.0 * F(2) + 16.0 * F(3) - 3.0 * F(4)) * s12;
    out[1 * stride] = (-3.0 * F(0) - 10.0 * F(1) + 18.0 * F(2) - 6.0 * F(3) + F(4)) * s12;
    for (int i = 2; i < n - 2; ++i)
      out[i * stride] = (F(i - 2) - 8.0 * F(i - 1) + 8.0 * F(i + 1) - F(i + 2)) * s12;
    out[(n - 2) * stride] =
        (-F(n - 5) + 6.0 * F(n - 4) - 18.0 * F(n - 3) + 10.0 * F(n - 2) + 3.0 * F(n - 1)) * s12;
    out[(n - 1) * stride] =
        (3.0 * F(n - 5) - 16.0 * F(n - 4) + 36.0 * F(n - 3) - 48.0 * F(n - 2) + 25.0 * F(n - 1)) * s12;
    return;
  }
  if (n >= 3) {
    const double s2 = 1.0 / (2.0 * h);
    out[0] = (-3.0 * F(0) + 4.0 * F(1) - F(2)) * s2;
    for (int i = 1; i < n - 1; ++i) out[i * stride] = (F(i + 1) - F(i - 1)) * s2;
    out[(n - 1) * stride] = (F(n - 3) - 4.0 * F(n - 2) + 3.0 * F(n - 1)) * s2;
    return;
  }
  out[0] = (F(1) - F(0)) / h;
  out[stride] = out[0];
}

// Fourier derivative of one line, treating the samples as one period of a
// function with period n*h. The Nyquist mode (even n) is zeroed.
struct SpectralLine {
  int n;
  double h;
  detail::FftwBuffer buf;
  detail::PlanHandle fwd, bwd;

  SpectralLine(int n_, double h_) : n(n_), h(h_), buf(static_cast<std::size_t>(n_)) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd = detail::PlanHandle(
        fftw_plan_dft_1d(n, buf.data, buf.data, FFTW_FORWARD, FFTW_ESTIMATE));
    bwd = detail::PlanHandle(
        fftw_plan_dft_1d(n, buf.data, buf.data, FFTW_BACKWARD, FFTW_ESTIMATE));
  }

  void derive(const Complex* f, Complex* out, std::ptrdiff_t stride) {
    Complex* b = buf.cx();
    for (int i = 0; i < n; ++i) b[i] = f[i * stride];
    fftw_execute(fwd.plan);
    const double period = n * h;
    const double base = 2.0 * std::numbers::pi / period;
    for (int m = 0; m < n; ++m) {
      int s = (m <= n / 2) ? m : m - n;
      if (n % 2 == 0 && m == n / 2) s = 0;
      b[m] *= Complex(0.0, base * s);
    }
    fftw_execute(bwd.plan);
    const double inv = 1.0 / n;
    for (int i = 0; i < n; ++i) out[i * stride] = b[i] * inv;
  }
};

enum class Axis { X, Y };

ComplexField partial(const ComplexField& f, Axis axis, DiffScheme scheme) {
  const GridDomain& g = f.domain;
  ComplexField out = f;
  out.expr = {};
  const int n = axis == Axis::X ? g.nx : g.ny;
  const double h = axis == Axis::X ? g.hx() : g.hy();
  const std::ptrdiff_t stride = axis == Axis::X ? 1 : g.nx;
  const int lines = axis == Axis::X ? g.ny : g.nx;
  const std::ptrdiff_t line_stride = axis == Axis::X ? g.nx : 1;

  if (scheme == DiffScheme::Centered4) {
    for (int l = 0; l < lines; ++l)
      derive_line_centered4(f.values.data() + l * line_stride,
                            out.values.data() + l * line_stride, n, h, stride);
  } else {
    SpectralLine sp(n, h);
    for (int l = 0; l < lines; ++l)
      sp.derive(f.values.data() + l * line_stride,
                out.values.data() + l * line_stride, stride);
  }
  return out;
}

} // namespace

ComplexField dbar(const ComplexField& f, DiffScheme scheme) {
  ComplexField fx = partial(f, Axis::X, scheme);
  ComplexField fy = partial(f, Axis::Y, scheme);
  ComplexField out = std::move(fx);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = 0.5 * (out.values[i] + Complex(0, 1) * fy.values[i]);
  return out;
}

ComplexField dz(const ComplexField& f, DiffScheme scheme) {
  ComplexField fx = partial(f, Axis::X, scheme);
  ComplexField fy = partial(f, Axis::Y, scheme);
  ComplexField out = std::move(fx);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = 0.5 * (out.values[i] - Complex(0, 1) * fy.values[i]);
  return out;
}

} // namespace gaf
