#include "gaf/pompeiu.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <vector>

#include "fftw_util.hpp"

namespace gaf {

namespace detail {

struct PompeiuImpl {
  int px = 0, py = 0;
  std::vector<Complex> kernel_hat; // forward image of the padded kernel weights
  PlanHandle fwd, bwd;             // in-place 2-D c2c transforms on px*py buffers
};

} // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

int next_smooth(int n) {
  for (;; ++n) {
    int m = n;
    for (int f : {2, 3, 5, 7})
      while (m % f == 0) m /= f;
    if (m == 1) return n;
  }
}

std::size_t allocation_cap_bytes() {
  if (const char* s = std::getenv("GAF_MAX_ALLOC_BYTES")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(s, &end, 10);
    if (end != s && v > 0) return static_cast<std::size_t>(v);
  }
  return std::size_t{1} << 31; // 2 GiB
}

// Scatter kernel weights over the circulant padded array: offset o maps to
// index (o + P) mod P, unused middle indices stay zero (linear convolution).
// The convolution below indexes the kernel by target-minus-source offsets,
// while the quadrature weights are defined at source-minus-target offsets,
// so slot v holds weight(-v).
template <typename WeightFn>
void fill_padded_kernel(std::complex<double>* buf, const GridDomain& g, int px, int py,
                        WeightFn&& weight) {
  const std::size_t total = static_cast<std::size_t>(px) * static_cast<std::size_t>(py);
  std::fill(buf, buf + total, Complex(0, 0));
  for (int oy = -(g.ny - 1); oy <= g.ny - 1; ++oy) {
    const int qy = (oy + py) % py;
    for (int ox = -(g.nx - 1); ox <= g.nx - 1; ++ox) {
      const int qx = (ox + px) % px;
      buf[static_cast<std::size_t>(qy) * px + qx] = weight(-ox, -oy);
    }
  }
}

// out[m] = sum_n g[n] * kernel[m - n], evaluated on the plan's padded sizes;
// kernel_hat is the forward image of the padded kernel.
void convolve(const detail::PompeiuImpl& impl, const ComplexField& g,
              const std::vector<Complex>& kernel_hat, ComplexField& out) {
  const GridDomain& dom = g.domain;
  const std::size_t total = static_cast<std::size_t>(impl.px) * impl.py;
  detail::FftwBuffer work(total);
  std::complex<double>* w = work.cx();
  std::fill(w, w + total, Complex(0, 0));
  for (int k = 0; k < dom.ny; ++k)
    for (int j = 0; j < dom.nx; ++j)
      w[static_cast<std::size_t>(k) * impl.px + j] = g.at(j, k);
  fftw_execute_dft(impl.fwd.plan, work.data, work.data);
  for (std::size_t i = 0; i < total; ++i) w[i] *= kernel_hat[i];
  fftw_execute_dft(impl.bwd.plan, work.data, work.data);
  const double scale = 1.0 / static_cast<double>(total);
  for (int k = 0; k < dom.ny; ++k)
    for (int j = 0; j < dom.nx; ++j)
      out.at(j, k) = w[static_cast<std::size_t>(k) * impl.px + j] * scale;
}

} // namespace

Complex pompeiu_kernel_weight(int ox, int oy, double hx, double hy) {
  if (ox == 0 && oy == 0) return {0.0, 0.0}; // odd cell integral
  const Complex w(ox * hx, oy * hy);
  return -hx * hy / (kPi * w);
}

double pompeiu_abs_kernel_weight(int ox, int oy, double hx, double hy) {
  if (ox == 0 && oy == 0) {
    const double a = hx / 2.0, b = hy / 2.0;
    return 4.0 * (b * std::asinh(a / b) + a * std::asinh(b / a)) / kPi;
  }
  return hx * hy / (kPi * std::hypot(ox * hx, oy * hy));
}

PompeiuPlan plan_build(const GridDomain& grid) {
  auto impl = std::make_shared<detail::PompeiuImpl>();
  impl->px = next_smooth(2 * grid.nx - 1);
  impl->py = next_smooth(2 * grid.ny - 1);
  const std::size_t total = static_cast<std::size_t>(impl->px) * impl->py;
  const std::size_t bytes = 2 * total * sizeof(Complex);
  const std::size_t cap = allocation_cap_bytes();
  if (bytes > cap)
    throw AllocationLimit("padded transform " + std::to_string(impl->px) + "x" +
                          std::to_string(impl->py) + " needs " + std::to_string(bytes) +
                          " bytes, cap is " + std::to_string(cap));

  detail::FftwBuffer buf(total);
  {
    std::lock_guard lock(detail::fftw_planner_mutex());
    impl->fwd = detail::PlanHandle(fftw_plan_dft_2d(impl->py, impl->px, buf.data, buf.data,
                                                    FFTW_FORWARD, FFTW_ESTIMATE));
    impl->bwd = detail::PlanHandle(fftw_plan_dft_2d(impl->py, impl->px, buf.data, buf.data,
                                                    FFTW_BACKWARD, FFTW_ESTIMATE));
  }
  fill_padded_kernel(buf.cx(), grid, impl->px, impl->py, [&](int ox, int oy) {
    return pompeiu_kernel_weight(ox, oy, grid.hx(), grid.hy());
  });
  fftw_execute(impl->fwd.plan);
  impl->kernel_hat.assign(buf.cx(), buf.cx() + total);

  PompeiuPlan plan;
  plan.domain = grid;
  plan.padded_x = impl->px;
  plan.padded_y = impl->py;
  plan.impl = std::move(impl);
  return plan;
}

ComplexField pompeiu_apply(const PompeiuPlan& plan, const ComplexField& g) {
  require_same_grid(plan.domain, g.domain, "pompeiu_apply");
  ComplexField out{g.domain, std::vector<Complex>(g.domain.size()), FieldWeight::Scalar, {}};
  convolve(*plan.impl, g, plan.impl->kernel_hat, out);
  return out;
}

double operator_norm_estimate(const PompeiuPlan& plan) {
  const GridDomain& g = plan.domain;
  const detail::PompeiuImpl& impl = *plan.impl;
  const std::size_t total = static_cast<std::size_t>(impl.px) * impl.py;

  detail::FftwBuffer kbuf(total);
  fill_padded_kernel(kbuf.cx(), g, impl.px, impl.py, [&](int ox, int oy) {
    return Complex(pompeiu_abs_kernel_weight(ox, oy, g.hx(), g.hy()), 0.0);
  });
  fftw_execute_dft(impl.fwd.plan, kbuf.data, kbuf.data);
  std::vector<Complex> abs_hat(kbuf.cx(), kbuf.cx() + total);

  ComplexField ones = make_constant_field(g, Complex(1, 0));
  ComplexField sums{g, std::vector<Complex>(g.size()), FieldWeight::Scalar, {}};
  convolve(impl, ones, abs_hat, sums);
  double best = 0.0;
  for (const Complex& v : sums.values) best = std::max(best, v.real());
  return best;
}

} // namespace gaf
