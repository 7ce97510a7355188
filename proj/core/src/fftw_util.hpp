#pragma once

#include <complex>
#include <mutex>

#include <fftw3.h>

namespace gaf::detail {

// FFTW plan creation/destruction is not thread-safe; executing a plan on its
// own arrays (or via fftw_execute_dft on equally aligned arrays) is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  fftw_complex* data = nullptr;
  explicit FftwBuffer(std::size_t n) { data = fftw_alloc_complex(n); }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  std::complex<double>* cx() { return reinterpret_cast<std::complex<double>*>(data); }
};

struct PlanHandle {
  fftw_plan plan = nullptr;
  PlanHandle() = default;
  explicit PlanHandle(fftw_plan p) : plan(p) {}
  PlanHandle(PlanHandle&& o) noexcept : plan(o.plan) { o.plan = nullptr; }
  PlanHandle& operator=(PlanHandle&& o) noexcept {
    if (this != &o) {
      destroy();
      plan = o.plan;
      o.plan = nullptr;
    }
    return *this;
  }
  PlanHandle(const PlanHandle&) = delete;
  PlanHandle& operator=(const PlanHandle&) = delete;
  ~PlanHandle() { destroy(); }
  void destroy() {
    if (plan) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(plan);
      plan = nullptr;
    }
  }
};

} // namespace gaf::detail
