#include "oneleg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>

namespace oneleg {

namespace {
// fftw_plan_* is not thread-safe; execution on plan-owned buffers is.
std::mutex plan_mutex;
} // namespace

Dft2D::Dft2D(int m) : m_(m) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto* in = fftw_alloc_complex(static_cast<size_t>(m) * m);
  in_ = in;
  fwd_ = fftw_plan_dft_2d(m, m, in, in, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(m, m, in, in, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Dft2D::~Dft2D() {
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(in_);
}

std::span<std::complex<double>> Dft2D::buf() {
  return {reinterpret_cast<std::complex<double>*>(in_),
          static_cast<size_t>(m_) * m_};
}

void Dft2D::forward() { fftw_execute(static_cast<fftw_plan>(fwd_)); }
void Dft2D::inverse() { fftw_execute(static_cast<fftw_plan>(bwd_)); }

Dft2D& dft_workspace(int m) {
  thread_local std::map<int, std::unique_ptr<Dft2D>> cache;
  auto& slot = cache[m];
  if (!slot) slot = std::make_unique<Dft2D>(m);
  return *slot;
}

} // namespace oneleg
