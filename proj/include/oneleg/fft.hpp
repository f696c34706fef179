#pragma once

#include <complex>
#include <span>
#include <vector>

namespace oneleg {

/// Complex-to-complex 2D DFT of size m x m (row-major), FFTW backed.
/// Forward uses the e^{-ikx} convention and is unnormalized; inverse uses
/// e^{+ikx} and is unnormalized (caller divides by m*m where needed).
/// Plans are FFTW_ESTIMATE so results are reproducible run to run.
class Dft2D {
 public:
  explicit Dft2D(int m);
  ~Dft2D();
  Dft2D(const Dft2D&) = delete;
  Dft2D& operator=(const Dft2D&) = delete;

  int size() const { return m_; }

  // In/out buffers of length m*m owned by the plan (aligned).
  std::span<std::complex<double>> buf();

  void forward();  // buf -> buf
  void inverse();  // buf -> buf

 private:
  int m_;
  void* in_;   // fftw_complex*
  void* fwd_;  // fftw_plan
  void* bwd_;  // fftw_plan
};

/// Per-thread transform workspace for one physical grid size.
Dft2D& dft_workspace(int m);

} // namespace oneleg
