#pragma once

#include <memory>

#include "pairtunnel/domain.hpp"

namespace pairtunnel {

enum class FftPlanning {
  Measure,   // timed planning; fastest, plan choice may differ between processes
  Estimate,  // heuristic planning; plan choice identical across processes
};

// Process-wide planning mode for subsequently created Fft2D objects. When the
// environment variable PAIRTUNNEL_FFTW_WISDOM names a file, wisdom is imported
// from it before the first plan and exported after every new plan, which makes
// Measure plans reproducible across processes too.
void set_fft_planning(FftPlanning mode);
FftPlanning fft_planning();

// In-place n x n complex DFT pair. Plans are created once and reused on any
// 64-byte aligned buffer of the right size. The inverse is unnormalized.
class Fft2D {
 public:
  explicit Fft2D(int n);
  ~Fft2D();
  Fft2D(Fft2D&&) noexcept;
  Fft2D& operator=(Fft2D&&) noexcept;
  Fft2D(const Fft2D&) = delete;
  Fft2D& operator=(const Fft2D&) = delete;

  int n() const { return n_; }
  void forward(cplx* data) const;
  void inverse(cplx* data) const;
  void forward(ComplexField2D& f) const { forward(f.data()); }
  void inverse(ComplexField2D& f) const { inverse(f.data()); }

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace pairtunnel
