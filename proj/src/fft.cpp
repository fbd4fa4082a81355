#include "pairtunnel/fft.hpp"

#include <fftw3.h>

#include <atomic>
#include <cstdlib>
#include <mutex>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::atomic<FftPlanning> g_planning{FftPlanning::Measure};

const char* wisdom_path() { return std::getenv("PAIRTUNNEL_FFTW_WISDOM"); }

// Caller holds planner_mutex().
void import_wisdom_once() {
  static bool done = false;
  if (done) return;
  done = true;
  if (const char* path = wisdom_path()) fftw_import_wisdom_from_filename(path);
}
}  // namespace

void set_fft_planning(FftPlanning mode) { g_planning = mode; }
FftPlanning fft_planning() { return g_planning; }

struct Fft2D::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

Fft2D::Fft2D(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  ComplexField2D scratch(Grid2D(n, 1.0));
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  const unsigned flags = g_planning == FftPlanning::Measure ? FFTW_MEASURE : FFTW_ESTIMATE;
  std::lock_guard lock(planner_mutex());
  import_wisdom_once();
  plans_->forward = fftw_plan_dft_2d(n, n, buf, buf, FFTW_FORWARD, flags);
  plans_->inverse = fftw_plan_dft_2d(n, n, buf, buf, FFTW_BACKWARD, flags);
  if (!plans_->forward || !plans_->inverse) throw NumericalError("FFTW planning failed");
  if (const char* path = wisdom_path()) fftw_export_wisdom_to_filename(path);
}

Fft2D::~Fft2D() {
  if (!plans_) return;
  std::lock_guard lock(planner_mutex());
  if (plans_->forward) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse) fftw_destroy_plan(plans_->inverse);
}

Fft2D::Fft2D(Fft2D&&) noexcept = default;
Fft2D& Fft2D::operator=(Fft2D&& other) noexcept {
  std::swap(n_, other.n_);
  std::swap(plans_, other.plans_);
  return *this;
}

void Fft2D::forward(cplx* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->forward, buf, buf);
}

void Fft2D::inverse(cplx* data) const {
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  fftw_execute_dft(plans_->inverse, buf, buf);
}

}  // namespace pairtunnel
