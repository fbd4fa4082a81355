#pragma once

// Uniform square grids over the (x1, x2) plane, fields sampled on them,
// rectangle-rule quadrature and the quadrant observables p_R and p_2.

#include <complex>
#include <cstddef>
#include <new>
#include <span>
#include <vector>

namespace pairtunnel {

using cplx = std::complex<double>;

// 64-byte aligned storage so FFT kernels can use their SIMD paths.
template <class T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t alignment{64};

  AlignedAllocator() noexcept = default;
  template <class U>
  AlignedAllocator(const AlignedAllocator<U>&) noexcept {}

  T* allocate(std::size_t count) {
    return static_cast<T*>(::operator new(count * sizeof(T), alignment));
  }
  void deallocate(T* ptr, std::size_t) noexcept { ::operator delete(ptr, alignment); }

  template <class U>
  bool operator==(const AlignedAllocator<U>&) const noexcept { return true; }
};

// Square grid shared by both axes: x_j = (j - n/2) dx, dx = 2L/n, j = 0..n-1.
// The sample j = n/2 sits exactly at x = 0 and x_{n/2+m} = -x_{n/2-m}.
class Grid2D {
 public:
  Grid2D(int n, double half_width_um);

  int n() const { return n_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }
  double half_width() const { return half_width_; }
  double dx() const { return dx_; }
  double cell_area() const { return dx_ * dx_; }
  int origin_index() const { return n_ / 2; }
  double coordinate(int j) const { return static_cast<double>(j - n_ / 2) * dx_; }
  std::vector<double> coordinates() const;

  // Periodic angular wavenumber for FFT bin m, wrapped to (-n/2, n/2].
  double wavenumber(int m) const;

  bool operator==(const Grid2D& other) const {
    return n_ == other.n_ && half_width_ == other.half_width_;
  }

 private:
  int n_;
  double half_width_;
  double dx_;
};

Grid2D make_grid(int n, double half_width_um);

// Row index <-> x1, column index <-> x2, row-major storage.
template <class T>
class Field2D {
 public:
  using value_type = T;
  using storage = std::vector<T, AlignedAllocator<T>>;

  explicit Field2D(const Grid2D& grid) : grid_(grid), values_(grid.size(), T{}) {}
  Field2D(const Grid2D& grid, T fill) : grid_(grid), values_(grid.size(), fill) {}

  const Grid2D& grid() const { return grid_; }
  int n() const { return grid_.n(); }
  std::size_t size() const { return values_.size(); }

  T& operator()(int i1, int i2) { return values_[index(i1, i2)]; }
  const T& operator()(int i1, int i2) const { return values_[index(i1, i2)]; }

  T* data() { return values_.data(); }
  const T* data() const { return values_.data(); }
  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  // Evaluate fn(x1, x2) at every sample.
  template <class Fn>
  static Field2D sample(const Grid2D& grid, Fn&& fn) {
    Field2D out(grid);
    const auto x = grid.coordinates();
    for (int i = 0; i < grid.n(); ++i)
      for (int j = 0; j < grid.n(); ++j) out(i, j) = fn(x[i], x[j]);
    return out;
  }

 private:
  std::size_t index(int i1, int i2) const {
    return static_cast<std::size_t>(i1) * static_cast<std::size_t>(grid_.n()) +
           static_cast<std::size_t>(i2);
  }

  Grid2D grid_;
  storage values_;
};

using ComplexField2D = Field2D<cplx>;
using ScalarField2D = Field2D<double>;

// Raw quadrant integrals of |psi|^2. Samples on x = 0 are split evenly between
// the adjacent half-planes.
struct QuadrantPowers {
  double q_pp = 0.0;  // x1 > 0, x2 > 0
  double q_pm = 0.0;  // x1 > 0, x2 < 0
  double q_mp = 0.0;  // x1 < 0, x2 > 0
  double q_mm = 0.0;  // x1 < 0, x2 < 0

  double total() const { return q_pp + q_pm + q_mp + q_mm; }
  double p_right() const { return q_pp + q_pm; }
  double p_left() const { return q_mp + q_mm; }
  double p_pair() const { return q_pp + q_mm; }
};

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what);

double integrate(const ComplexField2D& f);
cplx overlap(const ComplexField2D& f, const ComplexField2D& g);
ComplexField2D normalize(const ComplexField2D& f);
QuadrantPowers quadrant_powers(const ComplexField2D& f);

// max |f(x1,x2) - f(x2,x1)| / max |f|; zero for the zero field.
double symmetry_deviation(const ComplexField2D& f);
double symmetry_deviation(const ScalarField2D& f);

// f(x1, x2) -> f(x2, x1)
ComplexField2D swapped(const ComplexField2D& f);

// Discrete L2 distance sqrt(sum |f - g|^2 dx^2).
double l2_distance(const ComplexField2D& f, const ComplexField2D& g);

ComplexField2D to_complex(const ScalarField2D& f);

}  // namespace pairtunnel
