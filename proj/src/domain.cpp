#include "pairtunnel/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

Grid2D::Grid2D(int n, double half_width_um) : n_(n), half_width_(half_width_um) {
  if (n < 4 || n % 2 != 0)
    throw ConfigError("grid size must be even and >= 4, got " + std::to_string(n));
  if (!(half_width_um > 0.0) || !std::isfinite(half_width_um))
    throw ConfigError("grid half-width must be positive");
  dx_ = 2.0 * half_width_um / static_cast<double>(n);
}

std::vector<double> Grid2D::coordinates() const {
  std::vector<double> x(static_cast<std::size_t>(n_));
  for (int j = 0; j < n_; ++j) x[static_cast<std::size_t>(j)] = coordinate(j);
  return x;
}

double Grid2D::wavenumber(int m) const {
  const int wrapped = m <= n_ / 2 ? m : m - n_;
  return std::numbers::pi / half_width_ * static_cast<double>(wrapped);
}

Grid2D make_grid(int n, double half_width_um) { return Grid2D(n, half_width_um); }

void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
  if (!(a == b)) throw ConfigError(std::string("grid mismatch in ") + what);
}

double integrate(const ComplexField2D& f) {
  double sum = 0.0;
  for (const auto& v : f.values()) sum += std::norm(v);
  return sum * f.grid().cell_area();
}

cplx overlap(const ComplexField2D& f, const ComplexField2D& g) {
  require_same_grid(f.grid(), g.grid(), "overlap");
  const auto a = f.values();
  const auto b = g.values();
  double re = 0.0;
  double im = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    // conj(a) * b
    re += a[k].real() * b[k].real() + a[k].imag() * b[k].imag();
    im += a[k].real() * b[k].imag() - a[k].imag() * b[k].real();
  }
  return cplx(re, im) * f.grid().cell_area();
}

ComplexField2D normalize(const ComplexField2D& f) {
  const double total = integrate(f);
  if (!(total > 0.0) || !std::isfinite(total))
    throw NumericalError("cannot normalize a zero or non-finite field");
  ComplexField2D out = f;
  const double scale = 1.0 / std::sqrt(total);
  for (auto& v : out.values()) v *= scale;
  return out;
}

QuadrantPowers quadrant_powers(const ComplexField2D& f) {
  const int n = f.n();
  const int origin = f.grid().origin_index();
  // Half-plane weights per index: {negative side, positive side}.
  auto weights = [origin](int j) -> std::pair<double, double> {
    if (j < origin) return {1.0, 0.0};
    if (j > origin) return {0.0, 1.0};
    return {0.5, 0.5};
  };
  QuadrantPowers q;
  for (int i = 0; i < n; ++i) {
    const auto [w1m, w1p] = weights(i);
    double row_m = 0.0;
    double row_p = 0.0;
    double row_0 = 0.0;
    for (int j = 0; j < n; ++j) {
      const double p = std::norm(f(i, j));
      if (j < origin)
        row_m += p;
      else if (j > origin)
        row_p += p;
      else
        row_0 = p;
    }
    row_m += 0.5 * row_0;
    row_p += 0.5 * row_0;
    q.q_pp += w1p * row_p;
    q.q_pm += w1p * row_m;
    q.q_mp += w1m * row_p;
    q.q_mm += w1m * row_m;
  }
  const double da = f.grid().cell_area();
  q.q_pp *= da;
  q.q_pm *= da;
  q.q_mp *= da;
  q.q_mm *= da;
  return q;
}

namespace {

template <class T>
double symmetry_deviation_impl(const Field2D<T>& f) {
  const int n = f.n();
  double peak = 0.0;
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      peak = std::max(peak, static_cast<double>(std::abs(f(i, j))));
      if (j > i) dev = std::max(dev, static_cast<double>(std::abs(f(i, j) - f(j, i))));
    }
  }
  return peak > 0.0 ? dev / peak : 0.0;
}

}  // namespace

double symmetry_deviation(const ComplexField2D& f) { return symmetry_deviation_impl(f); }
double symmetry_deviation(const ScalarField2D& f) { return symmetry_deviation_impl(f); }

ComplexField2D swapped(const ComplexField2D& f) {
  ComplexField2D out(f.grid());
  const int n = f.n();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = f(j, i);
  return out;
}

double l2_distance(const ComplexField2D& f, const ComplexField2D& g) {
  require_same_grid(f.grid(), g.grid(), "l2_distance");
  const auto a = f.values();
  const auto b = g.values();
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += std::norm(a[k] - b[k]);
  return std::sqrt(sum * f.grid().cell_area());
}

ComplexField2D to_complex(const ScalarField2D& f) {
  ComplexField2D out(f.grid());
  auto dst = out.values();
  const auto src = f.values();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k];
  return out;
}

}  // namespace pairtunnel
