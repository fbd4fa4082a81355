#include "pairtunnel/bpm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

namespace {

void multiply(cplx* a, const cplx* b, std::size_t count) {
  auto* x = reinterpret_cast<double*>(a);
  const auto* y = reinterpret_cast<const double*>(b);
  for (std::size_t k = 0; k < 2 * count; k += 2) {
    const double re = x[k] * y[k] - x[k + 1] * y[k + 1];
    const double im = x[k] * y[k + 1] + x[k + 1] * y[k];
    x[k] = re;
    x[k + 1] = im;
  }
}

void multiply(cplx* a, const double* b, std::size_t count) {
  auto* x = reinterpret_cast<double*>(a);
  for (std::size_t k = 0; k < count; ++k) {
    x[2 * k] *= b[k];
    x[2 * k + 1] *= b[k];
  }
}

long long checked_ratio(double num, double den, const char* what) {
  const double r = num / den;
  const double rounded = std::round(r);
  if (rounded < 1.0 || std::abs(r - rounded) > 1e-9 * std::max(1.0, r))
    throw ConfigError(std::string(what) + " must be a positive integer multiple of dz");
  return static_cast<long long>(rounded);
}

}  // namespace

void BpmConfig::validate() const {
  if (!(dz_um > 0.0) || !std::isfinite(dz_um)) throw ConfigError("dz must be positive");
  if (!(sample_every_um >= dz_um)) throw ConfigError("sample interval must be >= dz");
  if (!(z_max_um >= sample_every_um)) throw ConfigError("z_max must be >= sample interval");
  checked_ratio(sample_every_um, dz_um, "sample interval");
  checked_ratio(z_max_um, dz_um, "z_max");
  if (snapshot_every_um) checked_ratio(*snapshot_every_um, dz_um, "snapshot interval");
}

long long BpmConfig::steps_total() const { return checked_ratio(z_max_um, dz_um, "z_max"); }

long long BpmConfig::steps_per_sample() const {
  return checked_ratio(sample_every_um, dz_um, "sample interval");
}

std::optional<long long> BpmConfig::steps_per_snapshot() const {
  if (!snapshot_every_um) return std::nullopt;
  return checked_ratio(*snapshot_every_um, dz_um, "snapshot interval");
}

void TunnelingTrace::append(double z, double pr, double p2, double nrm, double sym) {
  z_mm.push_back(z);
  p_right.push_back(pr);
  p_pair.push_back(p2);
  norm.push_back(nrm);
  sym_err.push_back(sym);
}

Stepper::Stepper(const Grid2D& grid, double dz, bool imaginary)
    : grid_(grid), dz_(dz), imaginary_(imaginary), kin_half_(grid), pot_(grid) {}

void Stepper::rebuild_scaled() {
  const double scale = 1.0 / static_cast<double>(grid_.size());
  const auto half = kin_half_.values();
  kin_half_scaled_.resize(half.size());
  kin_full_scaled_.resize(half.size());
  for (std::size_t k = 0; k < half.size(); ++k) {
    kin_half_scaled_[k] = half[k] * scale;
    kin_full_scaled_[k] = half[k] * half[k] * scale;
  }
}

void Stepper::apply_real_space(cplx* data) const {
  multiply(data, pot_.data(), pot_.size());
  if (mask_) multiply(data, mask_->data(), mask_->size());
}

void Stepper::step(ComplexField2D& psi) const {
  require_same_grid(psi.grid(), grid_, "step");
  cplx* data = psi.data();
  const std::size_t count = psi.size();
  fft_->forward(data);
  multiply(data, kin_half_scaled_.data(), count);
  fft_->inverse(data);
  apply_real_space(data);
  fft_->forward(data);
  multiply(data, kin_half_scaled_.data(), count);
  fft_->inverse(data);
}

void Stepper::advance(ComplexField2D& psi, long long count) const {
  require_same_grid(psi.grid(), grid_, "advance");
  if (count <= 0) return;
  cplx* data = psi.data();
  const std::size_t size = psi.size();
  fft_->forward(data);
  multiply(data, kin_half_scaled_.data(), size);
  for (long long s = 1; s < count; ++s) {
    fft_->inverse(data);
    apply_real_space(data);
    fft_->forward(data);
    multiply(data, kin_full_scaled_.data(), size);
  }
  fft_->inverse(data);
  apply_real_space(data);
  fft_->forward(data);
  multiply(data, kin_half_scaled_.data(), size);
  fft_->inverse(data);
}

Stepper Stepper::conjugated() const {
  if (imaginary_) throw ConfigError("imaginary-time steppers have no conjugate inverse");
  if (mask_) throw ConfigError("absorbing steppers are not invertible");
  Stepper out = *this;
  for (auto& v : out.kin_half_.values()) v = std::conj(v);
  for (auto& v : out.pot_.values()) v = std::conj(v);
  out.rebuild_scaled();
  return out;
}

namespace {

// Shared construction: kinetic half factor exp(-c * dz/2 * lambda_bar k^2 / 2n_s)
// and potential factor exp(-c * dz V / lambda_bar), with c = i (real z) or 1
// (imaginary time).
void fill_factors(ComplexField2D& kin_half, ComplexField2D& pot, const ScalarField2D& potential,
                  const PhysicsConstants& constants, double dz, bool imaginary) {
  const Grid2D& grid = kin_half.grid();
  const int n = grid.n();
  const cplx c = imaginary ? cplx(1.0, 0.0) : cplx(0.0, 1.0);
  const double kin_scale = 0.5 * dz * constants.lambda_bar() / (2.0 * constants.n_s());
  std::vector<double> k2(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    const double k = grid.wavenumber(m);
    k2[static_cast<std::size_t>(m)] = k * k;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      kin_half(i, j) = std::exp(-c * (kin_scale * (k2[static_cast<std::size_t>(i)] +
                                                   k2[static_cast<std::size_t>(j)])));
  const double pot_scale = dz / constants.lambda_bar();
  const auto v = potential.values();
  auto p = pot.values();
  for (std::size_t k = 0; k < v.size(); ++k) p[k] = std::exp(-c * (pot_scale * v[k]));
}

}  // namespace

Stepper make_stepper(const Grid2D& grid, const ScalarField2D& potential,
                     const PhysicsConstants& constants, double dz_um, bool absorber) {
  if (!(dz_um > 0.0) || !std::isfinite(dz_um)) throw ConfigError("dz must be positive");
  require_same_grid(grid, potential.grid(), "make_stepper");
  Stepper s(grid, dz_um, false);
  fill_factors(s.kin_half_, s.pot_, potential, constants, dz_um, false);
  if (absorber) {
    const double r0 = 0.9 * grid.half_width();
    s.mask_ = ScalarField2D::sample(grid, [&](double x1, double x2) {
      const double r = std::sqrt(x1 * x1 + x2 * x2) / r0;
      return std::exp(-std::pow(r, 16) * dz_um);
    });
  }
  s.rebuild_scaled();
  s.fft_ = std::make_shared<const Fft2D>(grid.n());
  return s;
}

Stepper make_imaginary_stepper(const Grid2D& grid, const ScalarField2D& potential,
                               const PhysicsConstants& constants, double dtau_um) {
  if (!(dtau_um > 0.0) || !std::isfinite(dtau_um))
    throw ConfigError("imaginary time step must be positive");
  require_same_grid(grid, potential.grid(), "make_imaginary_stepper");
  Stepper s(grid, dtau_um, true);
  fill_factors(s.kin_half_, s.pot_, potential, constants, dtau_um, true);
  s.rebuild_scaled();
  s.fft_ = std::make_shared<const Fft2D>(grid.n());
  return s;
}

ComplexField2D step(ComplexField2D psi, const Stepper& stepper) {
  stepper.step(psi);
  return psi;
}

namespace {

double max_abs(const ComplexField2D& f) {
  double m = 0.0;
  for (const auto& v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TunnelingTrace propagate(const ComplexField2D& psi0, const Stepper& stepper, const BpmConfig& cfg,
                         const PropagationObservers& observers, ComplexField2D* final_field) {
  cfg.validate();
  require_same_grid(psi0.grid(), stepper.grid(), "propagate");
  if (stepper.imaginary()) throw ConfigError("propagate needs a real-z stepper");
  if (std::abs(stepper.dz() - cfg.dz_um) > 1e-12 * cfg.dz_um)
    throw ConfigError("stepper dz does not match the propagation config");

  const long long total = cfg.steps_total();
  const long long per_sample = cfg.steps_per_sample();
  const auto per_snapshot = cfg.steps_per_snapshot();

  TunnelingTrace trace;
  trace.model = "bpm";
  trace.parameters["dz_um"] = cfg.dz_um;
  trace.parameters["n"] = psi0.n();
  trace.parameters["half_width_um"] = psi0.grid().half_width();

  ComplexField2D psi = psi0;
  long long done = 0;
  auto record = [&]() {
    const double z_um = static_cast<double>(done) * cfg.dz_um;
    const bool at_sample = done % per_sample == 0 || done == total;
    const bool at_snapshot = per_snapshot && done % *per_snapshot == 0;
    if (at_sample) {
      const auto q = quadrant_powers(psi);
      const double total_power = q.total();
      if (!std::isfinite(total_power)) {
        std::ostringstream msg;
        msg << "non-finite field at step " << done << " (z = " << z_um * 1e-3
            << " mm), max |psi| = " << max_abs(psi);
        throw NumericalError(msg.str());
      }
      trace.append(z_um * 1e-3, q.p_right(), q.p_pair(), total_power, symmetry_deviation(psi));
      if (observers.on_sample) observers.on_sample(psi, z_um);
    }
    if (at_snapshot && observers.on_snapshot) observers.on_snapshot(psi, z_um);
  };

  record();
  while (done < total) {
    long long next = std::min(total, (done / per_sample + 1) * per_sample);
    if (per_snapshot) next = std::min(next, (done / *per_snapshot + 1) * *per_snapshot);
    stepper.advance(psi, next - done);
    done = next;
    record();
  }
  if (final_field) *final_field = std::move(psi);
  return trace;
}

}  // namespace pairtunnel
