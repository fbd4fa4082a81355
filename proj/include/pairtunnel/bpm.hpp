#pragma once

// Split-step Fourier beam propagation: symmetric K/2 - P - K/2 splitting of
// exp(-i dz H / lambda_bar) on the periodic spectral domain.

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pairtunnel/domain.hpp"
#include "pairtunnel/fft.hpp"
#include "pairtunnel/physics.hpp"

namespace pairtunnel {

struct BpmConfig {
  double dz_um = 1.0;
  double z_max_um = 50000.0;
  double sample_every_um = 50.0;
  std::optional<double> snapshot_every_um;

  void validate() const;
  long long steps_total() const;
  long long steps_per_sample() const;
  std::optional<long long> steps_per_snapshot() const;
};

// Sampled observables of one run. z in mm; p_R and p_2 are raw quadrant
// integrals (fractions of total power for a normalized launch).
struct TunnelingTrace {
  std::string model;  // "bpm" or "cm"
  std::map<std::string, double> parameters;
  std::vector<double> z_mm;
  std::vector<double> p_right;
  std::vector<double> p_pair;
  std::vector<double> norm;
  std::vector<double> sym_err;

  std::size_t size() const { return z_mm.size(); }
  void append(double z, double pr, double p2, double nrm, double sym);
};

class Stepper {
 public:
  const Grid2D& grid() const { return grid_; }
  double dz() const { return dz_; }
  bool imaginary() const { return imaginary_; }

  // Kinetic half-step and potential full-step factors, FFT bin order for the
  // kinetic array. Unit modulus for real-z steppers.
  std::span<const cplx> kinetic_half_factor() const { return kin_half_.values(); }
  std::span<const cplx> potential_factor() const { return pot_.values(); }

  // One K/2 - P - K/2 step in place.
  void step(ComplexField2D& psi) const;

  // `count` consecutive steps with the inner kinetic halves fused.
  void advance(ComplexField2D& psi, long long count) const;

  // Exact inverse of step() for unitary steppers (all factors conjugated).
  Stepper conjugated() const;

 private:
  friend Stepper make_stepper(const Grid2D&, const ScalarField2D&, const PhysicsConstants&, double,
                              bool);
  friend Stepper make_imaginary_stepper(const Grid2D&, const ScalarField2D&,
                                        const PhysicsConstants&, double);

  Stepper(const Grid2D& grid, double dz, bool imaginary);
  void rebuild_scaled();
  void apply_real_space(cplx* data) const;

  Grid2D grid_;
  double dz_;
  bool imaginary_;
  ComplexField2D kin_half_;
  ComplexField2D pot_;
  std::optional<ScalarField2D> mask_;
  // Kinetic factors with the 1/n^2 inverse-FFT normalization folded in.
  std::vector<cplx, AlignedAllocator<cplx>> kin_half_scaled_;
  std::vector<cplx, AlignedAllocator<cplx>> kin_full_scaled_;
  std::shared_ptr<const Fft2D> fft_;
};

// Real-z stepper for exp(-i dz H / lambda_bar). With `absorber` a
// super-Gaussian edge mask exp(-(r / 0.9L)^16 dz / 1um) is applied after the
// potential factor of every step.
Stepper make_stepper(const Grid2D& grid, const ScalarField2D& potential,
                     const PhysicsConstants& constants, double dz_um, bool absorber = false);

// Imaginary-time stepper for exp(-dtau H / lambda_bar), same splitting.
Stepper make_imaginary_stepper(const Grid2D& grid, const ScalarField2D& potential,
                               const PhysicsConstants& constants, double dtau_um);

ComplexField2D step(ComplexField2D psi, const Stepper& stepper);

// Called with the current field and z in micrometers.
using FieldObserver = std::function<void(const ComplexField2D&, double)>;

struct PropagationObservers {
  FieldObserver on_sample;    // every sample_every (including z = 0)
  FieldObserver on_snapshot;  // every snapshot_every (including z = 0)
};

// Propagate psi0 to cfg.z_max_um recording p_R, p_2, norm and swap-symmetry
// error at z = 0, every cfg.sample_every_um and at z_max. Throws NumericalError when the
// field stops being finite.
TunnelingTrace propagate(const ComplexField2D& psi0, const Stepper& stepper, const BpmConfig& cfg,
                         const PropagationObservers& observers = {},
                         ComplexField2D* final_field = nullptr);

}  // namespace pairtunnel
