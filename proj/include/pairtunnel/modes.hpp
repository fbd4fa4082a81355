#pragma once

// Guided modes of a transverse potential. Modes are found by imaginary-time
// split-step iteration with Gram-Schmidt deflation against lower modes, then
// polished against the exact spectral Hamiltonian by a preconditioned
// locally-optimal block iteration so that residuals reach the tolerance.

#include <optional>
#include <string>
#include <vector>

#include "pairtunnel/domain.hpp"
#include "pairtunnel/physics.hpp"
#include "pairtunnel/potentials.hpp"

namespace pairtunnel {

struct GuidedMode {
  ComplexField2D field;  // normalized; largest-magnitude sample real positive
  double mu = 0.0;       // eigenvalue of H, index units
  double beta_offset = 0.0;  // -mu / lambda_bar, 1/um
  double residual = 0.0;     // ||H phi - mu phi|| / ||phi||
  long long iterations = 0;  // imaginary-time steps used
  double swap_parity = 0.0;  // <phi, swap(phi)>, +-1 for definite parity
  std::string orientation;   // "x1", "x2" or "iso": axis of the dominant spread
};

struct ModeSet {
  std::vector<GuidedMode> modes;  // ascending mu
  ScalarField2D potential;

  std::size_t size() const { return modes.size(); }
  const GuidedMode& operator[](std::size_t k) const { return modes[k]; }
};

struct ModeSolverConfig {
  double dtau_um = 2.0;
  double tol = 1e-9;
  long long max_iters = 200000;
  // Seed Gaussian exp(-r^2 / 2 sigma^2); centered on the well when unset.
  std::optional<GuideCenter> center;
  double seed_sigma_um = 3.0 / 1.4142135623730951;
  bool require_guided = true;
  bool record_history = false;  // keep the per-step eigenvalue estimates
};

struct ModeSolveReport {
  std::vector<std::vector<double>> mu_history;  // imaginary-time estimates per mode
};

// -(lambda_bar^2 / 2 n_s) Laplacian f + V f with the spectral Laplacian.
ComplexField2D apply_hamiltonian(const ComplexField2D& f, const ScalarField2D& potential,
                                 const PhysicsConstants& constants);

ModeSet solve_modes(const ScalarField2D& potential, int count, const PhysicsConstants& constants,
                    const ModeSolverConfig& cfg = {}, ModeSolveReport* report = nullptr);

// Rotate modes [first, last) to definite reflection parity about the guide
// axes, whatever their splitting; mu becomes the Rayleigh quotient.
void rotate_to_axis_parity(ModeSet& set, std::size_t first, std::size_t last,
                           const PhysicsConstants& constants);

// Ground mode of the isolated guide I, symmetrized under x1 <-> x2.
ComplexField2D launch_field(const StructureSpec& spec, const Grid2D& grid,
                            const PhysicsConstants& constants, const ModeSolverConfig& cfg = {});

// Mode-solver config seeded for one guide of a structure.
ModeSolverConfig guide_solver_config(const StructureSpec& spec, GuideId guide,
                                     ModeSolverConfig base = {});

}  // namespace pairtunnel
