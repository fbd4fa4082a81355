#pragma once

// Five-amplitude coupled-mode model of the four-guide structure. Amplitudes
// c1, c2 belong to the fundamental modes of the diagonal guides I and III;
// c3 (fundamental) and c4, c5 (degenerate first excited) to guide II, with the
// guide-IV amplitudes equal to them by symmetry. Lengths in mm, rates in 1/mm.

#include <array>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "pairtunnel/bpm.hpp"
#include "pairtunnel/domain.hpp"
#include "pairtunnel/modes.hpp"
#include "pairtunnel/physics.hpp"
#include "pairtunnel/potentials.hpp"

namespace pairtunnel {

struct CoupledModeParams {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double delta1 = 0.0;
  double delta2 = 0.0;

  void validate() const;
};

using ModeAmplitudes = std::array<cplx, 5>;

enum class CmVariant {
  Full,
  TwoMode,       // c4 = c5 = 0
  Fermionized,   // c3 = 0
};

CmVariant parse_variant(std::string_view name);
std::string_view to_string(CmVariant variant);

// N = |c1|^2 + |c2|^2 + 2 (|c3|^2 + |c4|^2 + |c5|^2)
double conserved_norm(const ModeAmplitudes& c);
// |c1|^2 + |c3|^2 + |c4|^2 + |c5|^2
double cm_p_right(const ModeAmplitudes& c);
// |c1|^2 + |c2|^2
double cm_p_pair(const ModeAmplitudes& c);

ModeAmplitudes cm_rhs(const ModeAmplitudes& c, const CoupledModeParams& p, CmVariant variant);

// Fixed-step fourth-order Runge-Kutta schemes. Gauss4 is the two-stage
// Gauss-Legendre collocation method: for this linear system one step is the
// (2,2) Pade approximant of the exact propagator, which preserves N exactly.
// Rk4 is the classical explicit method; it loses N by about (h w)^6 / 72 per
// step at frequency w.
enum class CmScheme { Gauss4, Rk4 };

CmScheme parse_scheme(std::string_view name);
std::string_view to_string(CmScheme scheme);

struct CmResult {
  std::vector<ModeAmplitudes> amplitudes;
  TunnelingTrace trace;  // norm column holds N, sym_err is zero
};

// Integrates from c(0) = (1, 0, 0, 0, 0), sampled every step.
CmResult cm_integrate(const CoupledModeParams& p, CmVariant variant, double z_max_mm,
                      double dz_mm, CmScheme scheme = CmScheme::Gauss4);

// Same, from an arbitrary initial amplitude vector.
CmResult cm_integrate_from(const ModeAmplitudes& c0, const CoupledModeParams& p,
                           CmVariant variant, double z_max_mm, double dz_mm,
                           CmScheme scheme = CmScheme::Gauss4);

struct RabiSolution {
  double p_right;
  double p_pair;
  cplx c1;
  cplx c2;
  cplx c3;
};

// Closed form for kappa2 = kappa3 = delta1 = 0.
RabiSolution cm_analytic_rabi(double kappa1, double z_mm);

struct ParameterEstimate {
  CoupledModeParams params;  // 1/mm, couplings non-negative
  // Signed overlaps <phi_l | V - V_I | phi_1> / lambda_bar in 1/mm, for
  // l = 3, 4, 5 before the kappa2/kappa3 assignment.
  std::array<double, 3> signed_couplings{};
  std::array<bool, 3> below_noise_floor{};  // |overlap| < 1e-14
  double mu1 = 0.0;
  double mu3 = 0.0;
  double mu4 = 0.0;
  double mu5 = 0.0;
  std::array<std::string, 2> excited_orientation;  // of the modes paired with kappa2, kappa3
};

// Couplings from overlap integrals of isolated-guide modes:
// kappa_l = |<phi_l | V - V_I | phi_1>| / lambda_bar, delta1 = (mu1 - mu3) / lambda_bar,
// delta2 = (mu5 - mu3) / lambda_bar.
ParameterEstimate estimate_params(const StructureSpec& spec, const Grid2D& grid,
                                  const PhysicsConstants& constants,
                                  const ModeSolverConfig& cfg = {});

}  // namespace pairtunnel
