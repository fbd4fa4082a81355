#include "pairtunnel/coupled_mode.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <string>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

void CoupledModeParams::validate() const {
  for (double v : {kappa1, kappa2, kappa3, delta1, delta2})
    if (!std::isfinite(v)) throw ConfigError("coupled-mode parameters must be finite");
  if (kappa1 < 0.0 || kappa2 < 0.0 || kappa3 < 0.0)
    throw ConfigError("coupling constants must be non-negative");
}

CmVariant parse_variant(std::string_view name) {
  if (name == "full" || name == "FULL") return CmVariant::Full;
  if (name == "two_mode" || name == "TWO_MODE" || name == "two-mode") return CmVariant::TwoMode;
  if (name == "fermionized" || name == "FERMIONIZED") return CmVariant::Fermionized;
  throw ConfigError("unknown coupled-mode variant '" + std::string(name) + "'");
}

std::string_view to_string(CmVariant variant) {
  switch (variant) {
    case CmVariant::Full: return "full";
    case CmVariant::TwoMode: return "two_mode";
    case CmVariant::Fermionized: return "fermionized";
  }
  return "?";
}

double conserved_norm(const ModeAmplitudes& c) {
  return std::norm(c[0]) + std::norm(c[1]) +
         2.0 * (std::norm(c[2]) + std::norm(c[3]) + std::norm(c[4]));
}

double cm_p_right(const ModeAmplitudes& c) {
  return std::norm(c[0]) + std::norm(c[2]) + std::norm(c[3]) + std::norm(c[4]);
}

double cm_p_pair(const ModeAmplitudes& c) { return std::norm(c[0]) + std::norm(c[1]); }

ModeAmplitudes cm_rhs(const ModeAmplitudes& c, const CoupledModeParams& p, CmVariant variant) {
  const cplx mi(0.0, -1.0);
  const auto& [c1, c2, c3, c4, c5] = c;
  ModeAmplitudes d{
      mi * (-2.0 * p.kappa1 * c3 - 2.0 * p.kappa2 * c4 - 2.0 * p.kappa3 * c5 + p.delta1 * c1),
      mi * (-2.0 * p.kappa1 * c3 - 2.0 * p.kappa3 * c4 - 2.0 * p.kappa2 * c5 + p.delta1 * c2),
      mi * (-p.kappa1 * (c1 + c2)),
      mi * (-p.kappa2 * c1 - p.kappa3 * c2 + p.delta2 * c4),
      mi * (-p.kappa3 * c1 - p.kappa2 * c2 + p.delta2 * c5),
  };
  switch (variant) {
    case CmVariant::Full: break;
    case CmVariant::TwoMode: d[3] = d[4] = 0.0; break;
    case CmVariant::Fermionized: d[2] = 0.0; break;
  }
  return d;
}

CmScheme parse_scheme(std::string_view name) {
  if (name == "gauss4") return CmScheme::Gauss4;
  if (name == "rk4") return CmScheme::Rk4;
  throw ConfigError("unknown coupled-mode scheme '" + std::string(name) + "'");
}

std::string_view to_string(CmScheme scheme) {
  return scheme == CmScheme::Gauss4 ? "gauss4" : "rk4";
}

namespace {

// Gauss-Legendre step matrix (I - hA/2 + h^2A^2/12)^-1 (I + hA/2 + h^2A^2/12)
// with A assembled column by column from the right-hand side.
Eigen::Matrix<cplx, 5, 5> gauss4_step(const CoupledModeParams& p, CmVariant variant, double h) {
  Eigen::Matrix<cplx, 5, 5> a;
  for (int col = 0; col < 5; ++col) {
    ModeAmplitudes e{};
    e[static_cast<std::size_t>(col)] = 1.0;
    const ModeAmplitudes d = cm_rhs(e, p, variant);
    for (int row = 0; row < 5; ++row) a(row, col) = d[static_cast<std::size_t>(row)];
  }
  const Eigen::Matrix<cplx, 5, 5> id = Eigen::Matrix<cplx, 5, 5>::Identity();
  const Eigen::Matrix<cplx, 5, 5> ha = h * a;
  const Eigen::Matrix<cplx, 5, 5> q = ha * ha / 12.0;
  return (id - 0.5 * ha + q).partialPivLu().solve(id + 0.5 * ha + q);
}

ModeAmplitudes add_scaled(const ModeAmplitudes& a, double s, const ModeAmplitudes& b) {
  ModeAmplitudes out;
  for (std::size_t k = 0; k < 5; ++k) out[k] = a[k] + s * b[k];
  return out;
}

void zero_reduced(ModeAmplitudes& c, CmVariant variant) {
  if (variant == CmVariant::TwoMode) c[3] = c[4] = 0.0;
  if (variant == CmVariant::Fermionized) c[2] = 0.0;
}

}  // namespace

CmResult cm_integrate_from(const ModeAmplitudes& c0, const CoupledModeParams& p,
                           CmVariant variant, double z_max_mm, double dz_mm, CmScheme scheme) {
  p.validate();
  if (!(dz_mm > 0.0) || !std::isfinite(dz_mm)) throw ConfigError("dz must be positive");
  if (!(z_max_mm > 0.0) || !std::isfinite(z_max_mm)) throw ConfigError("z_max must be positive");
  const double ratio = z_max_mm / dz_mm;
  const auto steps = static_cast<long long>(std::llround(ratio));
  if (steps < 1 || std::abs(ratio - static_cast<double>(steps)) > 1e-9 * ratio)
    throw ConfigError("z_max must be an integer multiple of dz");

  CmResult out;
  out.trace.model = "cm";
  out.trace.parameters = {{"kappa1", p.kappa1}, {"kappa2", p.kappa2}, {"kappa3", p.kappa3},
                          {"delta1", p.delta1}, {"delta2", p.delta2}, {"dz_mm", dz_mm},
                          {"gauss4", scheme == CmScheme::Gauss4 ? 1.0 : 0.0}};
  out.amplitudes.reserve(static_cast<std::size_t>(steps + 1));

  ModeAmplitudes c = c0;
  zero_reduced(c, variant);
  auto record = [&](long long k) {
    out.amplitudes.push_back(c);
    out.trace.append(static_cast<double>(k) * dz_mm, cm_p_right(c), cm_p_pair(c),
                     conserved_norm(c), 0.0);
  };
  record(0);
  if (scheme == CmScheme::Gauss4) {
    const Eigen::Matrix<cplx, 5, 5> m = gauss4_step(p, variant, dz_mm);
    Eigen::Matrix<cplx, 5, 1> v;
    for (int l = 0; l < 5; ++l) v(l) = c[static_cast<std::size_t>(l)];
    for (long long k = 1; k <= steps; ++k) {
      v = (m * v).eval();
      for (int l = 0; l < 5; ++l) c[static_cast<std::size_t>(l)] = v(l);
      record(k);
    }
    return out;
  }
  for (long long k = 1; k <= steps; ++k) {
    const ModeAmplitudes k1 = cm_rhs(c, p, variant);
    const ModeAmplitudes k2 = cm_rhs(add_scaled(c, 0.5 * dz_mm, k1), p, variant);
    const ModeAmplitudes k3 = cm_rhs(add_scaled(c, 0.5 * dz_mm, k2), p, variant);
    const ModeAmplitudes k4 = cm_rhs(add_scaled(c, dz_mm, k3), p, variant);
    for (std::size_t l = 0; l < 5; ++l)
      c[l] += dz_mm / 6.0 * (k1[l] + 2.0 * k2[l] + 2.0 * k3[l] + k4[l]);
    record(k);
  }
  return out;
}

CmResult cm_integrate(const CoupledModeParams& p, CmVariant variant, double z_max_mm,
                      double dz_mm, CmScheme scheme) {
  return cm_integrate_from(ModeAmplitudes{1.0, 0.0, 0.0, 0.0, 0.0}, p, variant, z_max_mm, dz_mm,
                           scheme);
}

RabiSolution cm_analytic_rabi(double kappa1, double z_mm) {
  if (!(kappa1 >= 0.0)) throw ConfigError("kappa1 must be non-negative");
  const double phase = kappa1 * z_mm;
  const double cs = std::cos(phase);
  const double sn = std::sin(phase);
  const double c2p = std::cos(2.0 * phase);
  RabiSolution s;
  s.c1 = cs * cs;
  s.c2 = -sn * sn;
  s.c3 = cplx(0.0, 0.5 * std::sin(2.0 * phase));
  s.p_right = cs * cs;
  s.p_pair = 0.5 * (1.0 + c2p * c2p);
  return s;
}

ParameterEstimate estimate_params(const StructureSpec& spec, const Grid2D& grid,
                                  const PhysicsConstants& constants, const ModeSolverConfig& cfg) {
  validate(spec);
  const ScalarField2D v_full = build_potential(grid, spec);
  const ScalarField2D v_one = build_isolated_guide_potential(grid, spec, GuideId::I);
  const ScalarField2D v_two = build_isolated_guide_potential(grid, spec, GuideId::II);

  const ModeSet guide_one =
      solve_modes(v_one, 1, constants, guide_solver_config(spec, GuideId::I, cfg));
  ModeSet guide_two =
      solve_modes(v_two, 3, constants, guide_solver_config(spec, GuideId::II, cfg));
  // The interaction ridge lifts the excited degeneracy slightly; the model
  // is built on the axis-parity pair.
  rotate_to_axis_parity(guide_two, 1, 3, constants);

  // (V - V_I) phi_1
  ComplexField2D coupled = guide_one[0].field;
  {
    auto c = coupled.values();
    const auto a = v_full.values();
    const auto b = v_one.values();
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= a[k] - b[k];
  }

  const double to_per_mm = 1e3 / constants.lambda_bar();
  ParameterEstimate est;
  for (std::size_t l = 0; l < 3; ++l) {
    const cplx o = overlap(guide_two[l].field, coupled);
    est.below_noise_floor[l] = std::abs(o) < 1e-14;
    if (l == 0 && est.below_noise_floor[l])
      throw NumericalError("fundamental coupling overlap is below the noise floor");
    est.signed_couplings[l] = std::copysign(std::abs(o), o.real()) * to_per_mm;
  }
  est.mu1 = guide_one[0].mu;
  est.mu3 = guide_two[0].mu;
  est.mu4 = guide_two[1].mu;
  est.mu5 = guide_two[2].mu;

  const double k_a = std::abs(est.signed_couplings[1]);
  const double k_b = std::abs(est.signed_couplings[2]);
  const bool a_smaller = k_a <= k_b;
  est.params.kappa1 = std::abs(est.signed_couplings[0]);
  est.params.kappa2 = a_smaller ? k_a : k_b;
  est.params.kappa3 = a_smaller ? k_b : k_a;
  est.excited_orientation = a_smaller
                                ? std::array<std::string, 2>{guide_two[1].orientation,
                                                             guide_two[2].orientation}
                                : std::array<std::string, 2>{guide_two[2].orientation,
                                                             guide_two[1].orientation};
  est.params.delta1 = (est.mu1 - est.mu3) * to_per_mm;
  est.params.delta2 = (est.mu5 - est.mu3) * to_per_mm;
  return est;
}

}  // namespace pairtunnel
