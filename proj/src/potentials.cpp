#include "pairtunnel/potentials.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

namespace {

bool positive(double v) { return v > 0.0 && std::isfinite(v); }

}  // namespace

void ErfWellSpec::validate() const {
  if (!positive(delta_n1) || !positive(a_um) || !positive(w_um) || !positive(dx_um))
    throw ConfigError("erf well parameters must all be positive");
  if (w_um <= dx_um)
    std::cerr << "warning: erf well half-width " << w_um << " um does not exceed edge smoothness "
              << dx_um << " um\n";
}

void InteractionSpec::validate() const {
  if (!(delta_n2 >= 0.0) || !std::isfinite(delta_n2))
    throw ConfigError("interaction strength delta_n2 must be >= 0");
  if (!positive(w_i_um) || !positive(dxi_um))
    throw ConfigError("interaction width and smoothness must be positive");
}

void FourCoreFiberSpec::validate() const {
  if (!positive(delta_n) || !positive(a_um) || !positive(w_um))
    throw ConfigError("four-core fiber delta_n, a and w must be positive");
  if (!(w_c_um >= 0.0) || !std::isfinite(w_c_um)) throw ConfigError("cut width must be >= 0");
  if (w_c_um >= 2.0 * w_um) throw ConfigError("cut width must be narrower than the core diameter");
}

void validate(const StructureSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErfStructure>) {
          s.well.validate();
          s.interaction.validate();
        } else {
          s.validate();
        }
      },
      spec);
}

GuideCenter guide_center(GuideId guide, double a_um) {
  switch (guide) {
    case GuideId::I: return {a_um, a_um};
    case GuideId::II: return {-a_um, a_um};
    case GuideId::III: return {-a_um, -a_um};
    case GuideId::IV: return {a_um, -a_um};
  }
  throw ConfigError("invalid guide id");
}

GuideId parse_guide(std::string_view name) {
  if (name == "I" || name == "1") return GuideId::I;
  if (name == "II" || name == "2") return GuideId::II;
  if (name == "III" || name == "3") return GuideId::III;
  if (name == "IV" || name == "4") return GuideId::IV;
  throw ConfigError("invalid guide id '" + std::string(name) + "' (expected I, II, III or IV)");
}

std::string_view to_string(GuideId guide) {
  switch (guide) {
    case GuideId::I: return "I";
    case GuideId::II: return "II";
    case GuideId::III: return "III";
    case GuideId::IV: return "IV";
  }
  return "?";
}

double erf_well_shape(double x, double half_width, double smoothness) {
  return (std::erf((x + half_width) / smoothness) - std::erf((x - half_width) / smoothness)) /
         (2.0 * std::erf(half_width / smoothness));
}

double double_well_1d(double x, const ErfWellSpec& spec) {
  return -spec.delta_n1 * (erf_well_shape(x - spec.a_um, spec.w_um, spec.dx_um) +
                           erf_well_shape(x + spec.a_um, spec.w_um, spec.dx_um));
}

double interaction_1d(double s, const InteractionSpec& spec) {
  if (spec.delta_n2 == 0.0) return 0.0;
  return spec.delta_n2 * erf_well_shape(s, spec.w_i_um, spec.dxi_um);
}

namespace {

// Samples of one erf well factor -dn1 g(x - shift) along the shared axis.
std::vector<double> well_factor(const Grid2D& grid, const ErfWellSpec& well, double shift) {
  auto x = grid.coordinates();
  for (auto& v : x) v = -well.delta_n1 * erf_well_shape(v - shift, well.w_um, well.dx_um);
  return x;
}

// V_int(x1 - x2) depends only on i - j, so tabulate it by index difference.
std::vector<double> interaction_by_offset(const Grid2D& grid, const InteractionSpec& inter) {
  const int n = grid.n();
  std::vector<double> table(static_cast<std::size_t>(2 * n - 1));
  for (int d = -(n - 1); d <= n - 1; ++d)
    table[static_cast<std::size_t>(d + n - 1)] =
        interaction_1d(static_cast<double>(d) * grid.dx(), inter);
  return table;
}

ScalarField2D erf_field(const Grid2D& grid, const std::vector<double>& row_term,
                        const std::vector<double>& col_term, const InteractionSpec& inter) {
  const int n = grid.n();
  const auto ridge = interaction_by_offset(grid, inter);
  ScalarField2D v(grid);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      v(i, j) = row_term[static_cast<std::size_t>(i)] + col_term[static_cast<std::size_t>(j)] +
                ridge[static_cast<std::size_t>(i - j + n - 1)];
  return v;
}

bool inside_disk(double x1, double x2, GuideCenter c, double radius) {
  const double d1 = x1 - c.x1;
  const double d2 = x2 - c.x2;
  return d1 * d1 + d2 * d2 < radius * radius;
}

bool inside_cut(double x1, double x2, double cut_width) {
  return cut_width > 0.0 && std::abs(x1 - x2) < cut_width / std::numbers::sqrt2;
}

// Core membership with the cut removed from the diagonal cores I and III.
bool in_core(double x1, double x2, const FourCoreFiberSpec& spec, GuideId guide) {
  if (!inside_disk(x1, x2, guide_center(guide, spec.a_um), spec.w_um)) return false;
  if (guide == GuideId::I || guide == GuideId::III) return !inside_cut(x1, x2, spec.w_c_um);
  return true;
}

}  // namespace

ScalarField2D build_two_boson_potential(const Grid2D& grid, const ErfWellSpec& well,
                                        const InteractionSpec& inter) {
  well.validate();
  inter.validate();
  auto vw = well_factor(grid, well, well.a_um);
  const auto left = well_factor(grid, well, -well.a_um);
  for (std::size_t k = 0; k < vw.size(); ++k) vw[k] += left[k];
  return erf_field(grid, vw, vw, inter);
}

ScalarField2D build_four_core_potential(const Grid2D& grid, const FourCoreFiberSpec& spec) {
  spec.validate();
  return ScalarField2D::sample(grid, [&](double x1, double x2) {
    for (GuideId g : {GuideId::I, GuideId::II, GuideId::III, GuideId::IV})
      if (in_core(x1, x2, spec, g)) return -spec.delta_n;
    return 0.0;
  });
}

ScalarField2D build_potential(const Grid2D& grid, const StructureSpec& spec) {
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErfStructure>)
          return build_two_boson_potential(grid, s.well, s.interaction);
        else
          return build_four_core_potential(grid, s);
      },
      spec);
}

ScalarField2D build_isolated_guide_potential(const Grid2D& grid, const StructureSpec& spec,
                                             GuideId guide) {
  validate(spec);
  return std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErfStructure>) {
          const auto c = guide_center(guide, s.well.a_um);
          return erf_field(grid, well_factor(grid, s.well, c.x1), well_factor(grid, s.well, c.x2),
                           s.interaction);
        } else {
          return ScalarField2D::sample(grid, [&](double x1, double x2) {
            return in_core(x1, x2, s, guide) ? -s.delta_n : 0.0;
          });
        }
      },
      spec);
}

double guide_half_width(const StructureSpec& spec) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErfStructure>)
          return s.well.w_um;
        else
          return s.w_um;
      },
      spec);
}

double guide_offset(const StructureSpec& spec) {
  return std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, ErfStructure>)
          return s.well.a_um;
        else
          return s.a_um;
      },
      spec);
}

}  // namespace pairtunnel
