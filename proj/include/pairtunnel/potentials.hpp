#pragma once

// Optical potentials V(x1, x2) = n_s - n(x1, x2) for the two structure
// families: the erf double well with a short-range erf interaction ridge
// along the diagonal, and the four-core step-index fiber with a diagonal cut
// through cores I and III.

#include <string_view>
#include <variant>

#include "pairtunnel/domain.hpp"

namespace pairtunnel {

struct ErfWellSpec {
  double delta_n1 = 0.003;
  double a_um = 4.5;   // half-separation of the wells
  double w_um = 3.0;   // half-width of each well
  double dx_um = 1.0;  // edge smoothness D_x

  void validate() const;
};

struct InteractionSpec {
  double delta_n2 = 0.0;
  double w_i_um = 0.5;
  double dxi_um = 0.2;

  void validate() const;
};

struct ErfStructure {
  ErfWellSpec well;
  InteractionSpec interaction;
};

struct FourCoreFiberSpec {
  double delta_n = 0.005;
  double a_um = 3.5;    // half core spacing
  double w_um = 2.5;    // core radius
  double w_c_um = 0.0;  // perpendicular width of the diagonal cut

  void validate() const;
};

using StructureSpec = std::variant<ErfStructure, FourCoreFiberSpec>;

void validate(const StructureSpec& spec);

// Guides I..IV centered at (a,a), (-a,a), (-a,-a), (a,-a).
enum class GuideId { I, II, III, IV };

struct GuideCenter {
  double x1;
  double x2;
};

GuideCenter guide_center(GuideId guide, double a_um);
GuideId parse_guide(std::string_view name);
std::string_view to_string(GuideId guide);

// Normalized erf well shape g(x), with g(0) = 1.
double erf_well_shape(double x, double half_width, double smoothness);

// V_w(x) = -dn1 [g(x - a) + g(x + a)]
double double_well_1d(double x, const ErfWellSpec& spec);

// V_int(s) = dn2 g_i(s), evaluated at s = x1 - x2
double interaction_1d(double s, const InteractionSpec& spec);

ScalarField2D build_two_boson_potential(const Grid2D& grid, const ErfWellSpec& well,
                                        const InteractionSpec& inter);
ScalarField2D build_four_core_potential(const Grid2D& grid, const FourCoreFiberSpec& spec);
ScalarField2D build_potential(const Grid2D& grid, const StructureSpec& spec);

// Potential of one guide in isolation. For the erf family only the two well
// factors meeting at that guide are kept; the interaction ridge is retained
// for every guide. For the fiber only that core's disk is kept, with the cut
// applied for I and III.
ScalarField2D build_isolated_guide_potential(const Grid2D& grid, const StructureSpec& spec,
                                             GuideId guide);

// Representative guide size used to seed the mode solver.
double guide_half_width(const StructureSpec& spec);
double guide_offset(const StructureSpec& spec);

}  // namespace pairtunnel
