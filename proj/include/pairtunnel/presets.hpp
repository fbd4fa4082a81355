#pragma once

// Figure presets, single runs with file output, and parameter sweeps.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairtunnel/config.hpp"
#include "pairtunnel/regime.hpp"

namespace pairtunnel {

struct Overrides {
  std::optional<int> n;
  std::optional<double> dz_um;
  std::optional<double> z_max_mm;
};

// A dz override also rounds the sample interval up to a multiple of dz.
void apply(RunConfig& cfg, const Overrides& o);

// Interaction-strength presets on the erf double well (defaults n=512,
// L=15 um, dz=1 um, 50 mm; 100 mm for dn2 = 1.5e-3 and for values outside
// the preset list). With a base config only the structure and trace name
// change; erf well parameters of the base are kept.
RunConfig fig2_config(double delta_n2, const std::optional<RunConfig>& base = std::nullopt);
// Cut-width presets on the four-core fiber, 100 mm by default.
RunConfig fig4_config(double w_c_um, const std::optional<RunConfig>& base = std::nullopt);
// Coupled-mode curves 1-4: kappa2 = 0.16, kappa3 = 0.80, delta2 = 20 with
// (delta1, kappa1) = (0, 0.212), (1.22, 0.26), (3.2, 0.32), (18.9, 0.38).
CoupledModeParams fig3_params(int curve);
RunConfig fig3_config(int curve, const std::optional<RunConfig>& base = std::nullopt);

struct RunOutput {
  TunnelingTrace trace;
  RegimeLabel label;
  std::filesystem::path trace_path;   // empty when nothing was written
  std::filesystem::path config_path;
};

// BPM run: builds the structure, launches the symmetrized guide-I mode and
// propagates. With an output directory the trace goes to
// out_dir / output.trace_path, the resolved config next to it, and snapshots
// under out_dir / output.snapshot_dir.
RunOutput run_propagation(const RunConfig& cfg,
                          const std::optional<std::filesystem::path>& out_dir = std::nullopt);

// Coupled-mode run over [0, propagation.z_max_mm] with cm.dz_mm; parameters
// are estimated from guided modes when cm.params is unset.
RunOutput run_coupled_mode(const RunConfig& cfg,
                           const std::optional<std::filesystem::path>& out_dir = std::nullopt);

RunOutput run_fig2(double delta_n2, const Overrides& o = {},
                   const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                   const std::optional<RunConfig>& base = std::nullopt);
RunOutput run_fig3(int curve, const Overrides& o = {},
                   const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                   const std::optional<RunConfig>& base = std::nullopt);
RunOutput run_fig4(double w_c_um, const Overrides& o = {},
                   const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                   const std::optional<RunConfig>& base = std::nullopt);

enum class SweepParameter { DeltaN2, CutWidth };
SweepParameter parse_sweep_parameter(std::string_view name);
std::string_view to_string(SweepParameter p);

struct SweepRow {
  double value = 0.0;
  std::optional<RegimeLabel> label;  // unset when the run failed
  std::string error;
};

// One run per value through run_fig2 / run_fig4. Failures are recorded per row
// and the sweep continues. With an output directory each run writes into its
// own subdirectory and summary.csv (value,label,min_pR,min_p2,slow_period_mm)
// is written last.
std::vector<SweepRow> sweep(SweepParameter parameter, const std::vector<double>& values,
                            const Overrides& o = {},
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt,
                            const std::optional<RunConfig>& base = std::nullopt);

void write_sweep_summary(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace pairtunnel
