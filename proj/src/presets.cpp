#include "pairtunnel/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pairtunnel/errors.hpp"
#include "pairtunnel/trace_io.hpp"

namespace pairtunnel {

namespace {

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::filesystem::path config_path_for(const std::filesystem::path& trace_path) {
  auto p = trace_path;
  p.replace_extension(".config.json");
  return p;
}

void write_outputs(RunOutput& out, const RunConfig& cfg, const std::filesystem::path& dir) {
  out.trace_path = dir / cfg.output.trace_path;
  out.config_path = config_path_for(out.trace_path);
  write_trace_csv(out.trace, out.trace_path);
  save_run_config(cfg, out.config_path);
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b)); }

}  // namespace

void apply(RunConfig& cfg, const Overrides& o) {
  if (o.n) cfg.grid.n = *o.n;
  if (o.dz_um) cfg.propagation.dz_um = *o.dz_um;
  if (o.z_max_mm) cfg.propagation.z_max_mm = *o.z_max_mm;
  if (o.dz_um && *o.dz_um > 0.0) {
    // smallest multiple of dz not below the configured interval
    const double ratio = cfg.propagation.sample_every_mm * 1e3 / *o.dz_um;
    const double steps = std::max(1.0, std::ceil(ratio - 1e-9));
    cfg.propagation.sample_every_mm = steps * *o.dz_um * 1e-3;
  }
}

RunConfig fig2_config(double delta_n2, const std::optional<RunConfig>& base) {
  RunConfig cfg = base.value_or(RunConfig{});
  ErfStructure s;
  if (const auto* e = std::get_if<ErfStructure>(&cfg.structure)) s = *e;
  s.interaction.delta_n2 = delta_n2;
  cfg.structure = s;
  if (!base) {
    const bool listed = near(delta_n2, 0.0) || near(delta_n2, 0.5e-3) || near(delta_n2, 15e-3);
    cfg.propagation.z_max_mm = listed ? 50.0 : 100.0;
  }
  cfg.output.trace_path = "fig2_dn2_" + format_value(delta_n2) + ".csv";
  return cfg;
}

RunConfig fig4_config(double w_c_um, const std::optional<RunConfig>& base) {
  RunConfig cfg = base.value_or(RunConfig{});
  FourCoreFiberSpec s;
  if (const auto* f = std::get_if<FourCoreFiberSpec>(&cfg.structure)) s = *f;
  s.w_c_um = w_c_um;
  cfg.structure = s;
  if (!base) cfg.propagation.z_max_mm = 100.0;
  cfg.output.trace_path = "fig4_wc_" + format_value(w_c_um) + ".csv";
  return cfg;
}

CoupledModeParams fig3_params(int curve) {
  static constexpr double delta1[] = {0.0, 1.22, 3.2, 18.9};
  static constexpr double kappa1[] = {0.212, 0.26, 0.32, 0.38};
  if (curve < 1 || curve > 4) throw ConfigError("fig3 curve must be 1-4");
  const auto k = static_cast<std::size_t>(curve - 1);
  return {kappa1[k], 0.16, 0.80, delta1[k], 20.0};
}

RunConfig fig3_config(int curve, const std::optional<RunConfig>& base) {
  RunConfig cfg = base.value_or(RunConfig{});
  cfg.cm.params = fig3_params(curve);
  if (!base) {
    cfg.cm.variant = CmVariant::Full;
    cfg.cm.dz_mm = 0.01;
    cfg.propagation.z_max_mm = curve >= 3 ? 100.0 : 50.0;
  }
  cfg.output.trace_path = "fig3_curve" + std::to_string(curve) + ".csv";
  return cfg;
}

RunOutput run_propagation(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
  cfg.validate();
  const Grid2D grid = cfg.make_grid();
  const ScalarField2D v = build_potential(grid, cfg.structure);
  const ComplexField2D psi0 = launch_field(cfg.structure, grid, cfg.physics, cfg.modes);
  const Stepper stepper =
      make_stepper(grid, v, cfg.physics, cfg.propagation.dz_um, cfg.propagation.absorber);

  PropagationObservers observers;
  if (out_dir && cfg.output.snapshot_every_mm) {
    const auto dir = *out_dir / cfg.output.snapshot_dir;
    const bool pgm = cfg.output.pgm;
    observers.on_snapshot = [dir, pgm](const ComplexField2D& psi, double z_um) {
      char name[48];
      std::snprintf(name, sizeof name, "z_%09.3fmm", z_um * 1e-3);
      write_snapshot(psi, z_um * 1e-3, dir / name, pgm);
    };
  }

  RunOutput out;
  out.trace = propagate(psi0, stepper, cfg.bpm_config(), observers, nullptr);
  if (const auto* e = std::get_if<ErfStructure>(&cfg.structure))
    out.trace.parameters["delta_n2"] = e->interaction.delta_n2;
  else
    out.trace.parameters["w_c_um"] = std::get<FourCoreFiberSpec>(cfg.structure).w_c_um;
  out.label = classify_regime(out.trace, cfg.classifier);
  if (out_dir) write_outputs(out, cfg, *out_dir);
  return out;
}

RunOutput run_coupled_mode(const RunConfig& cfg, const std::optional<std::filesystem::path>& out_dir) {
  cfg.validate();
  RunConfig resolved = cfg;
  if (!resolved.cm.params)
    resolved.cm.params =
        estimate_params(cfg.structure, cfg.make_grid(), cfg.physics, cfg.modes).params;
  RunOutput out;
  out.trace = cm_integrate(*resolved.cm.params, resolved.cm.variant,
                           resolved.propagation.z_max_mm, resolved.cm.dz_mm, resolved.cm.scheme)
                  .trace;
  out.label = classify_regime(out.trace, resolved.classifier);
  if (out_dir) write_outputs(out, resolved, *out_dir);
  return out;
}

RunOutput run_fig2(double delta_n2, const Overrides& o,
                   const std::optional<std::filesystem::path>& out_dir,
                   const std::optional<RunConfig>& base) {
  RunConfig cfg = fig2_config(delta_n2, base);
  apply(cfg, o);
  return run_propagation(cfg, out_dir);
}

RunOutput run_fig3(int curve, const Overrides& o,
                   const std::optional<std::filesystem::path>& out_dir,
                   const std::optional<RunConfig>& base) {
  RunConfig cfg = fig3_config(curve, base);
  apply(cfg, o);
  return run_coupled_mode(cfg, out_dir);
}

RunOutput run_fig4(double w_c_um, const Overrides& o,
                   const std::optional<std::filesystem::path>& out_dir,
                   const std::optional<RunConfig>& base) {
  RunConfig cfg = fig4_config(w_c_um, base);
  apply(cfg, o);
  return run_propagation(cfg, out_dir);
}

SweepParameter parse_sweep_parameter(std::string_view name) {
  if (name == "dn2" || name == "delta_n2") return SweepParameter::DeltaN2;
  if (name == "wc" || name == "w_c" || name == "w_c_um") return SweepParameter::CutWidth;
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "' (use dn2 or wc)");
}

std::string_view to_string(SweepParameter p) {
  return p == SweepParameter::DeltaN2 ? "dn2" : "wc";
}

std::vector<SweepRow> sweep(SweepParameter parameter, const std::vector<double>& values,
                            const Overrides& o, const std::optional<std::filesystem::path>& out_dir,
                            const std::optional<RunConfig>& base) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<SweepRow> rows;
  for (double value : values) {
    SweepRow row;
    row.value = value;
    std::optional<std::filesystem::path> dir;
    if (out_dir) dir = *out_dir / (std::string(to_string(parameter)) + "_" + format_value(value));
    try {
      const RunOutput r = parameter == SweepParameter::DeltaN2 ? run_fig2(value, o, dir, base)
                                                               : run_fig4(value, o, dir, base);
      row.label = r.label;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  if (out_dir) write_sweep_summary(rows, *out_dir / "summary.csv");
  return rows;
}

void write_sweep_summary(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
  if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "value,label,min_pR,min_p2,slow_period_mm\n";
  for (const auto& row : rows) {
    out << format_value(row.value) << ',';
    if (row.label)
      out << to_string(row.label->regime) << ',' << format_value(row.label->min_p_right) << ','
          << format_value(row.label->min_p2) << ',' << format_value(row.label->slow_period_mm);
    else
      out << "ERROR,nan,nan,nan";
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pairtunnel
