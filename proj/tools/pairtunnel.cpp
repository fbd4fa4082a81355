// Command-line front end. Exit codes: 0 ok, 2 configuration, 3 numerical,
// 4 I/O, 1 anything else.

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "pairtunnel/config.hpp"
#include "pairtunnel/coupled_mode.hpp"
#include "pairtunnel/errors.hpp"
#include "pairtunnel/fft.hpp"
#include "pairtunnel/modes.hpp"
#include "pairtunnel/presets.hpp"
#include "pairtunnel/trace_io.hpp"

namespace fs = std::filesystem;
using namespace pairtunnel;

namespace {

struct Common {
  std::string config;
  std::string out = ".";
  std::optional<int> n;
  std::optional<double> dz_um;
  std::optional<double> z_max_mm;
  bool estimate_fft = false;

  void attach(CLI::App* app) {
    app->add_option("--config", config, "JSON run configuration");
    app->add_option("--out", out, "output directory")->capture_default_str();
    app->add_option("--n", n, "grid points per axis");
    app->add_option("--dz-um", dz_um, "propagation step (um)");
    app->add_option("--zmax-mm", z_max_mm, "propagation length (mm)");
    app->add_flag("--fft-estimate", estimate_fft, "use FFTW_ESTIMATE plans (reproducible across processes)");
  }

  Overrides overrides() const { return {n, dz_um, z_max_mm}; }

  std::optional<RunConfig> base() const {
    if (config.empty()) return std::nullopt;
    return load_run_config(config);
  }

  RunConfig resolved() const {
    RunConfig cfg = base().value_or(RunConfig{});
    apply(cfg, overrides());
    return cfg;
  }
};

void print_label(const RunOutput& r) {
  const auto& l = r.label;
  std::printf("regime %s  min_pR %.6g  min_p2 %.6g  min_p2_first_cycle %.6g  fast_osc %d  slow_period_mm %.6g\n",
              std::string(to_string(l.regime)).c_str(), l.min_p_right, l.min_p2, l.min_p2_first_cycle,
              l.fast_osc_count, l.slow_period_mm);
  if (!r.trace_path.empty())
    std::printf("trace %s\nconfig %s\n", r.trace_path.string().c_str(), r.config_path.string().c_str());
}

int run(int argc, char** argv) {
  CLI::App app{"Two-boson tunneling in four-core optical structures"};
  app.require_subcommand(1);

  Common c_modes, c_prop, c_cm, c_est, c_f2, c_f3, c_f4, c_sweep, c_cls;

  auto* modes = app.add_subcommand("modes", "guided modes of one isolated guide or the full structure");
  c_modes.attach(modes);
  std::string guide = "I";
  int count = 1;
  modes->add_option("--guide", guide, "I, II, III, IV or full")->capture_default_str();
  modes->add_option("--count", count, "number of modes")->capture_default_str();

  auto* prop = app.add_subcommand("propagate", "BPM run from a config");
  c_prop.attach(prop);

  auto* cm = app.add_subcommand("cm", "coupled-mode integration");
  c_cm.attach(cm);
  std::optional<double> k1, k2, k3, d1, d2, cm_dz;
  std::string variant;
  std::string scheme;
  bool estimate = false;
  cm->add_option("--kappa1", k1, "1/mm");
  cm->add_option("--kappa2", k2, "1/mm");
  cm->add_option("--kappa3", k3, "1/mm");
  cm->add_option("--delta1", d1, "1/mm");
  cm->add_option("--delta2", d2, "1/mm");
  cm->add_option("--variant", variant, "full, two_mode or fermionized");
  cm->add_option("--scheme", scheme, "gauss4 or rk4");
  cm->add_option("--dz-mm", cm_dz, "integration step (mm)");
  cm->add_flag("--estimate", estimate, "estimate parameters from guided modes");

  auto* est = app.add_subcommand("estimate-params", "coupling constants and detunings from guided modes");
  c_est.attach(est);

  auto* f2 = app.add_subcommand("fig2", "erf double well at one interaction strength");
  c_f2.attach(f2);
  double dn2 = 0.0;
  f2->add_option("--dn2", dn2, "interaction strength")->capture_default_str();

  auto* f3 = app.add_subcommand("fig3", "coupled-mode preset curve");
  c_f3.attach(f3);
  int curve = 1;
  f3->add_option("--curve", curve, "1-4")->capture_default_str();

  auto* f4 = app.add_subcommand("fig4", "four-core fiber at one cut width");
  c_f4.attach(f4);
  double wc = 0.0;
  f4->add_option("--wc", wc, "cut width (um)")->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "run a list of dn2 or w_c values and summarize");
  c_sweep.attach(sw);
  std::string param = "dn2";
  std::vector<double> values;
  sw->add_option("--param", param, "dn2 or wc")->capture_default_str();
  sw->add_option("--values", values, "comma-separated values")->delimiter(',');

  auto* cls = app.add_subcommand("classify", "label an existing trace CSV");
  c_cls.attach(cls);
  std::string trace_file;
  cls->add_option("--trace", trace_file, "trace CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const Common* c : {&c_modes, &c_prop, &c_cm, &c_est, &c_f2, &c_f3, &c_f4, &c_sweep, &c_cls})
    if (c->estimate_fft) set_fft_planning(FftPlanning::Estimate);

  if (modes->parsed()) {
    const RunConfig cfg = c_modes.resolved();
    cfg.validate();
    const Grid2D grid = cfg.make_grid();
    ModeSolverConfig mcfg = cfg.modes;
    ScalarField2D v(grid);
    if (guide == "full") {
      v = build_potential(grid, cfg.structure);
    } else {
      const GuideId id = parse_guide(guide);
      v = build_isolated_guide_potential(grid, cfg.structure, id);
      mcfg = guide_solver_config(cfg.structure, id, mcfg);
    }
    const ModeSet set = solve_modes(v, count, cfg.physics, mcfg);
    const fs::path dir = c_modes.out;
    nlohmann::json summary = nlohmann::json::array();
    for (std::size_t k = 0; k < set.size(); ++k) {
      const auto& m = set[k];
      std::printf("mode %zu  mu %.12g  beta_offset %.9g 1/um  residual %.3g  iterations %lld  swap_parity %.6f  orientation %s\n",
                  k + 1, m.mu, m.beta_offset, m.residual, m.iterations, m.swap_parity,
                  m.orientation.c_str());
      const auto files = write_snapshot(m.field, 0.0, dir / ("mode_" + std::to_string(k + 1)), cfg.output.pgm);
      summary.push_back({{"index", k + 1}, {"mu", m.mu}, {"beta_offset_per_um", m.beta_offset},
                         {"residual", m.residual}, {"iterations", m.iterations},
                         {"swap_parity", m.swap_parity}, {"orientation", m.orientation},
                         {"intensity", files.raw.filename().string()}});
    }
    std::ofstream out(dir / "modes.json");
    if (!out) throw IoError("cannot write " + (dir / "modes.json").string());
    out << summary.dump(2) << '\n';
    return 0;
  }

  if (prop->parsed()) {
    print_label(run_propagation(c_prop.resolved(), fs::path(c_prop.out)));
    return 0;
  }

  if (cm->parsed()) {
    RunConfig cfg = c_cm.resolved();
    if (estimate) {
      cfg.cm.params.reset();
    } else if (k1 || k2 || k3 || d1 || d2) {
      CoupledModeParams p = cfg.cm.params.value_or(CoupledModeParams{});
      if (k1) p.kappa1 = *k1;
      if (k2) p.kappa2 = *k2;
      if (k3) p.kappa3 = *k3;
      if (d1) p.delta1 = *d1;
      if (d2) p.delta2 = *d2;
      cfg.cm.params = p;
    } else if (c_cm.config.empty()) {
      throw ConfigError("cm needs parameters (--kappa1 ... or --config) or --estimate");
    }
    if (!variant.empty()) cfg.cm.variant = parse_variant(variant);
    if (!scheme.empty()) cfg.cm.scheme = parse_scheme(scheme);
    if (cm_dz) cfg.cm.dz_mm = *cm_dz;
    if (cfg.output.trace_path == RunConfig{}.output.trace_path) cfg.output.trace_path = "cm.csv";
    print_label(run_coupled_mode(cfg, fs::path(c_cm.out)));
    return 0;
  }

  if (est->parsed()) {
    const RunConfig cfg = c_est.resolved();
    cfg.validate();
    const ParameterEstimate e = estimate_params(cfg.structure, cfg.make_grid(), cfg.physics, cfg.modes);
    const auto& p = e.params;
    std::printf("kappa1 %.9g\nkappa2 %.9g\nkappa3 %.9g\ndelta1 %.9g\ndelta2 %.9g\n", p.kappa1,
                p.kappa2, p.kappa3, p.delta1, p.delta2);
    const fs::path path = fs::path(c_est.out) / "params.json";
    fs::create_directories(path.parent_path());
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    nlohmann::json j{{"kappa1", p.kappa1}, {"kappa2", p.kappa2}, {"kappa3", p.kappa3},
                     {"delta1", p.delta1}, {"delta2", p.delta2}, {"units", "1/mm"},
                     {"mu", {e.mu1, e.mu3, e.mu4, e.mu5}},
                     {"excited_orientation", {e.excited_orientation[0], e.excited_orientation[1]}}};
    out << j.dump(2) << '\n';
    return 0;
  }

  if (f2->parsed()) {
    print_label(run_fig2(dn2, c_f2.overrides(), fs::path(c_f2.out), c_f2.base()));
    return 0;
  }
  if (f3->parsed()) {
    print_label(run_fig3(curve, c_f3.overrides(), fs::path(c_f3.out), c_f3.base()));
    return 0;
  }
  if (f4->parsed()) {
    print_label(run_fig4(wc, c_f4.overrides(), fs::path(c_f4.out), c_f4.base()));
    return 0;
  }

  if (sw->parsed()) {
    const auto rows = sweep(parse_sweep_parameter(param), values, c_sweep.overrides(),
                            fs::path(c_sweep.out), c_sweep.base());
    bool failed = false;
    for (const auto& row : rows) {
      if (row.label)
        std::printf("%-10g %-10s min_pR %.6g min_p2 %.6g slow_period_mm %.6g\n", row.value,
                    std::string(to_string(row.label->regime)).c_str(), row.label->min_p_right,
                    row.label->min_p2, row.label->slow_period_mm);
      else
        std::printf("%-10g ERROR %s\n", row.value, row.error.c_str());
      failed = failed || !row.label;
    }
    std::printf("summary %s\n", (fs::path(c_sweep.out) / "summary.csv").string().c_str());
    return failed ? 3 : 0;
  }

  if (cls->parsed()) {
    const RunConfig cfg = c_cls.resolved();
    RunOutput r;
    r.trace = read_trace_csv(trace_file);
    r.label = classify_regime(r.trace, cfg.classifier);
    print_label(r);
    return 0;
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
