#pragma once

// Run configuration and its JSON form. Parsing is strict: unknown keys and
// wrong types are errors. Absent keys keep their defaults.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "pairtunnel/coupled_mode.hpp"
#include "pairtunnel/modes.hpp"
#include "pairtunnel/physics.hpp"
#include "pairtunnel/potentials.hpp"
#include "pairtunnel/regime.hpp"

namespace pairtunnel {

struct GridConfig {
  int n = 512;
  double half_width_um = 15.0;
};

struct PropagationConfig {
  double dz_um = 1.0;
  double z_max_mm = 50.0;
  double sample_every_mm = 0.05;
  bool absorber = false;
};

struct CmConfig {
  std::optional<CoupledModeParams> params;  // unset: estimate from modes
  CmVariant variant = CmVariant::Full;
  CmScheme scheme = CmScheme::Gauss4;
  double dz_mm = 0.01;
};

struct OutputConfig {
  std::string trace_path = "trace.csv";
  std::optional<double> snapshot_every_mm;
  std::string snapshot_dir = "snapshots";
  bool pgm = true;
};

struct RunConfig {
  GridConfig grid;
  PhysicsConstants physics;
  StructureSpec structure = ErfStructure{};
  PropagationConfig propagation;
  CmConfig cm;
  OutputConfig output;
  ModeSolverConfig modes;
  ClassifierThresholds classifier;

  void validate() const;
  Grid2D make_grid() const;
  BpmConfig bpm_config() const;
};

RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);
std::string dump_run_config(const RunConfig& cfg);
void save_run_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace pairtunnel
