#pragma once

// CSV traces and field snapshots.

#include <filesystem>
#include <string>

#include "pairtunnel/bpm.hpp"
#include "pairtunnel/domain.hpp"

namespace pairtunnel {

// Header z_mm,p_R,p_2,norm,sym_err; values with 12 significant digits.
void write_trace_csv(const TunnelingTrace& trace, const std::filesystem::path& path);
TunnelingTrace read_trace_csv(const std::filesystem::path& path);

struct SnapshotFiles {
  std::filesystem::path raw;      // little-endian f64 |psi|^2, row-major, x1 as row
  std::filesystem::path sidecar;  // JSON {n, half_width_um, z_mm, format}
  std::filesystem::path pgm;      // empty when not written
};

struct SnapshotInfo {
  int n = 0;
  double half_width_um = 0.0;
  double z_mm = 0.0;
};

// Writes <stem>.f64, <stem>.json and optionally <stem>.pgm (16-bit P5, |psi|^2
// scaled linearly so the maximum maps to 65535).
SnapshotFiles write_snapshot(const ScalarField2D& intensity, double z_mm,
                             const std::filesystem::path& stem, bool pgm = true);
SnapshotFiles write_snapshot(const ComplexField2D& psi, double z_mm,
                             const std::filesystem::path& stem, bool pgm = true);

SnapshotInfo read_snapshot_sidecar(const std::filesystem::path& sidecar);
ScalarField2D read_snapshot_raw(const std::filesystem::path& raw, const Grid2D& grid);

}  // namespace pairtunnel
