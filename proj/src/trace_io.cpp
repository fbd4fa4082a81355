#include "pairtunnel/trace_io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

namespace {

constexpr const char* kHeader = "z_mm,p_R,p_2,norm,sym_err";

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void ensure_parent(const std::filesystem::path& path) {
  const auto parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  std::filesystem::create_directories(parent, ec);
  if (ec) throw IoError("cannot create directory " + parent.string() + ": " + ec.message());
}

std::ofstream open_out(const std::filesystem::path& path, bool binary) {
  ensure_parent(path);
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  unsigned char bytes[8];
  for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>(bits >> (8 * b));
  out.write(reinterpret_cast<const char*>(bytes), 8);
}

}  // namespace

void write_trace_csv(const TunnelingTrace& trace, const std::filesystem::path& path) {
  auto out = open_out(path, false);
  out << kHeader << '\n';
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << format_value(trace.z_mm[k]) << ',' << format_value(trace.p_right[k]) << ','
        << format_value(trace.p_pair[k]) << ',' << format_value(trace.norm[k]) << ','
        << format_value(trace.sym_err[k]) << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

TunnelingTrace read_trace_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kHeader)
    throw IoError(path.string() + ": missing header " + kHeader);
  TunnelingTrace trace;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    double v[5];
    std::size_t pos = 0;
    for (int c = 0; c < 5; ++c) {
      const std::size_t end = line.find(',', pos);
      if ((c < 4) != (end != std::string::npos))
        throw IoError(path.string() + ": row " + std::to_string(row) + " must have 5 columns");
      const std::string cell = line.substr(pos, end == std::string::npos ? end : end - pos);
      char* stop = nullptr;
      v[c] = std::strtod(cell.c_str(), &stop);
      if (cell.empty() || *stop != '\0')
        throw IoError(path.string() + ": bad number '" + cell + "' in row " + std::to_string(row));
      pos = end + 1;
    }
    trace.append(v[0], v[1], v[2], v[3], v[4]);
  }
  return trace;
}

SnapshotFiles write_snapshot(const ScalarField2D& intensity, double z_mm,
                             const std::filesystem::path& stem, bool pgm) {
  SnapshotFiles files;
  files.raw = stem;
  files.raw += ".f64";
  files.sidecar = stem;
  files.sidecar += ".json";
  {
    auto out = open_out(files.raw, true);
    for (double v : intensity.values()) put_le(out, v);
    if (!out) throw IoError("failed writing " + files.raw.string());
  }
  {
    auto out = open_out(files.sidecar, false);
    nlohmann::json j{{"n", intensity.n()},
                     {"half_width_um", intensity.grid().half_width()},
                     {"z_mm", z_mm},
                     {"format", "f64-le-rowmajor"}};
    out << j.dump(2) << '\n';
    if (!out) throw IoError("failed writing " + files.sidecar.string());
  }
  if (pgm) {
    files.pgm = stem;
    files.pgm += ".pgm";
    auto out = open_out(files.pgm, true);
    const int n = intensity.n();
    out << "P5\n" << n << ' ' << n << "\n65535\n";
    double peak = 0.0;
    for (double v : intensity.values()) peak = std::max(peak, v);
    for (double v : intensity.values()) {
      const double s = peak > 0.0 ? std::clamp(v / peak, 0.0, 1.0) : 0.0;
      const auto px = static_cast<std::uint16_t>(std::lround(s * 65535.0));
      const char bytes[2] = {static_cast<char>(px >> 8), static_cast<char>(px & 0xff)};
      out.write(bytes, 2);
    }
    if (!out) throw IoError("failed writing " + files.pgm.string());
  }
  return files;
}

SnapshotFiles write_snapshot(const ComplexField2D& psi, double z_mm,
                             const std::filesystem::path& stem, bool pgm) {
  ScalarField2D intensity(psi.grid());
  auto dst = intensity.values();
  const auto src = psi.values();
  for (std::size_t k = 0; k < src.size(); ++k) dst[k] = std::norm(src[k]);
  return write_snapshot(intensity, z_mm, stem, pgm);
}

SnapshotInfo read_snapshot_sidecar(const std::filesystem::path& sidecar) {
  std::ifstream in(sidecar);
  if (!in) throw IoError("cannot read " + sidecar.string());
  try {
    const auto j = nlohmann::json::parse(in);
    if (j.at("format").get<std::string>() != "f64-le-rowmajor")
      throw IoError(sidecar.string() + ": unsupported snapshot format");
    return {j.at("n").get<int>(), j.at("half_width_um").get<double>(), j.at("z_mm").get<double>()};
  } catch (const nlohmann::json::exception& e) {
    throw IoError(sidecar.string() + ": " + e.what());
  }
}

ScalarField2D read_snapshot_raw(const std::filesystem::path& raw, const Grid2D& grid) {
  std::ifstream in(raw, std::ios::binary);
  if (!in) throw IoError("cannot read " + raw.string());
  ScalarField2D f(grid);
  unsigned char bytes[8];
  for (auto& v : f.values()) {
    if (!in.read(reinterpret_cast<char*>(bytes), 8))
      throw IoError(raw.string() + ": file shorter than the grid");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::ifstream::traits_type::eof())
    throw IoError(raw.string() + ": file longer than the grid");
  return f;
}

}  // namespace pairtunnel
