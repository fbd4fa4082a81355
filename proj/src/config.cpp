#include "pairtunnel/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include <json.hpp>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + std::string(where));
  }
}

template <class T>
void read(const json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + "." + key + " has the wrong type");
  }
}

void read_number(const json& j, const char* key, double& out, std::string_view where) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) throw ConfigError(std::string(where) + "." + key + " must be a number");
  out = j.at(key).get<double>();
}

ErfStructure parse_erf(const json& j) {
  check_keys(j, "structure", {"type", "delta_n1", "a_um", "w_um", "dx_um", "interaction"});
  ErfStructure s;
  read_number(j, "delta_n1", s.well.delta_n1, "structure");
  read_number(j, "a_um", s.well.a_um, "structure");
  read_number(j, "w_um", s.well.w_um, "structure");
  read_number(j, "dx_um", s.well.dx_um, "structure");
  if (j.contains("interaction")) {
    const json& i = j.at("interaction");
    check_keys(i, "structure.interaction", {"delta_n2", "w_i_um", "dxi_um"});
    read_number(i, "delta_n2", s.interaction.delta_n2, "structure.interaction");
    read_number(i, "w_i_um", s.interaction.w_i_um, "structure.interaction");
    read_number(i, "dxi_um", s.interaction.dxi_um, "structure.interaction");
  }
  return s;
}

FourCoreFiberSpec parse_fiber(const json& j) {
  check_keys(j, "structure", {"type", "delta_n", "a_um", "w_um", "w_c_um"});
  FourCoreFiberSpec s;
  read_number(j, "delta_n", s.delta_n, "structure");
  read_number(j, "a_um", s.a_um, "structure");
  read_number(j, "w_um", s.w_um, "structure");
  read_number(j, "w_c_um", s.w_c_um, "structure");
  return s;
}

StructureSpec parse_structure(const json& j) {
  if (!j.is_object()) throw ConfigError("structure must be an object");
  if (!j.contains("type") || !j.at("type").is_string())
    throw ConfigError("structure.type must be \"erf_double_well\" or \"four_core\"");
  const auto type = j.at("type").get<std::string>();
  if (type == "erf_double_well") return parse_erf(j);
  if (type == "four_core") return parse_fiber(j);
  throw ConfigError("unknown structure type '" + type + "'");
}

CoupledModeParams parse_params(const json& j) {
  check_keys(j, "cm.params", {"kappa1", "kappa2", "kappa3", "delta1", "delta2"});
  CoupledModeParams p;
  read_number(j, "kappa1", p.kappa1, "cm.params");
  read_number(j, "kappa2", p.kappa2, "cm.params");
  read_number(j, "kappa3", p.kappa3, "cm.params");
  read_number(j, "delta1", p.delta1, "cm.params");
  read_number(j, "delta2", p.delta2, "cm.params");
  return p;
}

json structure_json(const StructureSpec& spec) {
  if (const auto* e = std::get_if<ErfStructure>(&spec)) {
    return {{"type", "erf_double_well"},
            {"delta_n1", e->well.delta_n1},
            {"a_um", e->well.a_um},
            {"w_um", e->well.w_um},
            {"dx_um", e->well.dx_um},
            {"interaction",
             {{"delta_n2", e->interaction.delta_n2},
              {"w_i_um", e->interaction.w_i_um},
              {"dxi_um", e->interaction.dxi_um}}}};
  }
  const auto& f = std::get<FourCoreFiberSpec>(spec);
  return {{"type", "four_core"},
          {"delta_n", f.delta_n},
          {"a_um", f.a_um},
          {"w_um", f.w_um},
          {"w_c_um", f.w_c_um}};
}

}  // namespace

void RunConfig::validate() const {
  make_grid();
  pairtunnel::validate(structure);
  bpm_config().validate();
  if (cm.params) cm.params->validate();
  if (!(cm.dz_mm > 0.0) || !std::isfinite(cm.dz_mm)) throw ConfigError("cm.dz_mm must be positive");
  if (output.snapshot_every_mm && !(*output.snapshot_every_mm > 0.0))
    throw ConfigError("output.snapshot_every_mm must be positive");
  if (!(modes.dtau_um > 0.0) || !(modes.tol > 0.0) || modes.max_iters < 200)
    throw ConfigError("modes: dtau_um and tol must be positive, max_iters >= 200");
  classifier.validate();
}

Grid2D RunConfig::make_grid() const { return Grid2D(grid.n, grid.half_width_um); }

BpmConfig RunConfig::bpm_config() const {
  BpmConfig b;
  b.dz_um = propagation.dz_um;
  b.z_max_um = propagation.z_max_mm * 1e3;
  b.sample_every_um = propagation.sample_every_mm * 1e3;
  if (output.snapshot_every_mm) b.snapshot_every_um = *output.snapshot_every_mm * 1e3;
  return b;
}

RunConfig parse_run_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  check_keys(j, "config",
             {"grid", "physics", "structure", "propagation", "cm", "output", "modes", "classifier"});
  RunConfig cfg;
  if (j.contains("grid")) {
    const json& g = j.at("grid");
    check_keys(g, "grid", {"n", "half_width_um"});
    if (g.contains("n") && !g.at("n").is_number_integer()) throw ConfigError("grid.n must be an integer");
    read(g, "n", cfg.grid.n, "grid");
    read_number(g, "half_width_um", cfg.grid.half_width_um, "grid");
  }
  if (j.contains("physics")) {
    const json& p = j.at("physics");
    check_keys(p, "physics", {"lambda_um", "n_s"});
    double lambda = cfg.physics.lambda();
    double n_s = cfg.physics.n_s();
    read_number(p, "lambda_um", lambda, "physics");
    read_number(p, "n_s", n_s, "physics");
    cfg.physics = PhysicsConstants(lambda, n_s);
  }
  if (j.contains("structure")) cfg.structure = parse_structure(j.at("structure"));
  if (j.contains("propagation")) {
    const json& p = j.at("propagation");
    check_keys(p, "propagation", {"dz_um", "z_max_mm", "sample_every_mm", "absorber"});
    read_number(p, "dz_um", cfg.propagation.dz_um, "propagation");
    read_number(p, "z_max_mm", cfg.propagation.z_max_mm, "propagation");
    read_number(p, "sample_every_mm", cfg.propagation.sample_every_mm, "propagation");
    read(p, "absorber", cfg.propagation.absorber, "propagation");
  }
  if (j.contains("cm")) {
    const json& c = j.at("cm");
    check_keys(c, "cm", {"params", "variant", "scheme", "dz_mm"});
    if (c.contains("params")) {
      const json& p = c.at("params");
      if (p.is_string()) {
        if (p.get<std::string>() != "estimate")
          throw ConfigError("cm.params must be an object or \"estimate\"");
        cfg.cm.params.reset();
      } else {
        cfg.cm.params = parse_params(p);
      }
    }
    if (c.contains("variant")) {
      if (!c.at("variant").is_string()) throw ConfigError("cm.variant must be a string");
      cfg.cm.variant = parse_variant(c.at("variant").get<std::string>());
    }
    if (c.contains("scheme")) {
      if (!c.at("scheme").is_string()) throw ConfigError("cm.scheme must be a string");
      cfg.cm.scheme = parse_scheme(c.at("scheme").get<std::string>());
    }
    read_number(c, "dz_mm", cfg.cm.dz_mm, "cm");
  }
  if (j.contains("output")) {
    const json& o = j.at("output");
    check_keys(o, "output", {"trace_path", "snapshot_every_mm", "snapshot_dir", "pgm"});
    read(o, "trace_path", cfg.output.trace_path, "output");
    if (o.contains("snapshot_every_mm")) {
      if (o.at("snapshot_every_mm").is_null()) {
        cfg.output.snapshot_every_mm.reset();
      } else {
        double v = 0.0;
        read_number(o, "snapshot_every_mm", v, "output");
        cfg.output.snapshot_every_mm = v;
      }
    }
    read(o, "snapshot_dir", cfg.output.snapshot_dir, "output");
    read(o, "pgm", cfg.output.pgm, "output");
  }
  if (j.contains("modes")) {
    const json& m = j.at("modes");
    check_keys(m, "modes", {"dtau_um", "tol", "max_iters"});
    read_number(m, "dtau_um", cfg.modes.dtau_um, "modes");
    read_number(m, "tol", cfg.modes.tol, "modes");
    read(m, "max_iters", cfg.modes.max_iters, "modes");
  }
  if (j.contains("classifier")) {
    const json& c = j.at("classifier");
    auto& t = cfg.classifier;
    check_keys(c, "classifier",
               {"return_fraction", "min_tolerance", "prominence", "fragmented_maxima",
                "fragmented_p2", "suppressed_p_right", "pair_p2", "pair_p_right", "rabi_p2_low",
                "rabi_p2_high", "rabi_p_right"});
    read_number(c, "return_fraction", t.return_fraction, "classifier");
    read_number(c, "min_tolerance", t.min_tolerance, "classifier");
    read_number(c, "prominence", t.prominence, "classifier");
    read(c, "fragmented_maxima", t.fragmented_maxima, "classifier");
    read_number(c, "fragmented_p2", t.fragmented_p2, "classifier");
    read_number(c, "suppressed_p_right", t.suppressed_p_right, "classifier");
    read_number(c, "pair_p2", t.pair_p2, "classifier");
    read_number(c, "pair_p_right", t.pair_p_right, "classifier");
    read_number(c, "rabi_p2_low", t.rabi_p2_low, "classifier");
    read_number(c, "rabi_p2_high", t.rabi_p2_high, "classifier");
    read_number(c, "rabi_p_right", t.rabi_p_right, "classifier");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string dump_run_config(const RunConfig& cfg) {
  json j;
  j["grid"] = {{"n", cfg.grid.n}, {"half_width_um", cfg.grid.half_width_um}};
  j["physics"] = {{"lambda_um", cfg.physics.lambda()}, {"n_s", cfg.physics.n_s()}};
  j["structure"] = structure_json(cfg.structure);
  j["propagation"] = {{"dz_um", cfg.propagation.dz_um},
                      {"z_max_mm", cfg.propagation.z_max_mm},
                      {"sample_every_mm", cfg.propagation.sample_every_mm},
                      {"absorber", cfg.propagation.absorber}};
  json cm{{"variant", std::string(to_string(cfg.cm.variant))},
          {"scheme", std::string(to_string(cfg.cm.scheme))},
          {"dz_mm", cfg.cm.dz_mm}};
  if (cfg.cm.params) {
    const auto& p = *cfg.cm.params;
    cm["params"] = {{"kappa1", p.kappa1}, {"kappa2", p.kappa2}, {"kappa3", p.kappa3},
                    {"delta1", p.delta1}, {"delta2", p.delta2}};
  } else {
    cm["params"] = "estimate";
  }
  j["cm"] = cm;
  j["output"] = {{"trace_path", cfg.output.trace_path},
                 {"snapshot_every_mm", cfg.output.snapshot_every_mm
                                           ? json(*cfg.output.snapshot_every_mm)
                                           : json(nullptr)},
                 {"snapshot_dir", cfg.output.snapshot_dir},
                 {"pgm", cfg.output.pgm}};
  j["modes"] = {{"dtau_um", cfg.modes.dtau_um},
                {"tol", cfg.modes.tol},
                {"max_iters", cfg.modes.max_iters}};
  const auto& t = cfg.classifier;
  j["classifier"] = {{"return_fraction", t.return_fraction},
                     {"min_tolerance", t.min_tolerance},
                     {"prominence", t.prominence},
                     {"fragmented_maxima", t.fragmented_maxima},
                     {"fragmented_p2", t.fragmented_p2},
                     {"suppressed_p_right", t.suppressed_p_right},
                     {"pair_p2", t.pair_p2},
                     {"pair_p_right", t.pair_p_right},
                     {"rabi_p2_low", t.rabi_p2_low},
                     {"rabi_p2_high", t.rabi_p2_high},
                     {"rabi_p_right", t.rabi_p_right}};
  return j.dump(2);
}

void save_run_config(const RunConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << dump_run_config(cfg) << '\n';
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace pairtunnel
