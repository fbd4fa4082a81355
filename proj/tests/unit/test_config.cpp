#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pairtunnel/config.hpp"
#include "pairtunnel/errors.hpp"

using namespace pairtunnel;
namespace fs = std::filesystem;

TEST_CASE("empty object gives the defaults") {
  const RunConfig c = parse_run_config("{}");
  CHECK(c.grid.n == 512);
  CHECK(c.grid.half_width_um == 15.0);
  CHECK(c.physics.lambda() == 0.633);
  CHECK(c.physics.n_s() == 1.45);
  CHECK(c.physics.lambda_bar() == doctest::Approx(0.100744).epsilon(1e-5));
  CHECK(c.propagation.dz_um == 1.0);
  CHECK(c.propagation.z_max_mm == 50.0);
  CHECK_FALSE(c.cm.params.has_value());
  CHECK(c.cm.scheme == CmScheme::Gauss4);
  const auto* e = std::get_if<ErfStructure>(&c.structure);
  REQUIRE(e != nullptr);
  CHECK(e->well.delta_n1 == 0.003);
  CHECK(e->well.a_um == 4.5);
  CHECK(e->interaction.w_i_um == 0.5);
  CHECK(e->interaction.dxi_um == 0.2);
}

TEST_CASE("full configuration") {
  const RunConfig c = parse_run_config(R"({
    "grid": {"n": 128, "half_width_um": 12},
    "physics": {"lambda_um": 0.8, "n_s": 1.5},
    "structure": {"type": "four_core", "delta_n": 0.004, "a_um": 3.0, "w_um": 2.0, "w_c_um": 1.0},
    "propagation": {"dz_um": 2, "z_max_mm": 10, "sample_every_mm": 0.1, "absorber": true},
    "cm": {"params": {"kappa1": 0.3, "kappa2": 0.1, "kappa3": 0.5, "delta1": 2, "delta2": 15},
           "variant": "fermionized", "scheme": "rk4", "dz_mm": 0.02},
    "output": {"trace_path": "t.csv", "snapshot_every_mm": 1, "snapshot_dir": "snap", "pgm": false},
    "modes": {"dtau_um": 1.5, "tol": 1e-8, "max_iters": 5000},
    "classifier": {"pair_p2": 0.7, "fragmented_maxima": 3}
  })");
  CHECK(c.grid.n == 128);
  CHECK(c.physics.lambda() == 0.8);
  const auto& f = std::get<FourCoreFiberSpec>(c.structure);
  CHECK(f.w_c_um == 1.0);
  CHECK(c.propagation.absorber);
  REQUIRE(c.cm.params.has_value());
  CHECK(c.cm.params->delta2 == 15.0);
  CHECK(c.cm.variant == CmVariant::Fermionized);
  CHECK(c.cm.scheme == CmScheme::Rk4);
  CHECK(*c.output.snapshot_every_mm == 1.0);
  CHECK_FALSE(c.output.pgm);
  CHECK(c.modes.max_iters == 5000);
  CHECK(c.classifier.pair_p2 == 0.7);
  CHECK(c.classifier.fragmented_maxima == 3);

  const auto b = c.bpm_config();
  CHECK(b.dz_um == 2.0);
  CHECK(b.z_max_um == 10000.0);
  CHECK(b.sample_every_um == doctest::Approx(100.0));
  CHECK(*b.snapshot_every_um == 1000.0);

  const RunConfig again = parse_run_config(dump_run_config(c));
  CHECK(dump_run_config(again) == dump_run_config(c));
}

TEST_CASE("erf structure and estimate keyword") {
  const RunConfig c = parse_run_config(R"({
    "structure": {"type": "erf_double_well", "delta_n1": 0.002, "a_um": 5, "w_um": 2.5, "dx_um": 0.8,
                  "interaction": {"delta_n2": 0.0015}},
    "cm": {"params": "estimate"}})");
  const auto& e = std::get<ErfStructure>(c.structure);
  CHECK(e.well.delta_n1 == 0.002);
  CHECK(e.interaction.delta_n2 == 0.0015);
  CHECK(e.interaction.w_i_um == 0.5);
  CHECK_FALSE(c.cm.params.has_value());
}

TEST_CASE("strict parsing") {
  const char* bad[] = {
      R"({"grd": {}})",
      R"({"grid": {"n": 64, "size": 3}})",
      R"({"grid": {"n": 64.5}})",
      R"({"grid": {"n": 63}})",
      R"({"grid": {"half_width_um": "wide"}})",
      R"({"physics": {"lambda_um": -1}})",
      R"({"structure": {"type": "hexagon"}})",
      R"({"structure": {"delta_n": 0.005}})",
      R"({"structure": {"type": "four_core", "w_c_um": 9}})",
      R"({"structure": {"type": "four_core", "delta_n1": 0.003}})",
      R"({"structure": {"type": "erf_double_well", "interaction": {"delta_n2": -1}}})",
      R"({"structure": {"type": "erf_double_well", "interaction": {"strength": 1}}})",
      R"({"propagation": {"dz_um": 3, "sample_every_mm": 0.05}})",
      R"({"propagation": {"z_max_mm": 0}})",
      R"({"propagation": {"absorber": 1}})",
      R"({"cm": {"params": "guess"}})",
      R"({"cm": {"params": {"kappa1": -1}}})",
      R"({"cm": {"params": {"kappa4": 1}}})",
      R"({"cm": {"variant": "half"}})",
      R"({"cm": {"scheme": 4}})",
      R"({"cm": {"dz_mm": 0}})",
      R"({"output": {"snapshot_every_mm": -1}})",
      R"({"output": {"format": "png"}})",
      R"({"modes": {"max_iters": 10}})",
      R"({"classifier": {"return_fraction": 2}})",
      R"({"classifier": {"threshold": 2}})",
      R"([1, 2])",
      R"({"grid": )",
  };
  for (const char* text : bad) {
    CAPTURE(text);
    CHECK_THROWS_AS(parse_run_config(text), ConfigError);
  }
}

TEST_CASE("config files") {
  const auto dir = fs::temp_directory_path() / "pairtunnel_tests";
  fs::create_directories(dir);
  RunConfig c;
  c.grid.n = 64;
  c.structure = FourCoreFiberSpec{0.005, 3.5, 2.5, 0.6};
  save_run_config(c, dir / "cfg.json");
  const RunConfig back = load_run_config(dir / "cfg.json");
  CHECK(back.grid.n == 64);
  CHECK(std::get<FourCoreFiberSpec>(back.structure).w_c_um == 0.6);
  CHECK_THROWS_AS(load_run_config(dir / "missing.json"), IoError);
  std::ofstream(dir / "broken.json") << "{\"grid\": 1}";
  CHECK_THROWS_AS(load_run_config(dir / "broken.json"), ConfigError);
}
