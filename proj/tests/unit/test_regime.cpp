#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

#include "pairtunnel/coupled_mode.hpp"
#include "pairtunnel/errors.hpp"
#include "pairtunnel/presets.hpp"
#include "pairtunnel/regime.hpp"

using namespace pairtunnel;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TunnelingTrace synthetic(double z_max, double dz, const std::function<double(double)>& pr,
                         const std::function<double(double)>& p2) {
  TunnelingTrace t;
  const auto steps = static_cast<int>(std::lround(z_max / dz));
  for (int k = 0; k <= steps; ++k) {
    const double z = k * dz;
    t.append(z, pr(z), p2(z), 1.0, 0.0);
  }
  return t;
}

TunnelingTrace decimate(const TunnelingTrace& t, std::size_t every) {
  TunnelingTrace out;
  for (std::size_t k = 0; k < t.size(); k += every)
    out.append(t.z_mm[k], t.p_right[k], t.p_pair[k], t.norm[k], t.sym_err[k]);
  return out;
}

TunnelingTrace curve(int c, double dz = 0.01) {
  return cm_integrate(fig3_params(c), CmVariant::Full, c >= 3 ? 100.0 : 50.0, dz).trace;
}

}  // namespace

TEST_CASE("closed-form Rabi trace is RABI") {
  const auto t = synthetic(40.0, 0.01, [](double z) { return cm_analytic_rabi(0.212, z).p_right; },
                           [](double z) { return cm_analytic_rabi(0.212, z).p_pair; });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Rabi);
  CHECK(l.full_cycle);
  CHECK(l.min_p_right < 1e-6);
  CHECK(l.min_p2 == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(l.slow_period_mm == doctest::Approx(std::numbers::pi / 0.212).epsilon(1e-3));
  CHECK(l.fast_osc_count == 0);
}

TEST_CASE("RABI is judged on the first slow cycle") {
  // pair probability drifts below the Rabi band only after the first cycle
  const auto t = synthetic(60.0, 0.01, [](double z) { return cm_analytic_rabi(0.212, z).p_right; },
                           [](double z) { return cm_analytic_rabi(0.212, z).p_pair - (z > 20.0 ? 0.1 : 0.0); });
  const auto l = classify_regime(t);
  CHECK(l.min_p2 == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(l.min_p2_first_cycle == doctest::Approx(0.5).epsilon(1e-4));
  CHECK(l.regime == Regime::Rabi);
}

TEST_CASE("shallow oscillation is SUPPRESSED") {
  const auto t = synthetic(60.0, 0.05, [](double z) { return 0.75 + 0.25 * std::cos(kTwoPi * z / 30.0); },
                           [](double) { return 0.9; });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Suppressed);
  CHECK(l.min_p_right == doctest::Approx(0.5));
  CHECK(l.slow_period_mm == doctest::Approx(30.0).epsilon(1e-3));
}

TEST_CASE("full transfer with high pair probability is PAIR") {
  const auto t = synthetic(60.0, 0.05, [](double z) { return 0.5 + 0.5 * std::cos(kTwoPi * z / 25.0); },
                           [](double z) { return 0.9 + 0.1 * std::cos(2 * kTwoPi * z / 25.0); });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Pair);
  CHECK(l.min_p2_first_cycle == doctest::Approx(0.8).epsilon(1e-3));
}

TEST_CASE("fast ripple with low pair probability is FRAGMENTED") {
  const auto t = synthetic(
      60.0, 0.01, [](double z) { return 0.5 + 0.4 * std::cos(kTwoPi * z / 20.0) + 0.1 * std::cos(kTwoPi * z / 2.0); },
      [](double z) { return 0.7 + 0.3 * std::cos(kTwoPi * z / 2.0); });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Fragmented);
  CHECK(l.fast_osc_count >= 4);
}

TEST_CASE("partial pair correlation is MIXED") {
  const auto t = synthetic(60.0, 0.05, [](double z) { return 0.5 + 0.5 * std::cos(kTwoPi * z / 25.0); },
                           [](double z) { return 0.8 + 0.2 * std::cos(2 * kTwoPi * z / 25.0); });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Mixed);
}

TEST_CASE("traces without a closed cycle are UNKNOWN") {
  const auto t = synthetic(5.0, 0.01, [](double z) { return cm_analytic_rabi(0.212, z).p_right; },
                           [](double z) { return cm_analytic_rabi(0.212, z).p_pair; });
  const auto l = classify_regime(t);
  CHECK(l.regime == Regime::Unknown);
  CHECK_FALSE(l.full_cycle);
  CHECK(l.slow_period_mm == 0.0);
}

TEST_CASE("coupled-mode presets") {
  const auto l1 = classify_regime(curve(1));
  CHECK(l1.regime == Regime::Rabi);
  CHECK(l1.min_p2 == doctest::Approx(0.5).epsilon(0.04));
  CHECK(classify_regime(curve(2)).regime == Regime::Pair);
  CHECK(classify_regime(curve(3)).regime == Regime::Pair);
  const auto l4 = classify_regime(curve(4));
  CHECK(l4.regime == Regime::Fragmented);
  CHECK(l4.fast_osc_count >= 5);
}

TEST_CASE("labels survive resampling") {
  for (int c = 1; c <= 4; ++c) {
    const auto coarse = curve(c, 0.02);
    const auto fine = curve(c, 0.01);
    const auto a = classify_regime(coarse), b = classify_regime(fine), d = classify_regime(decimate(fine, 4));
    CHECK(a.regime == b.regime);
    CHECK(d.regime == b.regime);
    CHECK(a.slow_period_mm == doctest::Approx(b.slow_period_mm).epsilon(0.01));
  }
}

TEST_CASE("thresholds come from the configuration") {
  const auto t = synthetic(60.0, 0.05, [](double z) { return 0.75 + 0.25 * std::cos(kTwoPi * z / 30.0); },
                           [](double) { return 0.9; });
  ClassifierThresholds th;
  th.suppressed_p_right = 0.6;
  th.pair_p_right = 0.55;
  CHECK(classify_regime(t, th).regime == Regime::Pair);
  th.return_fraction = 0.0;
  CHECK_THROWS_AS(th.validate(), ConfigError);
  ClassifierThresholds bad;
  bad.rabi_p2_low = 0.6;
  CHECK_THROWS_AS(classify_regime(t, bad), ConfigError);
}

TEST_CASE("malformed traces") {
  TunnelingTrace t;
  t.append(0.0, 1.0, 1.0, 1.0, 0.0);
  t.append(0.1, 0.9, 1.0, 1.0, 0.0);
  CHECK_THROWS_AS(classify_regime(t), NumericalError);
  t.append(0.2, std::nan(""), 1.0, 1.0, 0.0);
  CHECK_THROWS_AS(classify_regime(t), NumericalError);
}

TEST_CASE("regime names") {
  for (auto r : {Regime::Rabi, Regime::Pair, Regime::Suppressed, Regime::Fragmented, Regime::Mixed, Regime::Unknown})
    CHECK(parse_regime(to_string(r)) == r);
  CHECK(to_string(Regime::Pair) == "PAIR");
  CHECK_THROWS_AS(parse_regime("BOGUS"), ConfigError);
}
