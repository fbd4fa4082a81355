#pragma once

// Rule-based labelling of tunneling traces.

#include <string>
#include <string_view>

#include "pairtunnel/bpm.hpp"

namespace pairtunnel {

enum class Regime { Rabi, Pair, Suppressed, Fragmented, Mixed, Unknown };

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

struct ClassifierThresholds {
  // The first slow cycle closes when p_R climbs back to
  // min + return_fraction * (p_R(0) - min).
  double return_fraction = 0.75;
  double min_tolerance = 0.02;  // first approach to the global p_R minimum
  double prominence = 0.02;     // local maxima of p_R below this are ignored
  int fragmented_maxima = 4;
  double fragmented_p2 = 0.6;
  double suppressed_p_right = 0.5;
  double pair_p2 = 0.7;
  double pair_p_right = 0.3;
  double rabi_p2_low = 0.45;
  double rabi_p2_high = 0.55;
  double rabi_p_right = 0.15;

  void validate() const;
};

struct RegimeLabel {
  Regime regime = Regime::Unknown;
  double min_p_right = 0.0;
  double min_p2 = 0.0;
  double min_p2_first_cycle = 0.0;
  // Prominent interior maxima of p_R in the first slow cycle, or in the whole
  // trace (a lower bound) when no cycle closes.
  int fast_osc_count = 0;
  double slow_period_mm = 0.0;  // 0 when no cycle closes
  bool full_cycle = false;
};

// Rules in order: FRAGMENTED, SUPPRESSED, PAIR, RABI, otherwise MIXED.
// PAIR and RABI look at p_2 over the first slow cycle, FRAGMENTED at the whole trace.
// Without a closed slow cycle only FRAGMENTED can be decided; otherwise UNKNOWN.
RegimeLabel classify_regime(const TunnelingTrace& trace, const ClassifierThresholds& th = {});

}  // namespace pairtunnel
