#include "pairtunnel/regime.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pairtunnel/errors.hpp"

namespace pairtunnel {

std::string_view to_string(Regime regime) {
  switch (regime) {
    case Regime::Rabi: return "RABI";
    case Regime::Pair: return "PAIR";
    case Regime::Suppressed: return "SUPPRESSED";
    case Regime::Fragmented: return "FRAGMENTED";
    case Regime::Mixed: return "MIXED";
    case Regime::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

Regime parse_regime(std::string_view name) {
  for (Regime r : {Regime::Rabi, Regime::Pair, Regime::Suppressed, Regime::Fragmented,
                   Regime::Mixed, Regime::Unknown})
    if (name == to_string(r)) return r;
  throw ConfigError("unknown regime '" + std::string(name) + "'");
}

void ClassifierThresholds::validate() const {
  if (!(return_fraction > 0.0 && return_fraction <= 1.0))
    throw ConfigError("return_fraction must lie in (0, 1]");
  for (double v : {min_tolerance, prominence, fragmented_p2, suppressed_p_right,
                   pair_p2, pair_p_right, rabi_p2_low, rabi_p2_high, rabi_p_right})
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("classifier thresholds must be finite and >= 0");
  if (fragmented_maxima < 1) throw ConfigError("fragmented_maxima must be >= 1");
  if (rabi_p2_low > rabi_p2_high) throw ConfigError("rabi p2 band is empty");
}

namespace {

// Interior local maxima of p[begin, end) whose topographic prominence within
// the window reaches `threshold`. Plateaus count once.
int count_prominent_maxima(const std::vector<double>& p, std::size_t begin, std::size_t end,
                           double threshold) {
  int count = 0;
  std::size_t i = begin + 1;
  while (i + 1 < end) {
    if (!(p[i] > p[i - 1])) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < end && p[j + 1] == p[i]) ++j;
    if (j + 1 >= end || !(p[j + 1] < p[i])) {
      i = j + 1;
      continue;
    }
    double left_min = p[i];
    for (std::size_t k = i; k-- > begin;) {
      if (p[k] > p[i]) break;
      left_min = std::min(left_min, p[k]);
    }
    double right_min = p[i];
    for (std::size_t k = j + 1; k < end; ++k) {
      if (p[k] > p[i]) break;
      right_min = std::min(right_min, p[k]);
    }
    if (p[i] - std::max(left_min, right_min) >= threshold) ++count;
    i = j + 1;
  }
  return count;
}

}  // namespace

RegimeLabel classify_regime(const TunnelingTrace& trace, const ClassifierThresholds& th) {
  th.validate();
  const std::size_t n = trace.size();
  if (n < 3 || trace.p_right.size() != n || trace.p_pair.size() != n)
    throw NumericalError("trace too short or inconsistent for classification");
  for (std::size_t k = 0; k < n; ++k)
    if (!std::isfinite(trace.p_right[k]) || !std::isfinite(trace.p_pair[k]) ||
        !std::isfinite(trace.z_mm[k]))
      throw NumericalError("trace contains non-finite values");

  const auto& pr = trace.p_right;
  const auto& p2 = trace.p_pair;
  RegimeLabel out;
  out.min_p_right = *std::min_element(pr.begin(), pr.end());
  out.min_p2 = *std::min_element(p2.begin(), p2.end());

  // First slow cycle: first approach to the global minimum, then the first
  // excursion back above the return level; its peak closes the cycle. An
  // excursion still open at the end of the trace closes at the last sample.
  std::size_t at_min = 0;
  while (pr[at_min] > out.min_p_right + th.min_tolerance) ++at_min;
  const double level = out.min_p_right + th.return_fraction * (pr.front() - out.min_p_right);
  std::size_t rise = at_min;
  while (rise < n && pr[rise] < level) ++rise;
  std::size_t cycle_end = n;  // exclusive
  if (rise < n) {
    std::size_t fall = rise;
    while (fall < n && pr[fall] >= level) ++fall;
    const auto peak = std::max_element(pr.begin() + static_cast<std::ptrdiff_t>(rise),
                                       pr.begin() + static_cast<std::ptrdiff_t>(fall));
    const auto peak_index = static_cast<std::size_t>(peak - pr.begin());
    out.full_cycle = true;
    out.slow_period_mm = trace.z_mm[peak_index] - trace.z_mm.front();
    cycle_end = peak_index + 1;
  }

  out.min_p2_first_cycle =
      *std::min_element(p2.begin(), p2.begin() + static_cast<std::ptrdiff_t>(cycle_end));
  out.fast_osc_count = count_prominent_maxima(pr, 0, cycle_end, th.prominence);

  const bool fragmented =
      out.fast_osc_count >= th.fragmented_maxima && out.min_p2 < th.fragmented_p2;
  if (!out.full_cycle) {
    out.regime = fragmented ? Regime::Fragmented : Regime::Unknown;
    return out;
  }
  if (fragmented)
    out.regime = Regime::Fragmented;
  else if (out.min_p_right >= th.suppressed_p_right)
    out.regime = Regime::Suppressed;
  else if (out.min_p2_first_cycle >= th.pair_p2 && out.min_p_right < th.pair_p_right)
    out.regime = Regime::Pair;
  else if (out.min_p2_first_cycle >= th.rabi_p2_low && out.min_p2_first_cycle <= th.rabi_p2_high &&
           out.min_p_right < th.rabi_p_right)
    out.regime = Regime::Rabi;
  else
    out.regime = Regime::Mixed;
  return out;
}

}  // namespace pairtunnel
