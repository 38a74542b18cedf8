#pragma once

#include <span>
#include <vector>

#include "panelcp/panel.hpp"

namespace panelcp {

struct DcConfig {
  /// Exponent of the leading weight {m(2n-m)/(2n)}^phi, in [0, 1].
  double phi = 0.5;

  void validate() const;
};

/// Maximizer of the Double CUSUM over one segment.
struct DcResult {
  int b_star = 0;            // 1-based split, s <= b_star < e
  std::size_t m_star = 1;    // number of leading series, 1..n
  double value = 0.0;
};

/// Double CUSUM at one split for one m:
///   {m(2n-m)/(2n)}^phi * ( mean of the top m  -  (1/(2n-m)) * sum of the rest )
/// `ordered` must be the |CUSUM| values sorted in descending order.
/// Throws UnsortedInput or BadM.
double dc_at(std::span<const double> ordered, std::size_t m, double phi);

/// Maximizes the DC over b in [s, e) and m in 1..n. Ties resolve to the
/// smallest b, then the smallest m. Splits are evaluated in parallel when
/// built with OpenMP; the result is identical to `dc_statistic_serial`.
DcResult dc_statistic(const Panel& panel, int s, int e, std::span<const double> scales,
                      const DcConfig& config);

/// Single-threaded reference for `dc_statistic`.
DcResult dc_statistic_serial(const Panel& panel, int s, int e, std::span<const double> scales,
                             const DcConfig& config);

/// Max over m of the DC at every split b = s..e-1 (entry k is b = s + k).
std::vector<double> dc_profile(const Panel& panel, int s, int e, std::span<const double> scales,
                               const DcConfig& config);

}  // namespace panelcp
