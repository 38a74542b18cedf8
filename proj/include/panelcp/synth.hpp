#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "panelcp/panel.hpp"

namespace panelcp::synth {

struct MeanBreak {
  int index = 0;               // last point of the left segment
  std::vector<double> jumps;   // one per series
};

struct VarianceBreak {
  int index = 0;
  std::vector<double> multipliers;  // sd multiplier per series, > 0
};

/// Piecewise-constant mean and piecewise-constant sd around equicorrelated
/// Gaussian noise: e_jt = sd_jt * (sqrt(rho) z_t + sqrt(1 - rho) u_jt).
/// Jumps and multipliers accumulate from break to break.
struct PlantedPanelSpec {
  std::size_t n = 4;
  std::size_t T = 120;
  std::vector<MeanBreak> mean_breaks;
  std::vector<VarianceBreak> variance_breaks;
  double noise_sd = 1.0;
  double rho = 0.0;
  std::uint64_t seed = 0;
  int min_seg = 5;

  /// Throws ConfigError on any violated invariant.
  void validate() const;
};

struct PlantedPanel {
  Panel panel;
  std::vector<int> mean_truth;
  std::vector<int> variance_truth;
};

PlantedPanel gen_piecewise_panel(const PlantedPanelSpec& spec);

/// Reads the key-value suite format:
///   # comment
///   n = 16
///   T = 120
///   noise_sd = 1
///   rho = 0.3
///   seed = 7
///   min_seg = 5
///   mean_break = 40 : 3            (one value is broadcast to every series)
///   variance_break = 60 : 3 3 1 1
/// Throws ParseError with the offending line number.
PlantedPanelSpec parse_spec(std::istream& in);
PlantedPanelSpec load_spec(const std::string& path);

struct BruteForceResult {
  int b = 0;
  std::size_t m = 1;
  double value = 0.0;
};

/// Exhaustive Double CUSUM maximization with direct double-loop sums. Ties
/// resolve to the smallest b, then the smallest m. Throws InstanceTooLarge
/// when n * (e - s)^2 exceeds `max_work`.
BruteForceResult brute_force_single_change(const Panel& panel, int s, int e,
                                           std::span<const double> scales, double phi,
                                           double max_work = 1e7);

/// Direct CUSUM of one series, independent of the library kernel.
double naive_cusum(std::span<const double> x, int s, int b, int e, double sigma);

struct DetectionScore {
  std::size_t matched = 0;
  std::size_t unmatched_true = 0;
  std::size_t spurious = 0;
  std::vector<int> localization_errors;  // |detected - true| per matched pair

  bool exact_recovery() const { return unmatched_true == 0 && spurious == 0; }
};

/// Greedy nearest matching within `tolerance`: repeatedly pairs the closest
/// remaining (truth, detection) couple, ties to the smaller truth then the
/// smaller detection.
DetectionScore score_detection(std::vector<int> truth, std::vector<int> detected, int tolerance);

}  // namespace panelcp::synth
