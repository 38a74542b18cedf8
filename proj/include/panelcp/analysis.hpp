#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "panelcp/panel.hpp"
#include "panelcp/segmentation.hpp"
#include "panelcp/threshold.hpp"
#include "panelcp/variance.hpp"

namespace panelcp {

/// How thresholds are produced when none are supplied.
struct ThresholdRule {
  ThresholdMethod method = ThresholdMethod::Bootstrap;
  double alpha = 0.05;
  std::size_t n_reps = 500;
  std::size_t n_factors = 0;  // 0 = eigenvalue-ratio rule
  double C = kDefaultThresholdConstant;
  double pilot_C = 4.0;

  void validate() const;
};

struct AnalysisConfig {
  SegmentationConfig segmentation;
  ThresholdRule threshold;
  std::uint64_t seed = 1;
  WaveletScaleSet scales;
  bool detect_variance = true;
  /// Scale estimator for the periodogram series of the variance pass.
  ScaleMethod variance_scale = ScaleMethod::SdDiff;
};

struct AnalysisThresholds {
  ThresholdSpec mean;
  std::optional<ThresholdSpec> variance;

  friend bool operator==(const AnalysisThresholds&, const AnalysisThresholds&) = default;
};

struct Analysis {
  std::string label;
  Panel panel;
  AnalysisThresholds thresholds;
  DetectionResult mean;
  std::optional<DetectionResult> variance;
};

/// Seed for an independent random stream derived from a run seed; stream 0
/// is the seed itself.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Segmentation settings of the variance pass: per-segment scales with
/// `variance_scale`, and `min_seg` widened by the span of the coarsest
/// periodogram window less one.
SegmentationConfig variance_segmentation(const AnalysisConfig& config);

/// Panel minus its pilot-segment means; with `seg.rescale_per_segment` each
/// pilot segment is also divided by its own scale estimate.
Panel pilot_residuals(const Panel& panel, const DetectionResult& pilot,
                      const SegmentationConfig& seg);

/// Threshold for one panel under `rule`; bootstrap runs use `seed`.
ThresholdSpec make_threshold(const Panel& panel, const SegmentationConfig& seg,
                             const ThresholdRule& rule, std::uint64_t seed);

/// Thresholds `analyze` derives for `panel` when none are supplied. The
/// variance threshold needs the mean pass, which is run here too.
AnalysisThresholds calibrate_analysis(const Panel& panel, const AnalysisConfig& config);

/// Mean detection, then (optionally) variance detection on the periodogram
/// panel of the mean-stabilized series. Thresholds come from `given` when
/// supplied, otherwise from `config.threshold`: the mean threshold uses
/// `config.seed`, the variance threshold `derive_seed(config.seed, 1)` and is
/// calibrated on the periodogram panel itself.
Analysis analyze(std::string label, const Panel& panel, const AnalysisConfig& config,
                 const std::optional<AnalysisThresholds>& given = std::nullopt);

}  // namespace panelcp
