#pragma once

#include <span>
#include <vector>

#include "panelcp/panel.hpp"
#include "panelcp/segmentation.hpp"

namespace panelcp {

/// Dyadic Haar scales {-1, ..., -J}.
struct WaveletScaleSet {
  std::vector<int> scales{-1, -2};

  /// Each scale must be in -1 .. -(floor(log2 T) - 1). Throws ScaleTooCoarse
  /// or ConfigError.
  void validate(std::size_t T) const;
};

/// Squared Haar detail coefficients at dyadic scale -k, one per time point:
///   d_t = ( 2^{-k/2} * (sum x_{t..t+h-1} - sum x_{t+h..t+2h-1}) )^2,  h = 2^{k-1}
/// Windows running past the end are completed by half-sample symmetric
/// reflection (x_{T+1} = x_T, x_{T+2} = x_{T-1}, ...).
/// Throws ScaleTooCoarse when 2^k > T, ConfigError for a non-negative scale.
std::vector<double> haar_periodogram(std::span<const double> series, int scale);

/// Panel of n * J periodogram series, ordered series-major then by scale.
/// Ids are "<series>@<scale>".
Panel periodogram_panel(const Panel& panel, const WaveletScaleSet& scales);

/// Subtracts each series' mean over every segment of `mean_result`.
Panel mean_stabilize(const Panel& panel, const DetectionResult& mean_result);

/// Variance change points: detect_mean_changes on the periodogram panel of
/// `panel` (which should already be mean-stabilized), relabelled as
/// variance changes. Time labels come from `panel`.
DetectionResult detect_variance_changes(const Panel& panel, const WaveletScaleSet& scales,
                                        double threshold, const SegmentationConfig& config);

}  // namespace panelcp
