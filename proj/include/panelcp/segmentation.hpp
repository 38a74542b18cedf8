#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "panelcp/cusum.hpp"
#include "panelcp/double_cusum.hpp"
#include "panelcp/panel.hpp"

namespace panelcp {

enum class ChangeKind { Mean, Variance };

std::string_view to_string(ChangeKind k);

struct ChangePoint {
  int time_label = 0;   // label at `index`, the last point of the left segment
  int index = 0;        // 1-based split b
  ChangeKind kind = ChangeKind::Mean;
  double dc_value = 0.0;
  double threshold = 0.0;
  int seg_start = 1;    // segment [seg_start, seg_end] in which it was found
  int seg_end = 2;
  std::size_t m_star = 1;

  friend bool operator==(const ChangePoint&, const ChangePoint&) = default;
};

struct Segment {
  int start = 1;
  int end = 1;

  friend bool operator==(const Segment&, const Segment&) = default;
};

struct SegmentationConfig {
  DcConfig dc;
  int min_seg = 5;
  ScaleMethod scale = ScaleMethod::MadDiff;
  /// Re-estimate each series' scale on every segment the recursion visits
  /// instead of once on the full panel.
  bool rescale_per_segment = false;

  void validate() const;
};

struct DetectionResult {
  std::vector<ChangePoint> change_points;  // sorted by index
  std::vector<Segment> segments;           // partition of 1..T
  SegmentationConfig config;
  double threshold = 0.0;
  std::vector<double> scales;
  std::uint64_t panel_fingerprint = 0;

  std::vector<int> indices() const;
  std::vector<int> years() const;
};

/// Binary segmentation on Double CUSUM maxima. On each segment [s, e] the DC
/// maximizer (b*, m*) is accepted when its value exceeds `threshold` and both
/// children [s, b*] and [b* + 1, e] hold at least `min_seg` points; accepted
/// children are searched in turn. Scales are estimated once on the full
/// panel with `config.scale`.
DetectionResult detect_mean_changes(const Panel& panel, double threshold,
                                    const SegmentationConfig& config);

/// Same recursion with caller-supplied scales (one per series).
DetectionResult detect_mean_changes(const Panel& panel, double threshold,
                                    const SegmentationConfig& config,
                                    std::vector<double> scales);

/// Segment means per series: result[j][k] is the mean of series j over
/// segment k. Throws FingerprintMismatch if `result` came from another panel.
std::vector<std::vector<double>> segment_means(const Panel& panel, const DetectionResult& result);

/// Scales of every series over [s, e]; degenerate series get 1 silently.
std::vector<double> segment_scales(const Panel& panel, int s, int e, ScaleMethod method);

/// Segments implied by sorted split indices over 1..T.
std::vector<Segment> segments_from_splits(const std::vector<int>& splits, int T);

}  // namespace panelcp
