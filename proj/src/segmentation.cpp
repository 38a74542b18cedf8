#include "panelcp/segmentation.hpp"

#include <algorithm>
#include <cmath>

#include "panelcp/error.hpp"

namespace panelcp {

std::string_view to_string(ChangeKind k) {
  return k == ChangeKind::Mean ? "mean" : "variance";
}

void SegmentationConfig::validate() const {
  dc.validate();
  if (min_seg < 2) {
    throw Error(Errc::ConfigError, "min_seg must be at least 2, got " + std::to_string(min_seg));
  }
}

std::vector<int> DetectionResult::indices() const {
  std::vector<int> out;
  out.reserve(change_points.size());
  for (const auto& cp : change_points) out.push_back(cp.index);
  return out;
}

std::vector<int> DetectionResult::years() const {
  std::vector<int> out;
  out.reserve(change_points.size());
  for (const auto& cp : change_points) out.push_back(cp.time_label);
  return out;
}

std::vector<Segment> segments_from_splits(const std::vector<int>& splits, int T) {
  std::vector<Segment> segs;
  int start = 1;
  for (int b : splits) {
    segs.push_back({start, b});
    start = b + 1;
  }
  segs.push_back({start, T});
  return segs;
}

std::vector<double> segment_scales(const Panel& panel, int s, int e, ScaleMethod method) {
  std::vector<double> scales(panel.n(), 1.0);
  const auto len = static_cast<std::size_t>(e - s + 1);
  for (std::size_t j = 0; j < panel.n(); ++j) {
    try {
      scales[j] = estimate_scale(panel.row(j).subspan(static_cast<std::size_t>(s - 1), len), method).sigma;
    } catch (const Error& err) {
      if (err.code() != Errc::DegenerateSeries) throw;
    }
  }
  return scales;
}

namespace {

void segment_recursively(const Panel& panel, int s, int e, double threshold,
                         const SegmentationConfig& config, const std::vector<double>& scales,
                         std::vector<ChangePoint>& found) {
  // No admissible split leaves two children of min_seg points.
  if (e - s + 1 < 2 * config.min_seg) return;
  const DcResult best =
      config.rescale_per_segment
          ? dc_statistic(panel, s, e, segment_scales(panel, s, e, config.scale), config.dc)
          : dc_statistic(panel, s, e, scales, config.dc);
  if (!(best.value > threshold)) return;
  const int left_len = best.b_star - s + 1;
  const int right_len = e - best.b_star;
  if (left_len < config.min_seg || right_len < config.min_seg) return;

  found.push_back({panel.time_label(best.b_star), best.b_star, ChangeKind::Mean, best.value,
                   threshold, s, e, best.m_star});
  segment_recursively(panel, s, best.b_star, threshold, config, scales, found);
  segment_recursively(panel, best.b_star + 1, e, threshold, config, scales, found);
}

}  // namespace

DetectionResult detect_mean_changes(const Panel& panel, double threshold,
                                    const SegmentationConfig& config, std::vector<double> scales) {
  config.validate();
  if (!(threshold >= 0.0) || std::isnan(threshold)) {
    throw Error(Errc::ConfigError, "threshold must be non-negative");
  }
  if (scales.size() != panel.n()) throw Error(Errc::ConfigError, "expected one scale per series");

  DetectionResult result;
  result.config = config;
  result.threshold = threshold;
  result.panel_fingerprint = panel.fingerprint();
  segment_recursively(panel, 1, static_cast<int>(panel.T()), threshold, config, scales,
                      result.change_points);
  std::sort(result.change_points.begin(), result.change_points.end(),
            [](const ChangePoint& a, const ChangePoint& b) { return a.index < b.index; });
  result.segments = segments_from_splits(result.indices(), static_cast<int>(panel.T()));
  result.scales = std::move(scales);
  return result;
}

DetectionResult detect_mean_changes(const Panel& panel, double threshold,
                                    const SegmentationConfig& config) {
  config.validate();
  return detect_mean_changes(panel, threshold, config, panel_scales(panel, config.scale));
}

std::vector<std::vector<double>> segment_means(const Panel& panel, const DetectionResult& result) {
  if (panel.fingerprint() != result.panel_fingerprint) {
    throw Error(Errc::FingerprintMismatch, "result was produced from a different panel");
  }
  std::vector<std::vector<double>> means(panel.n());
  for (std::size_t j = 0; j < panel.n(); ++j) {
    for (const auto& seg : result.segments) {
      double sum = 0.0;
      for (int t = seg.start; t <= seg.end; ++t) sum += panel.at(j, t);
      means[j].push_back(sum / static_cast<double>(seg.end - seg.start + 1));
    }
  }
  return means;
}

}  // namespace panelcp
