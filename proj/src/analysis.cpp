#include "panelcp/analysis.hpp"

#include <algorithm>
#include <random>

#include "panelcp/error.hpp"

namespace panelcp {

void ThresholdRule::validate() const {
  switch (method) {
    case ThresholdMethod::Bootstrap:
      if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::ConfigError, "alpha must lie in (0, 1)");
      if (n_reps < 100) throw Error(Errc::ConfigError, "bootstrap needs at least 100 replicates");
      break;
    case ThresholdMethod::Deterministic:
      if (!(C > 0.0)) throw Error(Errc::ConfigError, "C must be positive");
      break;
    case ThresholdMethod::Fixed:
      throw Error(Errc::ConfigError, "fixed thresholds are supplied, not derived");
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  if (stream == 0) return seed;
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), 0x9e3779b9u};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

SegmentationConfig variance_segmentation(const AnalysisConfig& config) {
  SegmentationConfig seg = config.segmentation;
  seg.rescale_per_segment = true;
  seg.scale = config.variance_scale;
  int coarsest = 0;
  for (int sc : config.scales.scales) coarsest = std::max(coarsest, -sc);
  if (coarsest > 0) seg.min_seg += (1 << coarsest) - 1;
  return seg;
}

Panel pilot_residuals(const Panel& panel, const DetectionResult& pilot,
                      const SegmentationConfig& seg) {
  Panel resid = mean_stabilize(panel, pilot);
  if (!seg.rescale_per_segment) return resid;
  std::vector<double> values(resid.values());
  const std::size_t T = resid.T();
  for (const auto& sg : pilot.segments) {
    const auto scales = segment_scales(resid, sg.start, sg.end, seg.scale);
    for (std::size_t j = 0; j < resid.n(); ++j) {
      for (int t = sg.start; t <= sg.end; ++t) values[j * T + static_cast<std::size_t>(t - 1)] /= scales[j];
    }
  }
  return build_panel_flat(resid.n(), T, std::move(values), resid.series_ids(), resid.time_index());
}

ThresholdSpec make_threshold(const Panel& panel, const SegmentationConfig& seg,
                             const ThresholdRule& rule, std::uint64_t seed) {
  rule.validate();
  if (rule.method == ThresholdMethod::Deterministic) {
    return deterministic_threshold(panel.n(), panel.T(), rule.C);
  }
  const BootstrapOptions opts{rule.n_reps, rule.alpha, seed, rule.n_factors};
  if (!(rule.pilot_C > 0.0)) return calibrate_threshold(panel, seg, opts);
  const double pilot = deterministic_threshold(panel.n(), panel.T(), rule.pilot_C).threshold;
  return calibrate_threshold(pilot_residuals(panel, detect_mean_changes(panel, pilot, seg), seg), seg,
                             opts);
}

AnalysisThresholds calibrate_analysis(const Panel& panel, const AnalysisConfig& config) {
  config.segmentation.validate();
  AnalysisThresholds out;
  out.mean = make_threshold(panel, config.segmentation, config.threshold, config.seed);
  if (config.detect_variance) {
    const auto mean = detect_mean_changes(panel, out.mean.threshold, config.segmentation);
    const Panel periodograms = periodogram_panel(mean_stabilize(panel, mean), config.scales);
    out.variance = make_threshold(periodograms, variance_segmentation(config), config.threshold,
                                  derive_seed(config.seed, 1));
  }
  return out;
}

Analysis analyze(std::string label, const Panel& panel, const AnalysisConfig& config,
                 const std::optional<AnalysisThresholds>& given) {
  config.segmentation.validate();
  if (given && config.detect_variance && !given->variance) {
    throw Error(Errc::ConfigError, "supplied thresholds lack a variance threshold");
  }
  Analysis out;
  out.label = std::move(label);
  out.panel = panel;
  out.thresholds = given ? *given : calibrate_analysis(panel, config);
  if (!config.detect_variance) out.thresholds.variance.reset();
  out.mean = detect_mean_changes(panel, out.thresholds.mean.threshold, config.segmentation);
  if (config.detect_variance) {
    out.variance = detect_variance_changes(mean_stabilize(panel, out.mean), config.scales,
                                           out.thresholds.variance->threshold,
                                           variance_segmentation(config));
  }
  return out;
}

}  // namespace panelcp
