#include "panelcp/variance.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "panelcp/error.hpp"

namespace panelcp {

void WaveletScaleSet::validate(std::size_t T) const {
  if (scales.empty()) throw Error(Errc::ConfigError, "no wavelet scales given");
  const int finest_limit = static_cast<int>(std::bit_width(T)) - 1;  // floor(log2 T)
  for (int sc : scales) {
    if (sc >= 0) throw Error(Errc::ConfigError, "wavelet scales are negative integers");
    if (-sc > finest_limit - 1) {
      throw Error(Errc::ScaleTooCoarse, "scale " + std::to_string(sc) + " too coarse for T = " +
                                            std::to_string(T));
    }
  }
}

std::vector<double> haar_periodogram(std::span<const double> series, int scale) {
  if (scale >= 0) throw Error(Errc::ConfigError, "wavelet scales are negative integers");
  const int k = -scale;
  const std::size_t T = series.size();
  if (k >= 31 || (std::size_t{1} << k) > T) {
    throw Error(Errc::ScaleTooCoarse, "scale " + std::to_string(scale) + " needs " +
                                          "at least 2^" + std::to_string(k) + " points");
  }
  const std::size_t half = std::size_t{1} << (k - 1);
  const double norm = std::pow(2.0, -0.5 * k);
  auto value = [&](std::size_t idx) { return idx < T ? series[idx] : series[2 * T - 1 - idx]; };

  std::vector<double> out(T);
  for (std::size_t t = 0; t < T; ++t) {
    double left = 0.0, right = 0.0;
    for (std::size_t i = 0; i < half; ++i) left += value(t + i);
    for (std::size_t i = half; i < 2 * half; ++i) right += value(t + i);
    const double d = norm * (left - right);
    out[t] = d * d;
  }
  return out;
}

Panel periodogram_panel(const Panel& panel, const WaveletScaleSet& scales) {
  scales.validate(panel.T());
  std::vector<double> values;
  std::vector<std::string> ids;
  values.reserve(panel.n() * scales.scales.size() * panel.T());
  for (std::size_t j = 0; j < panel.n(); ++j) {
    for (int sc : scales.scales) {
      const auto p = haar_periodogram(panel.row(j), sc);
      values.insert(values.end(), p.begin(), p.end());
      ids.push_back(panel.series_ids()[j] + "@" + std::to_string(sc));
    }
  }
  const std::size_t rows = ids.size();
  return build_panel_flat(rows, panel.T(), std::move(values), std::move(ids), panel.time_index());
}

Panel mean_stabilize(const Panel& panel, const DetectionResult& mean_result) {
  const auto means = segment_means(panel, mean_result);
  std::vector<double> values(panel.values());
  const std::size_t T = panel.T();
  for (std::size_t j = 0; j < panel.n(); ++j) {
    for (std::size_t k = 0; k < mean_result.segments.size(); ++k) {
      const auto& seg = mean_result.segments[k];
      for (int t = seg.start; t <= seg.end; ++t) {
        values[j * T + static_cast<std::size_t>(t - 1)] -= means[j][k];
      }
    }
  }
  return build_panel_flat(panel.n(), T, std::move(values), panel.series_ids(), panel.time_index());
}

DetectionResult detect_variance_changes(const Panel& panel, const WaveletScaleSet& scales,
                                        double threshold, const SegmentationConfig& config) {
  auto result = detect_mean_changes(periodogram_panel(panel, scales), threshold, config);
  for (auto& cp : result.change_points) cp.kind = ChangeKind::Variance;
  return result;
}

}  // namespace panelcp
