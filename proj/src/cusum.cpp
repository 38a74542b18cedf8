#include "panelcp/cusum.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>

#include "panelcp/error.hpp"
#include "panelcp/preprocess.hpp"

namespace panelcp {

namespace {

std::mutex g_warn_mutex;
WarningHandler g_warn_handler;

// Gaussian consistency: median |Z1 - Z2| = 0.6745 * sqrt(2) for unit variance.
constexpr double kMadDiffConstant = 0.6745;

}  // namespace

std::string_view to_string(ScaleMethod m) {
  switch (m) {
    case ScaleMethod::MadDiff: return "mad_diff";
    case ScaleMethod::SdDiff: return "sd_diff";
    case ScaleMethod::Unit: return "unit";
  }
  return "mad_diff";
}

ScaleMethod parse_scale_method(std::string_view name) {
  if (name == "mad_diff") return ScaleMethod::MadDiff;
  if (name == "sd_diff") return ScaleMethod::SdDiff;
  if (name == "unit") return ScaleMethod::Unit;
  throw Error(Errc::ConfigError, "unknown scale method '" + std::string(name) + "'");
}

void set_warning_handler(WarningHandler handler) {
  std::lock_guard lock(g_warn_mutex);
  g_warn_handler = std::move(handler);
}

void warn(std::string_view message) {
  std::lock_guard lock(g_warn_mutex);
  if (g_warn_handler) {
    g_warn_handler(message);
  } else {
    std::cerr << "warning: " << message << '\n';
  }
}

ScaleEstimate estimate_scale(std::span<const double> series, ScaleMethod method) {
  if (method == ScaleMethod::Unit) return {1.0, method};
  if (series.size() < 3) {
    throw Error(Errc::ConfigError, "difference-based scale needs at least 3 observations");
  }
  std::vector<double> diff(series.size() - 1);
  for (std::size_t t = 1; t < series.size(); ++t) diff[t - 1] = series[t] - series[t - 1];

  double sigma = 0.0;
  if (method == ScaleMethod::MadDiff) {
    for (double& d : diff) d = std::abs(d);
    const std::size_t mid = diff.size() / 2;
    std::nth_element(diff.begin(), diff.begin() + static_cast<std::ptrdiff_t>(mid), diff.end());
    double med = diff[mid];
    if (diff.size() % 2 == 0) {
      const double lower = *std::max_element(diff.begin(), diff.begin() + static_cast<std::ptrdiff_t>(mid));
      med = 0.5 * (med + lower);
    }
    sigma = med / (kMadDiffConstant * std::sqrt(2.0));
  } else {
    sigma = sample_sd(diff) / std::sqrt(2.0);
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw Error(Errc::DegenerateSeries, "scale estimate is zero");
  }
  return {sigma, method};
}

std::vector<double> panel_scales(const Panel& panel, ScaleMethod method) {
  std::vector<double> scales(panel.n(), 1.0);
  for (std::size_t j = 0; j < panel.n(); ++j) {
    try {
      scales[j] = estimate_scale(panel.row(j), method).sigma;
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateSeries) throw;
      warn("series '" + panel.series_ids()[j] + "' has zero " + std::string(to_string(method)) +
           " scale; using sigma = 1");
    }
  }
  return scales;
}

void check_interval(const Panel& panel, int s, int e) {
  if (s < 1 || s >= e || e > static_cast<int>(panel.T())) {
    throw Error(Errc::IndexOutOfRange, "interval [" + std::to_string(s) + ", " + std::to_string(e) +
                                           "] outside 1.." + std::to_string(panel.T()));
  }
}

double cusum_at(const Panel& panel, std::size_t j, int s, int b, int e, double sigma) {
  check_interval(panel, s, e);
  if (b < s || b >= e) {
    throw Error(Errc::IndexOutOfRange, "split " + std::to_string(b) + " outside [" +
                                           std::to_string(s) + ", " + std::to_string(e) + ")");
  }
  if (j >= panel.n()) throw Error(Errc::IndexOutOfRange, "series index out of range");
  double left = 0.0, right = 0.0;
  for (int t = s; t <= b; ++t) left += panel.at(j, t);
  for (int t = b + 1; t <= e; ++t) right += panel.at(j, t);
  const double len = e - s + 1;
  const double nl = b - s + 1;
  const double nr = e - b;
  return (std::sqrt(nr / (len * nl)) * left - std::sqrt(nl / (len * nr)) * right) / sigma;
}

void cusum_kernel(std::span<const double> x, double sigma, std::span<double> out,
                  std::span<double> prefix) {
  const std::size_t len = x.size();
  // Prefix sums relative to x[0].
  const double anchor = x[0];
  prefix[0] = 0.0;
  for (std::size_t t = 0; t < len; ++t) prefix[t + 1] = prefix[t] + (x[t] - anchor);
  const double total = prefix[len];
  const double dlen = static_cast<double>(len);
  for (std::size_t k = 0; k + 1 < len; ++k) {
    const double nl = static_cast<double>(k + 1);
    const double nr = dlen - nl;
    const double left = prefix[k + 1];
    const double right = total - left;
    out[k] = (std::sqrt(nr / (dlen * nl)) * left - std::sqrt(nl / (dlen * nr)) * right) / sigma;
  }
}

CusumRow cusum_row(const Panel& panel, std::size_t j, int s, int e, double sigma) {
  check_interval(panel, s, e);
  if (j >= panel.n()) throw Error(Errc::IndexOutOfRange, "series index out of range");
  const auto len = static_cast<std::size_t>(e - s + 1);
  CusumRow row{s, e, j, std::vector<double>(len - 1)};
  std::vector<double> prefix(len + 1);
  cusum_kernel(panel.row(j).subspan(static_cast<std::size_t>(s - 1), len), sigma, row.values, prefix);
  return row;
}

}  // namespace panelcp
