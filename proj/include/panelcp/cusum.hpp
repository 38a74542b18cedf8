#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "panelcp/panel.hpp"

namespace panelcp {

enum class ScaleMethod { MadDiff, SdDiff, Unit };

std::string_view to_string(ScaleMethod m);
ScaleMethod parse_scale_method(std::string_view name);

struct ScaleEstimate {
  double sigma = 1.0;
  ScaleMethod method = ScaleMethod::MadDiff;
};

/// Noise scale of one series from its first differences:
///   MadDiff: median |x_t - x_{t-1}| / (0.6745 * sqrt 2)
///   SdDiff:  sd(x_t - x_{t-1}) / sqrt 2
///   Unit:    1
/// Throws DegenerateSeries when the estimate is zero, ConfigError when the
/// series is shorter than 3 for the difference methods.
ScaleEstimate estimate_scale(std::span<const double> series, ScaleMethod method);

/// One scale per series over the full panel. A degenerate series falls back
/// to sigma = 1 and reports through the warning handler.
std::vector<double> panel_scales(const Panel& panel, ScaleMethod method);

/// Receives non-fatal diagnostics; the default writes to stderr.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

/// CUSUM of series j (0-based) over [s, e] split after b, all 1-based:
///   (1/sigma) [ sqrt((e-b)/((e-s+1)(b-s+1))) sum_{s..b} x
///             - sqrt((b-s+1)/((e-s+1)(e-b))) sum_{b+1..e} x ]
/// Direct evaluation. Throws IndexOutOfRange unless s <= b < e <= T.
double cusum_at(const Panel& panel, std::size_t j, int s, int b, int e, double sigma);

/// CUSUM values for b = s..e-1 (entry k is b = s + k), from prefix sums.
struct CusumRow {
  int s = 1;
  int e = 2;
  std::size_t series = 0;
  std::vector<double> values;
};

CusumRow cusum_row(const Panel& panel, std::size_t j, int s, int e, double sigma);

/// Low-level kernel shared by cusum_row and the DC statistic: writes the
/// CUSUM of `x` (the segment itself, length >= 2) for every split into `out`
/// (length x.size() - 1). `prefix` is scratch of length x.size() + 1.
void cusum_kernel(std::span<const double> x, double sigma, std::span<double> out,
                  std::span<double> prefix);

void check_interval(const Panel& panel, int s, int e);

}  // namespace panelcp
