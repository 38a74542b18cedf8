#pragma once

#include <optional>
#include <span>
#include <vector>

#include "panelcp/panel.hpp"

namespace panelcp {

/// A yearly series with explicit missingness; `values[i]` is meaningless
/// where `missing[i]` is set.
struct RawSeries {
  std::vector<int> years;
  std::vector<double> values;
  std::vector<bool> missing;

  std::size_t size() const noexcept { return values.size(); }
  std::size_t observed() const;
  bool complete() const { return observed() == size(); }

  /// Builds a series from optional values (nullopt = missing).
  static RawSeries from_optional(std::vector<int> years, const std::vector<std::optional<double>>& v);
};

/// counts / games per time point; missing wherever either input is missing.
/// Throws MisalignedSeries or ZeroGames.
RawSeries per_game_rate(const RawSeries& counts, const RawSeries& games);

/// (value - mean(peers)) / sd(peers), sample standard deviation.
/// Throws DegenerateSeason when fewer than two peers or zero spread.
double season_zscore(double value, std::span<const double> peers);

/// Fills missing entries with the OLS fit of value on year over the observed
/// entries. Observed entries are left bit-identical. Throws InsufficientData.
RawSeries impute_linear(const RawSeries& series);

/// Standardizes every row to mean 0 and sample sd 1. Throws DegenerateSeries.
Panel series_zscore(const Panel& panel);

double mean_of(std::span<const double> x);
/// Sample (n - 1) standard deviation.
double sample_sd(std::span<const double> x);

}  // namespace panelcp
