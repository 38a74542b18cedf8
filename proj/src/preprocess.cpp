#include "panelcp/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "panelcp/error.hpp"

namespace panelcp {

std::size_t RawSeries::observed() const {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), false));
}

RawSeries RawSeries::from_optional(std::vector<int> years, const std::vector<std::optional<double>>& v) {
  if (years.size() != v.size()) throw Error(Errc::MisalignedSeries, "years and values differ in length");
  RawSeries out;
  out.years = std::move(years);
  out.values.resize(v.size(), 0.0);
  out.missing.resize(v.size(), true);
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i]) {
      out.values[i] = *v[i];
      out.missing[i] = false;
    }
  }
  return out;
}

double mean_of(std::span<const double> x) {
  return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

double sample_sd(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const double m = mean_of(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(x.size() - 1));
}

RawSeries per_game_rate(const RawSeries& counts, const RawSeries& games) {
  if (counts.years != games.years || counts.size() != games.size() ||
      counts.missing.size() != counts.size() || games.missing.size() != games.size()) {
    throw Error(Errc::MisalignedSeries, "counts and games are not on the same years");
  }
  RawSeries out;
  out.years = counts.years;
  out.values.assign(counts.size(), 0.0);
  out.missing.assign(counts.size(), false);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts.missing[i] || games.missing[i]) {
      out.missing[i] = true;
      continue;
    }
    if (!(games.values[i] > 0.0)) {
      throw Error(Errc::ZeroGames, "no games recorded in " + std::to_string(counts.years[i]));
    }
    out.values[i] = counts.values[i] / games.values[i];
  }
  return out;
}

double season_zscore(double value, std::span<const double> peers) {
  if (peers.size() < 2) throw Error(Errc::DegenerateSeason, "fewer than two peers");
  const double sd = sample_sd(peers);
  if (!(sd > 0.0)) throw Error(Errc::DegenerateSeason, "peers have zero spread");
  return (value - mean_of(peers)) / sd;
}

RawSeries impute_linear(const RawSeries& series) {
  if (series.missing.size() != series.size() || series.years.size() != series.size()) {
    throw Error(Errc::MisalignedSeries, "mask, years and values differ in length");
  }
  const std::size_t k = series.observed();
  if (k == series.size()) return series;
  if (k < 2) throw Error(Errc::InsufficientData, "need at least 2 observed values to impute");

  // Centered OLS of value on year.
  double xbar = 0.0, ybar = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.missing[i]) continue;
    xbar += series.years[i];
    ybar += series.values[i];
  }
  xbar /= static_cast<double>(k);
  ybar /= static_cast<double>(k);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.missing[i]) continue;
    const double dx = series.years[i] - xbar;
    sxx += dx * dx;
    sxy += dx * (series.values[i] - ybar);
  }
  if (!(sxx > 0.0)) throw Error(Errc::InsufficientData, "observed values share a single year");
  const double slope = sxy / sxx;

  RawSeries out = series;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out.missing[i]) continue;
    out.values[i] = ybar + slope * (out.years[i] - xbar);
    out.missing[i] = false;
  }
  return out;
}

Panel series_zscore(const Panel& panel) {
  std::vector<double> values(panel.values());
  const std::size_t T = panel.T();
  for (std::size_t j = 0; j < panel.n(); ++j) {
    auto row = panel.row(j);
    const double m = mean_of(row);
    const double sd = sample_sd(row);
    if (!(sd > 0.0)) {
      throw Error(Errc::DegenerateSeries, "series '" + panel.series_ids()[j] + "' is constant");
    }
    for (std::size_t t = 0; t < T; ++t) values[j * T + t] = (row[t] - m) / sd;
  }
  return build_panel_flat(panel.n(), T, std::move(values), panel.series_ids(), panel.time_index());
}

}  // namespace panelcp
