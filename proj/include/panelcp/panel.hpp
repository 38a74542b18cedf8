#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace panelcp {

/// Candidate split inside a segment, in 1-based inclusive time coordinates:
/// the left part is [s, b] and the right part is [b + 1, e].
struct Interval {
  int s = 1;
  int b = 1;
  int e = 2;
};

/// Equal-length multivariate panel: n series observed on a common grid of
/// T time points. Immutable once built.
///
/// Series are addressed by 0-based row index. Time is addressed in 1-based
/// coordinates everywhere in the public API (1..T); `time_label(t)` maps a
/// coordinate back to the user's label (a season year for baseball data).
class Panel {
 public:
  Panel() = default;

  std::size_t n() const noexcept { return n_; }
  std::size_t T() const noexcept { return T_; }

  /// Whole row j (0-based), T values.
  std::span<const double> row(std::size_t j) const {
    return {values_.data() + j * T_, T_};
  }
  /// Value of series j at 1-based time t.
  double at(std::size_t j, int t) const { return values_[j * T_ + static_cast<std::size_t>(t - 1)]; }

  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::string>& series_ids() const noexcept { return series_ids_; }
  const std::vector<int>& time_index() const noexcept { return time_index_; }
  int time_label(int t) const { return time_index_.at(static_cast<std::size_t>(t - 1)); }

  /// 64-bit FNV-1a over the shape, values, series ids and time labels.
  std::uint64_t fingerprint() const;

  friend bool operator==(const Panel&, const Panel&) = default;

 private:
  friend Panel build_panel(const std::vector<std::vector<double>>&, std::vector<std::string>,
                           std::vector<int>);
  friend Panel build_panel_flat(std::size_t, std::size_t, std::vector<double>,
                                std::vector<std::string>, std::vector<int>);

  std::size_t n_ = 0;
  std::size_t T_ = 0;
  std::vector<double> values_;  // row-major n x T
  std::vector<std::string> series_ids_;
  std::vector<int> time_index_;
};

/// Validates and builds a panel from one vector per series.
/// Throws RaggedPanel, NonFinite, EmptyPanel, or ConfigError (label mismatch,
/// non-increasing time index).
Panel build_panel(const std::vector<std::vector<double>>& rows, std::vector<std::string> series_ids,
                  std::vector<int> time_index);

/// Same validation over row-major storage.
Panel build_panel_flat(std::size_t n, std::size_t T, std::vector<double> values,
                       std::vector<std::string> series_ids, std::vector<int> time_index);

/// Default labels: series "s1".."sn", time 1..T.
Panel build_panel(const std::vector<std::vector<double>>& rows);

/// Columns s..e (1-based, inclusive) of every series. Requires 1 <= s < e <= T.
Panel slice(const Panel& panel, int s, int e);

std::string fingerprint_hex(std::uint64_t fp);

}  // namespace panelcp
