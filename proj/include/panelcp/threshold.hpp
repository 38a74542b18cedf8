#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "panelcp/panel.hpp"
#include "panelcp/segmentation.hpp"

namespace panelcp {

/// Static approximate factor model of a centered panel:
///   panel = means + loadings * factors + residuals
struct FactorModel {
  Eigen::VectorXd means;      // n
  Eigen::MatrixXd loadings;   // n x r, orthonormal columns
  Eigen::MatrixXd factors;    // r x T
  Eigen::MatrixXd residuals;  // n x T
  Eigen::VectorXd eigenvalues;  // all n covariance eigenvalues, descending
  std::vector<std::string> series_ids;
  std::vector<int> time_index;

  std::size_t n_factors() const { return static_cast<std::size_t>(loadings.cols()); }
  Eigen::MatrixXd reconstruct() const;
};

/// Principal-components fit with `n_factors` factors. Requires
/// 1 <= n_factors < min(n, T); throws ConfigError otherwise and RankDeficient
/// when the covariance has fewer than `n_factors` positive eigenvalues.
FactorModel fit_factor_model(const Panel& panel, std::size_t n_factors);

/// Eigenvalue-ratio rule: argmax_k lambda_k / lambda_{k+1} over
/// 1 <= k <= max(1, min(n, T) / 2), capped below min(n, T).
std::size_t choose_n_factors(const Panel& panel);

/// ceil(T^{1/3}).
std::size_t block_length(std::size_t T);

/// Circular block bootstrap of the factor series and, independently, of the
/// residual series, recombined through the loadings. Each group is resampled
/// jointly across its series.
Panel bootstrap_replicate(const FactorModel& model, std::mt19937_64& rng);

enum class ThresholdMethod { Bootstrap, Deterministic, Fixed };

std::string_view to_string(ThresholdMethod m);

struct ThresholdSpec {
  ThresholdMethod method = ThresholdMethod::Bootstrap;
  double alpha = 0.05;
  std::size_t n_reps = 500;
  std::size_t n_factors = 0;
  std::size_t block_length = 0;
  std::uint64_t seed = 0;
  double C = 0.0;
  double threshold = 0.0;

  friend bool operator==(const ThresholdSpec&, const ThresholdSpec&) = default;
};

struct BootstrapOptions {
  std::size_t n_reps = 500;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  std::size_t n_factors = 0;  // 0 selects by the eigenvalue-ratio rule
};

/// Engine for replicate `rep` of a run seeded with `seed`. Streams for
/// different replicates are independent of evaluation order.
std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t rep);

/// Full-interval maximum DC of every bootstrap replicate, in replicate order.
/// Replicates run in parallel under OpenMP unless `parallel` is false; the
/// output does not depend on the schedule.
std::vector<double> bootstrap_maxima(const Panel& panel, const SegmentationConfig& config,
                                     const BootstrapOptions& options, bool parallel = true);

/// Upper-alpha empirical quantile: the k-th largest value with
/// k = max(1, floor(alpha * size)).
double upper_quantile(std::vector<double> values, double alpha);

/// Bootstrap threshold: the (1 - alpha) quantile of the replicate maxima.
ThresholdSpec calibrate_threshold(const Panel& panel, const SegmentationConfig& config,
                                  const BootstrapOptions& options);

/// Single-threaded reference for `calibrate_threshold`.
ThresholdSpec calibrate_threshold_serial(const Panel& panel, const SegmentationConfig& config,
                                         const BootstrapOptions& options);

/// C * sqrt(log T) * log(log(8 T)). Throws ConfigError unless C > 0.
ThresholdSpec deterministic_threshold(std::size_t n, std::size_t T, double C);

/// Default C for deterministic_threshold.
inline constexpr double kDefaultThresholdConstant = 1.5;

}  // namespace panelcp
