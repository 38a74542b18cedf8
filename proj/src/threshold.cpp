#include "panelcp/threshold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "panelcp/cusum.hpp"
#include "panelcp/double_cusum.hpp"
#include "panelcp/error.hpp"

namespace panelcp {

std::string_view to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::Bootstrap: return "bootstrap";
    case ThresholdMethod::Deterministic: return "deterministic";
    case ThresholdMethod::Fixed: return "fixed";
  }
  return "bootstrap";
}

Eigen::MatrixXd FactorModel::reconstruct() const {
  Eigen::MatrixXd x = loadings * factors + residuals;
  x.colwise() += means;
  return x;
}

namespace {

Eigen::MatrixXd as_matrix(const Panel& panel) {
  Eigen::MatrixXd x(panel.n(), panel.T());
  for (std::size_t j = 0; j < panel.n(); ++j) {
    auto r = panel.row(j);
    for (std::size_t t = 0; t < panel.T(); ++t) x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) = r[t];
  }
  return x;
}

// Eigen-decomposition of the sample covariance, eigenpairs in descending order.
struct Spectrum {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

Spectrum covariance_spectrum(const Eigen::MatrixXd& centered) {
  const double denom = std::max<double>(1.0, static_cast<double>(centered.cols() - 1));
  const Eigen::MatrixXd cov = centered * centered.transpose() / denom;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov);
  return {solver.eigenvalues().reverse(), solver.eigenvectors().rowwise().reverse()};
}

// Replicate series-group `src` (rows x T) through circular blocks.
Eigen::MatrixXd circular_blocks(const Eigen::MatrixXd& src, std::size_t block, std::mt19937_64& rng) {
  const auto T = static_cast<std::size_t>(src.cols());
  Eigen::MatrixXd out(src.rows(), src.cols());
  std::uniform_int_distribution<std::size_t> start_dist(0, T - 1);
  std::size_t t = 0;
  while (t < T) {
    const std::size_t start = start_dist(rng);
    for (std::size_t i = 0; i < block && t < T; ++i, ++t) {
      out.col(static_cast<Eigen::Index>(t)) = src.col(static_cast<Eigen::Index>((start + i) % T));
    }
  }
  return out;
}

double max_dc_quiet(const Panel& panel, const SegmentationConfig& config) {
  std::vector<double> scales(panel.n(), 1.0);
  for (std::size_t j = 0; j < panel.n(); ++j) {
    try {
      scales[j] = estimate_scale(panel.row(j), config.scale).sigma;
    } catch (const Error& e) {
      if (e.code() != Errc::DegenerateSeries) throw;
    }
  }
  return dc_statistic_serial(panel, 1, static_cast<int>(panel.T()), scales, config.dc).value;
}

}  // namespace

FactorModel fit_factor_model(const Panel& panel, std::size_t n_factors) {
  const std::size_t limit = std::min(panel.n(), panel.T());
  if (n_factors < 1 || n_factors >= limit) {
    throw Error(Errc::ConfigError, "n_factors must be in 1.." + std::to_string(limit - 1) +
                                       ", got " + std::to_string(n_factors));
  }
  Eigen::MatrixXd x = as_matrix(panel);
  FactorModel model;
  model.means = x.rowwise().mean();
  x.colwise() -= model.means;

  const Spectrum spec = covariance_spectrum(x);
  const auto r = static_cast<Eigen::Index>(n_factors);
  const double tol = 1e-12 * std::max(1.0, spec.values.cwiseAbs().sum());
  if (!(spec.values(r - 1) > tol)) {
    throw Error(Errc::RankDeficient, "covariance has fewer than " + std::to_string(n_factors) +
                                         " positive eigenvalues");
  }
  model.eigenvalues = spec.values;
  model.loadings = spec.vectors.leftCols(r);
  model.factors = model.loadings.transpose() * x;
  model.residuals = x - model.loadings * model.factors;
  model.series_ids = panel.series_ids();
  model.time_index = panel.time_index();
  return model;
}

std::size_t choose_n_factors(const Panel& panel) {
  const std::size_t limit = std::min(panel.n(), panel.T());
  if (limit < 2) throw Error(Errc::ConfigError, "factor model needs at least 2 series");
  const std::size_t kmax = std::min(limit - 1, std::max<std::size_t>(1, limit / 2));
  Eigen::MatrixXd x = as_matrix(panel);
  x.colwise() -= x.rowwise().mean();
  const Spectrum spec = covariance_spectrum(x);
  const double tol = 1e-12 * std::max(1.0, spec.values.cwiseAbs().sum());

  std::size_t best_k = 1;
  double best_ratio = -1.0;
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double num = spec.values(static_cast<Eigen::Index>(k - 1));
    const double den = spec.values(static_cast<Eigen::Index>(k));
    if (!(num > tol)) break;
    const double ratio = den > tol ? num / den : std::numeric_limits<double>::infinity();
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best_k = k;
    }
  }
  return best_k;
}

std::size_t block_length(std::size_t T) {
  auto b = static_cast<std::size_t>(std::ceil(std::cbrt(static_cast<double>(T))));
  // cbrt of a perfect cube can land a hair above the integer.
  if ((b - 1) * (b - 1) * (b - 1) >= T) --b;
  return std::max<std::size_t>(b, 1);
}

Panel bootstrap_replicate(const FactorModel& model, std::mt19937_64& rng) {
  const auto T = static_cast<std::size_t>(model.residuals.cols());
  const std::size_t block = block_length(T);
  const Eigen::MatrixXd factors = circular_blocks(model.factors, block, rng);
  const Eigen::MatrixXd residuals = circular_blocks(model.residuals, block, rng);
  Eigen::MatrixXd x = model.loadings * factors + residuals;
  x.colwise() += model.means;

  const auto n = static_cast<std::size_t>(x.rows());
  std::vector<double> values(n * T);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t t = 0; t < T; ++t) values[j * T + t] = x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t));
  }
  return build_panel_flat(n, T, std::move(values), model.series_ids, model.time_index);
}

std::mt19937_64 replicate_engine(std::uint64_t seed, std::uint64_t rep) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(rep), static_cast<std::uint32_t>(rep >> 32)};
  return std::mt19937_64(seq);
}

std::vector<double> bootstrap_maxima(const Panel& panel, const SegmentationConfig& config,
                                     const BootstrapOptions& options, bool parallel) {
  config.validate();
  if (options.n_reps < 1) throw Error(Errc::ConfigError, "need at least one replicate");
  const std::size_t r = options.n_factors == 0 ? choose_n_factors(panel) : options.n_factors;
  const FactorModel model = fit_factor_model(panel, r);

  std::vector<double> maxima(options.n_reps);
  const auto reps = static_cast<long>(options.n_reps);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < reps; ++i) {
    auto rng = replicate_engine(options.seed, static_cast<std::uint64_t>(i));
    maxima[static_cast<std::size_t>(i)] = max_dc_quiet(bootstrap_replicate(model, rng), config);
  }
  return maxima;
}

double upper_quantile(std::vector<double> values, double alpha) {
  if (values.empty()) throw Error(Errc::ConfigError, "no values for the quantile");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::ConfigError, "alpha must lie in (0, 1)");
  const auto k = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(alpha * static_cast<double>(values.size()) + 1e-9)));
  std::sort(values.begin(), values.end(), std::greater<>());
  return values[k - 1];
}

namespace {

ThresholdSpec calibrate(const Panel& panel, const SegmentationConfig& config,
                        const BootstrapOptions& options, bool parallel) {
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) {
    throw Error(Errc::ConfigError, "alpha must lie in (0, 1)");
  }
  if (options.n_reps < 100) {
    throw Error(Errc::ConfigError, "bootstrap needs at least 100 replicates");
  }
  ThresholdSpec spec;
  spec.method = ThresholdMethod::Bootstrap;
  spec.alpha = options.alpha;
  spec.n_reps = options.n_reps;
  spec.seed = options.seed;
  spec.n_factors = options.n_factors == 0 ? choose_n_factors(panel) : options.n_factors;
  spec.block_length = block_length(panel.T());

  BootstrapOptions resolved = options;
  resolved.n_factors = spec.n_factors;
  spec.threshold = upper_quantile(bootstrap_maxima(panel, config, resolved, parallel), options.alpha);
  return spec;
}

}  // namespace

ThresholdSpec calibrate_threshold(const Panel& panel, const SegmentationConfig& config,
                                  const BootstrapOptions& options) {
  return calibrate(panel, config, options, true);
}

ThresholdSpec calibrate_threshold_serial(const Panel& panel, const SegmentationConfig& config,
                                         const BootstrapOptions& options) {
  return calibrate(panel, config, options, false);
}

ThresholdSpec deterministic_threshold(std::size_t n, std::size_t T, double C) {
  (void)n;
  if (!(C > 0.0) || !std::isfinite(C)) throw Error(Errc::ConfigError, "C must be positive");
  if (T < 2) throw Error(Errc::ConfigError, "T must be at least 2");
  const double dT = static_cast<double>(T);
  ThresholdSpec spec;
  spec.method = ThresholdMethod::Deterministic;
  spec.C = C;
  spec.threshold = C * std::sqrt(std::log(dT)) * std::log(std::log(8.0 * dT));
  return spec;
}

}  // namespace panelcp
