#include <doctest.h>

#include <cmath>
#include <limits>

#include "panelcp/preprocess.hpp"
#include "panelcp/threshold.hpp"
#include "support.hpp"

using namespace panelcp;

namespace {

// From tests/oracles/gen_oracles.py.
const std::vector<std::vector<double>> kFactorPanel{
    {0.001, 0.299, -0.274, -0.891, -0.455, -0.992, 0.06, 1.34, -0.492, -0.62, 0.49, 0.357},
    {0.105, -0.93, -0.029, 0.695, -1.344, -0.458, -1.901, -1.29, -1.842, -0.235, -1.267, 0.271},
    {0.157, -0.187, -2.517, -0.539, -0.049, 0.113, -1.53, -0.478, -0.979, -0.809, 1.061, -0.808},
    {-0.033, 0.884, -0.584, -0.112, 0.11, 0.064, -1.225, 0.076, 1.359, -1.547, 0.859, 0.119}};
const std::vector<double> kEigenvalues{1.229856389250982, 0.7480775507133414, 0.37333434916711455,
                                       0.347919142686743};

BootstrapOptions opts(std::uint64_t seed, std::size_t reps = 200) {
  BootstrapOptions o;
  o.seed = seed;
  o.n_reps = reps;
  return o;
}

}  // namespace

TEST_SUITE("threshold") {
  TEST_CASE("principal components fit") {
    const Panel p = build_panel(kFactorPanel);
    const auto m = fit_factor_model(p, 1);
    REQUIRE(m.eigenvalues.size() == 4);
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(std::abs(m.eigenvalues(i) - kEigenvalues[i]) <= 1e-12);
    CHECK(std::abs(m.residuals.norm() - 4.020278779915541) <= 1e-12);
    CHECK(choose_n_factors(p) == 2);
    CHECK(m.n_factors() == 1);
    CHECK(std::abs(m.loadings.col(0).norm() - 1.0) <= 1e-12);
  }

  TEST_CASE("reconstruction identity") {
    const Panel p = testing::gaussian_panel(8, 120, 5);
    for (std::size_t r : {1, 3, 7}) {
      const auto m = fit_factor_model(p, r);
      const Eigen::MatrixXd x = m.reconstruct();
      for (std::size_t j = 0; j < 8; ++j) {
        for (std::size_t t = 0; t < 120; ++t) {
          CHECK(std::abs(x(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(t)) - p.row(j)[t]) <= 1e-10);
        }
      }
    }
  }

  TEST_CASE("rank-one panel") {
    std::vector<std::vector<double>> rows(5, std::vector<double>(30));
    for (std::size_t j = 0; j < 5; ++j) {
      for (std::size_t t = 0; t < 30; ++t) rows[j][t] = (1.0 + 0.5 * static_cast<double>(j)) * std::sin(0.7 * static_cast<double>(t));
    }
    const auto m = fit_factor_model(build_panel(rows), 1);
    CHECK(m.residuals.cwiseAbs().maxCoeff() <= 1e-8);
    CHECK_ERRC(fit_factor_model(build_panel(rows), 2), Errc::RankDeficient);
  }

  TEST_CASE("factor count bounds") {
    const Panel p = build_panel(kFactorPanel);
    CHECK_ERRC(fit_factor_model(p, 0), Errc::ConfigError);
    CHECK_ERRC(fit_factor_model(p, 4), Errc::ConfigError);
  }

  TEST_CASE("block length") {
    CHECK(block_length(1) == 1);
    CHECK(block_length(8) == 2);
    CHECK(block_length(27) == 3);
    CHECK(block_length(28) == 4);
    CHECK(block_length(120) == 5);
    CHECK(block_length(125) == 5);
    CHECK(block_length(126) == 6);
  }

  TEST_CASE("degenerate resampling") {
    FactorModel m;
    m.means = Eigen::VectorXd::Zero(3);
    m.loadings = Eigen::MatrixXd(3, 1);
    m.loadings << 1.0, 2.0, -1.0;
    m.factors = Eigen::MatrixXd::Constant(1, 20, 0.5);
    m.residuals = Eigen::MatrixXd::Zero(3, 20);
    m.series_ids = {"a", "b", "c"};
    for (int t = 1; t <= 20; ++t) m.time_index.push_back(t);
    auto rng = replicate_engine(3, 0);
    const Panel p = bootstrap_replicate(m, rng);
    for (std::size_t t = 0; t < 20; ++t) {
      CHECK(p.row(0)[t] == 0.5);
      CHECK(p.row(1)[t] == 1.0);
      CHECK(p.row(2)[t] == -0.5);
    }
  }

  TEST_CASE("replicates are seeded") {
    const auto m = fit_factor_model(testing::gaussian_panel(6, 60, 8), 2);
    auto a = replicate_engine(42, 7);
    auto b = replicate_engine(42, 7);
    auto c = replicate_engine(42, 8);
    const Panel pa = bootstrap_replicate(m, a);
    CHECK(pa == bootstrap_replicate(m, b));
    CHECK(!(pa == bootstrap_replicate(m, c)));
  }

  TEST_CASE("replicate variance tracks the original") {
    const Panel p = testing::gaussian_panel(6, 120, 909);
    const auto m = fit_factor_model(p, 1);
    std::vector<double> acc(6, 0.0);
    for (std::uint64_t r = 0; r < 200; ++r) {
      auto rng = replicate_engine(1, r);
      const Panel q = bootstrap_replicate(m, rng);
      for (std::size_t j = 0; j < 6; ++j) acc[j] += sample_sd(q.row(j)) * sample_sd(q.row(j)) / 200.0;
    }
    for (std::size_t j = 0; j < 6; ++j) {
      const double ratio = acc[j] / (sample_sd(p.row(j)) * sample_sd(p.row(j)));
      CHECK(ratio >= 0.5);
      CHECK(ratio <= 2.0);
    }
  }

  TEST_CASE("upper quantile") {
    const std::vector<double> v{5, 1, 4, 2, 3};
    CHECK(upper_quantile(v, 0.2) == 5);
    CHECK(upper_quantile(v, 0.4) == 4);
    CHECK(upper_quantile(v, 0.01) == 5);
    CHECK(upper_quantile(v, 0.99) == 2);
    CHECK_ERRC(upper_quantile(v, 0.0), Errc::ConfigError);
    CHECK_ERRC(upper_quantile({}, 0.5), Errc::ConfigError);
  }

  TEST_CASE("calibration") {
    testing::QuietWarnings quiet;
    const Panel p = testing::gaussian_panel(8, 120, 21);
    const SegmentationConfig cfg;
    const auto maxima = bootstrap_maxima(p, cfg, opts(4));
    CHECK(maxima == bootstrap_maxima(p, cfg, opts(4), false));
    CHECK(maxima != bootstrap_maxima(p, cfg, opts(5)));

    auto o = opts(4);
    o.alpha = 1.0 / 200.0;
    const auto spec = calibrate_threshold(p, cfg, o);
    CHECK(spec.threshold == *std::max_element(maxima.begin(), maxima.end()));
    CHECK(spec.method == ThresholdMethod::Bootstrap);
    CHECK(spec.block_length == 5);
    CHECK(spec.n_factors >= 1);
    CHECK(spec == calibrate_threshold(p, cfg, o));
    CHECK(spec == calibrate_threshold_serial(p, cfg, o));

    auto bad = opts(4);
    bad.alpha = 1.0;
    CHECK_ERRC(calibrate_threshold(p, cfg, bad), Errc::ConfigError);
    CHECK_ERRC(calibrate_threshold(p, cfg, opts(4, 50)), Errc::ConfigError);
  }

  TEST_CASE("calibrated threshold holds its size on white noise") {
    testing::QuietWarnings quiet;
    const SegmentationConfig cfg;
    int clean = 0;
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
      const Panel p = testing::gaussian_panel(8, 120, 50000 + trial);
      const auto spec = calibrate_threshold(p, cfg, opts(trial, 500));
      if (detect_mean_changes(p, spec.threshold, cfg).change_points.empty()) ++clean;
    }
    MESSAGE("clean trials: " << clean << "/100");
    CHECK(clean >= 93);
  }

  TEST_CASE("deterministic threshold") {
    const auto t = deterministic_threshold(4, 120, 1.0);
    CHECK(std::abs(t.threshold - 4.215723189344003) <= 1e-12);
    CHECK(t.method == ThresholdMethod::Deterministic);
    CHECK(deterministic_threshold(4, 120, 2.0).threshold == 2.0 * t.threshold);
    CHECK_ERRC(deterministic_threshold(4, 120, 0.0), Errc::ConfigError);
    CHECK_ERRC(deterministic_threshold(4, 120, -1.0), Errc::ConfigError);
  }
}
