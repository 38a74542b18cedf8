#include "panelcp/double_cusum.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "panelcp/cusum.hpp"
#include "panelcp/error.hpp"

namespace panelcp {

void DcConfig::validate() const {
  if (!(phi >= 0.0 && phi <= 1.0)) {
    throw Error(Errc::ConfigError, "phi must lie in [0, 1], got " + std::to_string(phi));
  }
}

double dc_at(std::span<const double> ordered, std::size_t m, double phi) {
  const std::size_t n = ordered.size();
  if (m < 1 || m > n) {
    throw Error(Errc::BadM, "m = " + std::to_string(m) + " outside 1.." + std::to_string(n));
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (ordered[j] > ordered[j - 1]) throw Error(Errc::UnsortedInput, "values are not descending");
  }
  const double dn = static_cast<double>(n);
  const double dm = static_cast<double>(m);
  double top = 0.0, rest = 0.0;
  for (std::size_t j = 0; j < m; ++j) top += ordered[j];
  for (std::size_t j = m; j < n; ++j) rest += ordered[j];
  return std::pow(dm * (2.0 * dn - dm) / (2.0 * dn), phi) * (top / dm - rest / (2.0 * dn - dm));
}

namespace {

struct SplitBest {
  double value = 0.0;
  std::size_t m = 1;
};

// |CUSUM| matrix for a segment, row-major n x (len - 1).
std::vector<double> abs_cusum_matrix(const Panel& panel, int s, int e,
                                     std::span<const double> scales, bool parallel) {
  check_interval(panel, s, e);
  if (scales.size() != panel.n()) {
    throw Error(Errc::ConfigError, "expected one scale per series");
  }
  const auto len = static_cast<std::size_t>(e - s + 1);
  const std::size_t width = len - 1;
  const auto n = static_cast<long>(panel.n());
  std::vector<double> mat(panel.n() * width);

#pragma omp parallel if (parallel)
  {
    std::vector<double> prefix(len + 1);
#pragma omp for schedule(static)
    for (long j = 0; j < n; ++j) {
      const auto jj = static_cast<std::size_t>(j);
      std::span<double> out(mat.data() + jj * width, width);
      cusum_kernel(panel.row(jj).subspan(static_cast<std::size_t>(s - 1), len), scales[jj], out, prefix);
      for (double& v : out) v = std::abs(v);
    }
  }
  return mat;
}

// Leading weights {m(2n-m)/(2n)}^phi for m = 1..n (index m - 1).
std::vector<double> leading_weights(std::size_t n, double phi) {
  std::vector<double> w(n);
  const double dn = static_cast<double>(n);
  for (std::size_t m = 1; m <= n; ++m) {
    const double dm = static_cast<double>(m);
    w[m - 1] = std::pow(dm * (2.0 * dn - dm) / (2.0 * dn), phi);
  }
  return w;
}

// Best m at one split; `col` is scratch of length n, `cum` of length n + 1.
SplitBest best_at_split(const std::vector<double>& mat, std::size_t width, std::size_t n,
                        std::size_t k, const std::vector<double>& weights, std::vector<double>& col,
                        std::vector<double>& cum) {
  for (std::size_t j = 0; j < n; ++j) col[j] = mat[j * width + k];
  std::sort(col.begin(), col.end(), std::greater<>());
  cum[0] = 0.0;
  for (std::size_t j = 0; j < n; ++j) cum[j + 1] = cum[j] + col[j];
  const double dn = static_cast<double>(n);
  SplitBest best{-1.0, 1};
  for (std::size_t m = 1; m <= n; ++m) {
    const double dm = static_cast<double>(m);
    const double v = weights[m - 1] * (cum[m] / dm - (cum[n] - cum[m]) / (2.0 * dn - dm));
    if (v > best.value) best = {v, m};
  }
  return best;
}

std::vector<SplitBest> split_bests(const Panel& panel, int s, int e, std::span<const double> scales,
                                   const DcConfig& config, bool parallel) {
  config.validate();
  const auto mat = abs_cusum_matrix(panel, s, e, scales, parallel);
  const std::size_t n = panel.n();
  const auto width = static_cast<std::size_t>(e - s);
  const auto weights = leading_weights(n, config.phi);
  std::vector<SplitBest> bests(width);
  const auto w = static_cast<long>(width);

#pragma omp parallel if (parallel)
  {
    std::vector<double> col(n), cum(n + 1);
#pragma omp for schedule(static)
    for (long k = 0; k < w; ++k) {
      bests[static_cast<std::size_t>(k)] =
          best_at_split(mat, width, n, static_cast<std::size_t>(k), weights, col, cum);
    }
  }
  return bests;
}

DcResult reduce(const std::vector<SplitBest>& bests, int s) {
  DcResult out{s, bests.front().m, bests.front().value};
  for (std::size_t k = 1; k < bests.size(); ++k) {
    if (bests[k].value > out.value) out = {s + static_cast<int>(k), bests[k].m, bests[k].value};
  }
  // Rounding can leave an all-zero segment at -0 or a tiny negative.
  out.value = std::max(out.value, 0.0);
  return out;
}

}  // namespace

DcResult dc_statistic(const Panel& panel, int s, int e, std::span<const double> scales,
                      const DcConfig& config) {
  return reduce(split_bests(panel, s, e, scales, config, true), s);
}

DcResult dc_statistic_serial(const Panel& panel, int s, int e, std::span<const double> scales,
                             const DcConfig& config) {
  return reduce(split_bests(panel, s, e, scales, config, false), s);
}

std::vector<double> dc_profile(const Panel& panel, int s, int e, std::span<const double> scales,
                               const DcConfig& config) {
  const auto bests = split_bests(panel, s, e, scales, config, true);
  std::vector<double> out(bests.size());
  for (std::size_t k = 0; k < bests.size(); ++k) out[k] = std::max(bests[k].value, 0.0);
  return out;
}

}  // namespace panelcp
