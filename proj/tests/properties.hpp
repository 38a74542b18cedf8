#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "panelcp/cusum.hpp"
#include "panelcp/double_cusum.hpp"
#include "panelcp/panel.hpp"

namespace properties {

struct Report {
  std::string name;
  int instances = 0;
  int failures = 0;
  double max_error = 0.0;

  bool ok() const { return failures == 0; }
};

struct Instance {
  panelcp::Panel panel;
  int s = 1;
  int e = 2;
  std::mt19937_64 rng;
};

inline Instance random_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> n_dist(2, 10), T_dist(12, 80);
  std::normal_distribution<double> z(0.0, 1.0);
  const auto n = static_cast<std::size_t>(n_dist(rng));
  const int T = T_dist(rng);
  std::uniform_int_distribution<int> jump_at(2, T - 2);
  std::vector<std::vector<double>> rows(n, std::vector<double>(static_cast<std::size_t>(T)));
  const int b0 = jump_at(rng);
  for (auto& r : rows) {
    const double jump = 2.0 * z(rng);
    for (int t = 0; t < T; ++t) r[static_cast<std::size_t>(t)] = z(rng) + (t >= b0 ? jump : 0.0);
  }
  std::uniform_int_distribution<int> s_dist(1, T / 3);
  std::uniform_int_distribution<int> e_dist(2 * T / 3 + 1, T);
  const int s = s_dist(rng);
  const int e = e_dist(rng);
  return {panelcp::build_panel(rows), s, e, std::move(rng)};
}

inline panelcp::DcResult dc_mad(const panelcp::Panel& p, int s, int e, double phi = 0.5) {
  const auto scales = panelcp::panel_scales(p, panelcp::ScaleMethod::MadDiff);
  return panelcp::dc_statistic(p, s, e, scales, {phi});
}

template <class Transform>
panelcp::Panel transform_rows(const panelcp::Panel& p, Transform f) {
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < p.n(); ++j) {
    auto r = p.row(j);
    rows.emplace_back(r.begin(), r.end());
    for (auto& v : rows.back()) v = f(j, v);
  }
  return panelcp::build_panel(rows);
}

inline void record(Report& rep, bool pass, double err = 0.0) {
  ++rep.instances;
  if (!pass) ++rep.failures;
  rep.max_error = std::max(rep.max_error, err);
}

constexpr double kTol = 1e-10;

inline Report level_shift(int count, std::uint64_t seed0) {
  Report rep{"level-shift invariance"};
  for (int i = 0; i < count; ++i) {
    auto in = random_instance(seed0 + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> c(-50.0, 50.0);
    std::vector<double> shift(in.panel.n());
    for (auto& v : shift) v = c(in.rng);
    const auto q = transform_rows(in.panel, [&](std::size_t j, double v) { return v + shift[j]; });
    const auto a = dc_mad(in.panel, in.s, in.e), b = dc_mad(q, in.s, in.e);
    const double err = std::abs(a.value - b.value);
    record(rep, a.b_star == b.b_star && err <= kTol, err);
  }
  return rep;
}

inline Report scale_invariance(int count, std::uint64_t seed0) {
  Report rep{"scale invariance (mad_diff)"};
  for (int i = 0; i < count; ++i) {
    auto in = random_instance(seed0 + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> c(0.1, 20.0);
    std::vector<double> factor(in.panel.n());
    for (auto& v : factor) v = c(in.rng);
    const auto q = transform_rows(in.panel, [&](std::size_t j, double v) { return v * factor[j]; });
    const auto a = dc_mad(in.panel, in.s, in.e), b = dc_mad(q, in.s, in.e);
    const double err = std::abs(a.value - b.value);
    record(rep, a.b_star == b.b_star && err <= kTol, err);
  }
  return rep;
}

inline Report antisymmetry(int count, std::uint64_t seed0) {
  Report rep{"antisymmetry"};
  for (int i = 0; i < count; ++i) {
    auto in = random_instance(seed0 + static_cast<std::uint64_t>(i));
    const auto q = transform_rows(in.panel, [](std::size_t, double v) { return -v; });
    double err = 0.0;
    for (std::size_t j = 0; j < in.panel.n(); ++j) {
      const auto a = panelcp::cusum_row(in.panel, j, in.s, in.e, 1.0);
      const auto b = panelcp::cusum_row(q, j, in.s, in.e, 1.0);
      for (std::size_t k = 0; k < a.values.size(); ++k) err = std::max(err, std::abs(a.values[k] + b.values[k]));
    }
    const auto a = dc_mad(in.panel, in.s, in.e), b = dc_mad(q, in.s, in.e);
    err = std::max(err, std::abs(a.value - b.value));
    record(rep, a.b_star == b.b_star && err <= kTol, err);
  }
  return rep;
}

inline Report permutation(int count, std::uint64_t seed0) {
  Report rep{"series-permutation invariance"};
  for (int i = 0; i < count; ++i) {
    auto in = random_instance(seed0 + static_cast<std::uint64_t>(i));
    std::vector<std::size_t> order(in.panel.n());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), in.rng);
    std::vector<std::vector<double>> rows;
    for (std::size_t j : order) rows.emplace_back(in.panel.row(j).begin(), in.panel.row(j).end());
    const auto q = panelcp::build_panel(rows);
    const auto a = dc_mad(in.panel, in.s, in.e), b = dc_mad(q, in.s, in.e);
    const double err = std::abs(a.value - b.value);
    record(rep, a.b_star == b.b_star && err <= kTol, err);
  }
  return rep;
}

inline Report non_negativity(int count, std::uint64_t seed0) {
  Report rep{"DC non-negativity"};
  for (int i = 0; i < count; ++i) {
    auto in = random_instance(seed0 + static_cast<std::uint64_t>(i));
    std::uniform_real_distribution<double> phi(0.0, 1.0);
    const double ph = phi(in.rng);
    const auto scales = panelcp::panel_scales(in.panel, panelcp::ScaleMethod::MadDiff);
    const auto prof = panelcp::dc_profile(in.panel, in.s, in.e, scales, {ph});
    const double lowest = *std::min_element(prof.begin(), prof.end());
    record(rep, lowest >= 0.0 && dc_mad(in.panel, in.s, in.e, ph).value >= 0.0, std::max(0.0, -lowest));
  }
  return rep;
}

inline Report phi_zero(int count, std::uint64_t seed0) {
  Report rep{"phi = 0 weight identity"};
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed0 + static_cast<std::uint64_t>(i));
    std::uniform_int_distribution<std::size_t> n_dist(1, 20);
    std::exponential_distribution<double> mag(1.0);
    std::vector<double> v(n_dist(rng));
    for (auto& x : v) x = mag(rng);
    std::sort(v.begin(), v.end(), std::greater<>());
    const double n = static_cast<double>(v.size());
    double err = 0.0;
    for (std::size_t m = 1; m <= v.size(); ++m) {
      const double top = std::accumulate(v.begin(), v.begin() + static_cast<long>(m), 0.0) / static_cast<double>(m);
      const double rest = std::accumulate(v.begin() + static_cast<long>(m), v.end(), 0.0) / (2 * n - static_cast<double>(m));
      err = std::max(err, std::abs(panelcp::dc_at(v, m, 0.0) - (top - rest)));
    }
    record(rep, err <= kTol, err);
  }
  return rep;
}

inline std::vector<Report> all(int count, std::uint64_t seed0) {
  return {level_shift(count, seed0),    scale_invariance(count, seed0 + 100000),
          antisymmetry(count, seed0 + 200000), permutation(count, seed0 + 300000),
          non_negativity(count, seed0 + 400000), phi_zero(count, seed0 + 500000)};
}

}  // namespace properties
