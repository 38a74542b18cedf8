#include "panelcp/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "panelcp/error.hpp"

namespace panelcp::synth {

namespace {

template <typename Break>
void check_breaks(const std::vector<Break>& breaks, const PlantedPanelSpec& spec,
                  const char* what) {
  int prev = 0;
  for (const auto& br : breaks) {
    if (br.index < 1 || br.index >= static_cast<int>(spec.T)) {
      throw Error(Errc::ConfigError, std::string(what) + " break index outside 1..T-1");
    }
    if (prev != 0 && br.index - prev < 2 * spec.min_seg) {
      throw Error(Errc::ConfigError, std::string(what) + " breaks closer than 2 * min_seg");
    }
    prev = br.index;
  }
}

}  // namespace

void PlantedPanelSpec::validate() const {
  if (n < 1 || T < 2) throw Error(Errc::ConfigError, "planted panel needs n >= 1 and T >= 2");
  if (!(noise_sd >= 0.0)) throw Error(Errc::ConfigError, "noise_sd must be non-negative");
  if (!(rho >= 0.0 && rho < 1.0)) throw Error(Errc::ConfigError, "rho must lie in [0, 1)");
  if (min_seg < 2) throw Error(Errc::ConfigError, "min_seg must be at least 2");
  check_breaks(mean_breaks, *this, "mean");
  check_breaks(variance_breaks, *this, "variance");
  for (const auto& br : mean_breaks) {
    if (br.jumps.size() != n) throw Error(Errc::ConfigError, "jump vector length must equal n");
  }
  for (const auto& br : variance_breaks) {
    if (br.multipliers.size() != n) {
      throw Error(Errc::ConfigError, "multiplier vector length must equal n");
    }
    for (double m : br.multipliers) {
      if (!(m > 0.0)) throw Error(Errc::ConfigError, "sd multipliers must be positive");
    }
  }
}

PlantedPanel gen_piecewise_panel(const PlantedPanelSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n, T = spec.T;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> common(T);
  for (double& z : common) z = normal(rng);
  std::vector<double> idio(n * T);
  for (double& u : idio) u = normal(rng);

  const double a = std::sqrt(spec.rho), c = std::sqrt(1.0 - spec.rho);
  std::vector<double> values(n * T);
  for (std::size_t j = 0; j < n; ++j) {
    double level = 0.0, sd = spec.noise_sd;
    std::size_t next_mean = 0, next_var = 0;
    for (std::size_t t = 0; t < T; ++t) {
      const int coord = static_cast<int>(t) + 1;
      // A break at index b takes effect from b + 1.
      while (next_mean < spec.mean_breaks.size() && spec.mean_breaks[next_mean].index < coord) {
        level += spec.mean_breaks[next_mean++].jumps[j];
      }
      while (next_var < spec.variance_breaks.size() && spec.variance_breaks[next_var].index < coord) {
        sd *= spec.variance_breaks[next_var++].multipliers[j];
      }
      const double noise = sd == 0.0 ? 0.0 : sd * (a * common[t] + c * idio[j * T + t]);
      values[j * T + t] = level + noise;
    }
  }

  PlantedPanel out;
  std::vector<std::string> ids;
  for (std::size_t j = 0; j < n; ++j) ids.push_back("s" + std::to_string(j + 1));
  std::vector<int> times(T);
  for (std::size_t t = 0; t < T; ++t) times[t] = static_cast<int>(t + 1);
  out.panel = build_panel_flat(n, T, std::move(values), std::move(ids), std::move(times));
  for (const auto& br : spec.mean_breaks) out.mean_truth.push_back(br.index);
  for (const auto& br : spec.variance_breaks) out.variance_truth.push_back(br.index);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(const std::string& text, int line) {
  std::istringstream is(text);
  T v{};
  is >> v;
  if (!is || !(is >> std::ws).eof()) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": bad number '" + text + "'");
  }
  return v;
}

std::pair<int, std::vector<double>> parse_break(const std::string& text, int line) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected '<index> : <values>'");
  }
  const int index = parse_number<int>(trim(text.substr(0, colon)), line);
  std::istringstream is(text.substr(colon + 1));
  std::vector<double> vals;
  std::string tok;
  while (is >> tok) vals.push_back(parse_number<double>(tok, line));
  if (vals.empty()) throw Error(Errc::ParseError, "line " + std::to_string(line) + ": no values");
  return {index, vals};
}

}  // namespace

PlantedPanelSpec parse_spec(std::istream& in) {
  PlantedPanelSpec spec;
  std::vector<std::pair<int, std::vector<double>>> means, vars;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string text = trim(raw.substr(0, raw.find('#')));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ParseError, "line " + std::to_string(line) + ": expected 'key = value'");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key == "n") spec.n = parse_number<std::size_t>(value, line);
    else if (key == "T") spec.T = parse_number<std::size_t>(value, line);
    else if (key == "noise_sd") spec.noise_sd = parse_number<double>(value, line);
    else if (key == "rho") spec.rho = parse_number<double>(value, line);
    else if (key == "seed") spec.seed = parse_number<std::uint64_t>(value, line);
    else if (key == "min_seg") spec.min_seg = parse_number<int>(value, line);
    else if (key == "mean_break") means.push_back(parse_break(value, line));
    else if (key == "variance_break") vars.push_back(parse_break(value, line));
    else throw Error(Errc::ParseError, "line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
  auto broadcast = [&spec](std::vector<double> v) {
    if (v.size() == 1) v.assign(spec.n, v.front());
    return v;
  };
  for (auto& [idx, v] : means) spec.mean_breaks.push_back({idx, broadcast(std::move(v))});
  for (auto& [idx, v] : vars) spec.variance_breaks.push_back({idx, broadcast(std::move(v))});
  spec.validate();
  return spec;
}

PlantedPanelSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open '" + path + "'");
  return parse_spec(in);
}

double naive_cusum(std::span<const double> x, int s, int b, int e, double sigma) {
  const double len = e - s + 1, nl = b - s + 1, nr = e - b;
  double left = 0.0, right = 0.0;
  for (int t = s; t <= b; ++t) left += x[static_cast<std::size_t>(t - 1)];
  for (int t = b + 1; t <= e; ++t) right += x[static_cast<std::size_t>(t - 1)];
  return (std::sqrt(nr / (len * nl)) * left - std::sqrt(nl / (len * nr)) * right) / sigma;
}

BruteForceResult brute_force_single_change(const Panel& panel, int s, int e,
                                           std::span<const double> scales, double phi,
                                           double max_work) {
  if (s < 1 || s >= e || e > static_cast<int>(panel.T())) {
    throw Error(Errc::IndexOutOfRange, "bad interval for brute force");
  }
  const std::size_t n = panel.n();
  const double work = static_cast<double>(n) * (e - s) * (e - s);
  if (work > max_work) throw Error(Errc::InstanceTooLarge, "instance too large for brute force");

  BruteForceResult best{s, 1, -1.0};
  std::vector<double> abs_vals(n);
  const double dn = static_cast<double>(n);
  for (int b = s; b < e; ++b) {
    for (std::size_t j = 0; j < n; ++j) {
      abs_vals[j] = std::abs(naive_cusum(panel.row(j), s, b, e, scales[j]));
    }
    std::sort(abs_vals.begin(), abs_vals.end(), std::greater<>());
    for (std::size_t m = 1; m <= n; ++m) {
      double top = 0.0, rest = 0.0;
      for (std::size_t j = 0; j < m; ++j) top += abs_vals[j];
      for (std::size_t j = m; j < n; ++j) rest += abs_vals[j];
      const double dm = static_cast<double>(m);
      const double v = std::pow(dm * (2 * dn - dm) / (2 * dn), phi) * (top / dm - rest / (2 * dn - dm));
      if (v > best.value) best = {b, m, v};
    }
  }
  best.value = std::max(best.value, 0.0);
  return best;
}

DetectionScore score_detection(std::vector<int> truth, std::vector<int> detected, int tolerance) {
  std::sort(truth.begin(), truth.end());
  std::sort(detected.begin(), detected.end());
  std::vector<bool> truth_used(truth.size(), false), det_used(detected.size(), false);

  DetectionScore score;
  for (;;) {
    int best_dist = tolerance + 1;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (truth_used[i]) continue;
      for (std::size_t j = 0; j < detected.size(); ++j) {
        if (det_used[j]) continue;
        const int d = std::abs(detected[j] - truth[i]);
        if (d < best_dist) {
          best_dist = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (best_dist > tolerance) break;
    truth_used[bi] = det_used[bj] = true;
    ++score.matched;
    score.localization_errors.push_back(best_dist);
  }
  score.unmatched_true = truth.size() - score.matched;
  score.spurious = detected.size() - score.matched;
  return score;
}

}  // namespace panelcp::synth
