#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "panelcp/cusum.hpp"
#include "panelcp/panel.hpp"

namespace testing {

inline std::vector<std::vector<double>> gaussian_rows(std::size_t n, std::size_t T, std::uint64_t seed,
                                                      double sd = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, sd);
  std::vector<std::vector<double>> rows(n, std::vector<double>(T));
  for (auto& r : rows) {
    for (auto& v : r) v = z(rng);
  }
  return rows;
}

inline panelcp::Panel gaussian_panel(std::size_t n, std::size_t T, std::uint64_t seed, double sd = 1.0) {
  return panelcp::build_panel(gaussian_rows(n, T, seed, sd));
}

inline std::string data_path(const std::string& name) { return std::string(PANELCP_DATA_DIR) + "/" + name; }

// Swallows library warnings for the lifetime of a test.
struct QuietWarnings {
  QuietWarnings() { panelcp::set_warning_handler([](std::string_view) {}); }
  ~QuietWarnings() { panelcp::set_warning_handler(nullptr); }
};

}  // namespace testing

#include <optional>

#include "panelcp/error.hpp"

namespace testing {

// Error class thrown by `f`, or nullopt when it returns normally.
template <class F>
std::optional<panelcp::Errc> errc_of(F&& f) {
  try {
    f();
  } catch (const panelcp::Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace testing

#define CHECK_ERRC(expr, code) CHECK(::testing::errc_of([&] { (void)(expr); }) == (code))
