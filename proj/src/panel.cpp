#include "panelcp/panel.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>

#include "panelcp/error.hpp"

namespace panelcp {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::RaggedPanel: return "RaggedPanel";
    case Errc::NonFinite: return "NonFinite";
    case Errc::EmptyPanel: return "EmptyPanel";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::MisalignedSeries: return "MisalignedSeries";
    case Errc::ZeroGames: return "ZeroGames";
    case Errc::DegenerateSeason: return "DegenerateSeason";
    case Errc::InsufficientData: return "InsufficientData";
    case Errc::DegenerateSeries: return "DegenerateSeries";
    case Errc::UnsortedInput: return "UnsortedInput";
    case Errc::BadM: return "BadM";
    case Errc::ConfigError: return "ConfigError";
    case Errc::FingerprintMismatch: return "FingerprintMismatch";
    case Errc::ScaleTooCoarse: return "ScaleTooCoarse";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::InstanceTooLarge: return "InstanceTooLarge";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownFranchise: return "UnknownFranchise";
    case Errc::MissingYears: return "MissingYears";
    case Errc::MissingFranchiseYear: return "MissingFranchiseYear";
    case Errc::FranchiseTooShort: return "FranchiseTooShort";
    case Errc::MalformedResult: return "MalformedResult";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

namespace {

void validate_labels(std::size_t n, std::size_t T, const std::vector<std::string>& ids,
                     const std::vector<int>& time_index) {
  if (ids.size() != n) {
    throw Error(Errc::ConfigError, "expected " + std::to_string(n) + " series ids, got " +
                                       std::to_string(ids.size()));
  }
  if (time_index.size() != T) {
    throw Error(Errc::ConfigError, "expected " + std::to_string(T) + " time labels, got " +
                                       std::to_string(time_index.size()));
  }
  for (std::size_t t = 1; t < T; ++t) {
    if (time_index[t] <= time_index[t - 1]) {
      throw Error(Errc::ConfigError, "time index must be strictly increasing");
    }
  }
}

std::vector<std::string> default_ids(std::size_t n) {
  std::vector<std::string> ids;
  ids.reserve(n);
  for (std::size_t j = 0; j < n; ++j) ids.push_back("s" + std::to_string(j + 1));
  return ids;
}

std::vector<int> default_times(std::size_t T) {
  std::vector<int> t(T);
  for (std::size_t i = 0; i < T; ++i) t[i] = static_cast<int>(i + 1);
  return t;
}

}  // namespace

Panel build_panel_flat(std::size_t n, std::size_t T, std::vector<double> values,
                       std::vector<std::string> series_ids, std::vector<int> time_index) {
  if (n == 0 || T == 0) throw Error(Errc::EmptyPanel, "panel has no series or no time points");
  if (T < 2) throw Error(Errc::EmptyPanel, "panel needs at least 2 time points");
  if (values.size() != n * T) throw Error(Errc::RaggedPanel, "value count does not match n x T");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(Errc::NonFinite, "non-finite value in series " + std::to_string(i / T) +
                                       " at time " + std::to_string(i % T + 1));
    }
  }
  validate_labels(n, T, series_ids, time_index);

  Panel p;
  p.n_ = n;
  p.T_ = T;
  p.values_ = std::move(values);
  p.series_ids_ = std::move(series_ids);
  p.time_index_ = std::move(time_index);
  return p;
}

Panel build_panel(const std::vector<std::vector<double>>& rows, std::vector<std::string> series_ids,
                  std::vector<int> time_index) {
  if (rows.empty() || rows.front().empty()) throw Error(Errc::EmptyPanel, "panel is empty");
  const std::size_t T = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * T);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    if (rows[j].size() != T) {
      throw Error(Errc::RaggedPanel, "series " + std::to_string(j) + " has " +
                                         std::to_string(rows[j].size()) + " values, expected " +
                                         std::to_string(T));
    }
    flat.insert(flat.end(), rows[j].begin(), rows[j].end());
  }
  return build_panel_flat(rows.size(), T, std::move(flat), std::move(series_ids),
                          std::move(time_index));
}

Panel build_panel(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  const std::size_t T = rows.empty() ? 0 : rows.front().size();
  return build_panel(rows, default_ids(n), default_times(T));
}

Panel slice(const Panel& panel, int s, int e) {
  if (s < 1 || e > static_cast<int>(panel.T()) || s >= e) {
    throw Error(Errc::IndexOutOfRange, "slice [" + std::to_string(s) + ", " + std::to_string(e) +
                                           "] outside 1.." + std::to_string(panel.T()));
  }
  const auto len = static_cast<std::size_t>(e - s + 1);
  std::vector<double> values;
  values.reserve(panel.n() * len);
  for (std::size_t j = 0; j < panel.n(); ++j) {
    auto r = panel.row(j).subspan(static_cast<std::size_t>(s - 1), len);
    values.insert(values.end(), r.begin(), r.end());
  }
  std::vector<int> times(panel.time_index().begin() + (s - 1), panel.time_index().begin() + e);
  return build_panel_flat(panel.n(), len, std::move(values), panel.series_ids(), std::move(times));
}

std::uint64_t Panel::fingerprint() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const void* data, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= p[i];
      h *= 0x100000001b3ULL;
    }
  };
  const std::uint64_t dims[2] = {n_, T_};
  mix(dims, sizeof dims);
  for (double v : values_) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    mix(&bits, sizeof bits);
  }
  for (const auto& id : series_ids_) {
    mix(id.data(), id.size());
    mix("\0", 1);
  }
  for (int t : time_index_) {
    const std::int64_t v = t;
    mix(&v, sizeof v);
  }
  return h;
}

std::string fingerprint_hex(std::uint64_t fp) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fp));
  return buf;
}

}  // namespace panelcp
