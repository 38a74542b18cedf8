#include "panelcp/baseball.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <stdexcept>

#include "csv.hpp"
#include "panelcp/cusum.hpp"
#include "panelcp/error.hpp"
#include "panelcp/preprocess.hpp"

namespace panelcp::baseball {

namespace {

constexpr std::array<std::string_view, kStatCount> kColumns = {
    "R", "H", "HR", "BB", "SO", "SB", "AB", "RA", "HA", "HRA", "BBA", "SOA", "attendance"};

std::string upper(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  return in;
}

std::size_t column_of(const detail::CsvTable& table, std::string_view name, std::string_view source) {
  const auto it = std::find(table.header.begin(), table.header.end(), name);
  if (it == table.header.end()) {
    throw Error(Errc::ParseError, std::string(source) + ": missing column " + std::string(name));
  }
  return static_cast<std::size_t>(it - table.header.begin());
}

[[noreturn]] void bad_cell(std::string_view source, std::size_t line, std::string_view column,
                           const std::string& reason) {
  throw Error(Errc::ParseError, std::string(source) + ": row " + std::to_string(line) + ", column " +
                                    std::string(column) + ": " + reason);
}

std::optional<double> number_at(const detail::CsvTable& table, std::size_t r, std::size_t c,
                                std::string_view source) {
  try {
    return detail::parse_cell(table.rows[r][c]);
  } catch (const std::invalid_argument& e) {
    bad_cell(source, table.lines[r], table.header[c], e.what());
  }
}

std::vector<int> year_range(int first, int last) {
  std::vector<int> years;
  for (int y = first; y <= last; ++y) years.push_back(y);
  return years;
}

// Per-game rate of `stat` for one season; nullopt when the count is missing.
std::optional<double> rate(const TeamSeason& row, Stat stat) {
  const auto v = row.get(stat);
  if (!v) return std::nullopt;
  return *v / row.games;
}

std::vector<double> impute_or_throw(const std::vector<int>& years,
                                    const std::vector<std::optional<double>>& values) {
  return impute_linear(RawSeries::from_optional(years, values)).values;
}

}  // namespace

std::string_view stat_column(Stat s) { return kColumns[static_cast<std::size_t>(s)]; }

Stat parse_stat(std::string_view name) {
  const std::string key = upper(name);
  if (key == "K") return Stat::SO;
  if (key == "ATT") return Stat::Attendance;
  for (std::size_t i = 0; i < kStatCount; ++i) {
    if (upper(kColumns[i]) == key) return static_cast<Stat>(i);
  }
  throw Error(Errc::ConfigError, "unknown statistic '" + std::string(name) + "'");
}

FranchiseMap FranchiseMap::parse(std::istream& in, std::string_view source) {
  const auto table = detail::read_csv(in, source);
  const std::size_t c_id = column_of(table, "franchID", source);
  const std::size_t c_canon = column_of(table, "canonical", source);
  const std::size_t c_label = column_of(table, "label", source);
  const std::size_t c_name = column_of(table, "name", source);
  FranchiseMap map;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    Franchise f{row[c_id], row[c_canon], row[c_label], row[c_name]};
    if (f.id.empty() || f.canonical.empty()) bad_cell(source, table.lines[r], "franchID", "empty id");
    if (!map.by_id_.emplace(f.id, f).second) bad_cell(source, table.lines[r], "franchID", "duplicate id " + f.id);
  }
  for (const auto& [id, f] : map.by_id_) {
    if (!map.by_id_.contains(f.canonical)) {
      throw Error(Errc::ParseError, std::string(source) + ": " + id + " maps to unlisted franchise " + f.canonical);
    }
  }
  return map;
}

FranchiseMap FranchiseMap::load(const std::string& path) {
  auto in = open_input(path);
  return parse(in, path);
}

const Franchise* FranchiseMap::find(std::string_view id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &it->second;
}

const std::string& FranchiseMap::canonical(std::string_view id) const {
  const Franchise* f = find(id);
  if (!f) throw Error(Errc::UnknownFranchise, "unknown franchise '" + std::string(id) + "'");
  return f->canonical;
}

std::string FranchiseMap::resolve(std::string_view token) const {
  const std::string key = upper(token);
  for (const auto& [id, f] : by_id_) {
    if (upper(id) == key || upper(f.label) == key || upper(f.name) == key) return f.canonical;
  }
  throw Error(Errc::UnknownFranchise, "unknown franchise '" + std::string(token) + "'");
}

std::string FranchiseMap::name_of(std::string_view canonical_id) const {
  const Franchise* f = find(canonical_id);
  return f ? f->name : std::string(canonical_id);
}

std::vector<TeamSeason> parse_teams_csv(std::istream& in, const FranchiseMap& map, std::string_view source) {
  const auto table = detail::read_csv(in, source);
  const std::size_t c_year = column_of(table, "yearID", source);
  const std::size_t c_franch = column_of(table, "franchID", source);
  const std::size_t c_games = column_of(table, "G", source);
  std::array<std::size_t, kStatCount> c_stats{};
  for (std::size_t i = 0; i < kStatCount; ++i) c_stats[i] = column_of(table, kColumns[i], source);
  const auto optional_column = [&](std::string_view name) -> std::optional<std::size_t> {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it == table.header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - table.header.begin());
  };
  const auto c_league = optional_column("lgID");
  const auto c_team = optional_column("teamID");
  const auto c_name = optional_column("name");

  std::vector<TeamSeason> out;
  out.reserve(table.rows.size());
  std::set<std::pair<int, std::string>> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t line = table.lines[r];
    TeamSeason ts;
    const auto year = number_at(table, r, c_year, source);
    if (!year || *year != std::floor(*year)) bad_cell(source, line, "yearID", "year must be an integer");
    ts.year = static_cast<int>(*year);
    const auto games = number_at(table, r, c_games, source);
    if (!games) bad_cell(source, line, "G", "games played is missing");
    if (!(*games > 0.0)) bad_cell(source, line, "G", "games played must be positive");
    ts.games = *games;
    for (std::size_t i = 0; i < kStatCount; ++i) {
      ts.stats[i] = number_at(table, r, c_stats[i], source);
      if (ts.stats[i] && *ts.stats[i] < 0.0) bad_cell(source, line, kColumns[i], "negative count");
    }
    ts.franchise = map.canonical(row[c_franch]);
    if (c_league) ts.league = row[*c_league];
    if (c_team) ts.team_id = row[*c_team];
    if (c_name) ts.name = row[*c_name];
    if (!seen.emplace(ts.year, ts.franchise).second) {
      bad_cell(source, line, "franchID", "second season " + std::to_string(ts.year) + " for " + ts.franchise);
    }
    out.push_back(std::move(ts));
  }
  std::stable_sort(out.begin(), out.end(), [](const TeamSeason& a, const TeamSeason& b) {
    return a.year != b.year ? a.year < b.year : a.franchise < b.franchise;
  });
  return out;
}

std::vector<TeamSeason> load_teams_csv(const std::string& path, const FranchiseMap& map) {
  auto in = open_input(path);
  return parse_teams_csv(in, map, path);
}

PanelRecipe PanelRecipe::league() {
  return {RecipeKind::LeagueAggregate, 1900, 2020, {Stat::HR, Stat::SO, Stat::BB, Stat::SB}, {}};
}

PanelRecipe PanelRecipe::per_statistic(Stat stat) {
  return {RecipeKind::PerStatistic, 1901, 2020, {stat}, fixed_franchises()};
}

PanelRecipe PanelRecipe::per_team(std::string franchise) {
  return {RecipeKind::PerTeam,
          0,
          2020,
          {Stat::R, Stat::H, Stat::HR, Stat::BB, Stat::SO, Stat::RA, Stat::HA, Stat::HRA, Stat::BBA, Stat::SOA},
          {std::move(franchise)}};
}

const std::vector<std::string>& fixed_franchises() {
  static const std::vector<std::string> ids = {"ATL", "BAL", "BOS", "CHC", "CHW", "CIN", "CLE", "DET",
                                               "LAD", "MIN", "NYY", "OAK", "PHI", "PIT", "SFG", "STL"};
  return ids;
}

Panel build_league_panel(const std::vector<TeamSeason>& rows, const PanelRecipe& recipe) {
  if (recipe.stats.empty()) throw Error(Errc::ConfigError, "league recipe lists no statistics");
  if (recipe.first_year >= recipe.last_year) throw Error(Errc::ConfigError, "empty year range");
  const auto years = year_range(recipe.first_year, recipe.last_year);

  std::set<int> present;
  for (const auto& r : rows) present.insert(r.year);
  std::string missing;
  for (int y : years) {
    if (!present.contains(y)) missing += (missing.empty() ? "" : ", ") + std::to_string(y);
  }
  if (!missing.empty()) throw Error(Errc::MissingYears, "no seasons for " + missing);

  std::vector<std::vector<double>> series;
  std::vector<std::string> ids;
  for (Stat stat : recipe.stats) {
    std::vector<std::optional<double>> values;
    for (int y : years) {
      double sum = 0.0;
      int count = 0;
      for (const auto& r : rows) {
        if (r.year != y) continue;
        if (const auto v = rate(r, stat)) {
          sum += *v;
          ++count;
        }
      }
      values.push_back(count > 0 ? std::optional<double>(sum / count) : std::nullopt);
    }
    series.push_back(impute_or_throw(years, values));
    ids.emplace_back(stat_column(stat));
  }
  return series_zscore(build_panel(series, ids, years));
}

Panel build_stat_panel(const std::vector<TeamSeason>& rows, const PanelRecipe& recipe) {
  if (recipe.stats.size() != 1) throw Error(Errc::ConfigError, "a statistic panel takes exactly one statistic");
  if (recipe.franchises.empty()) throw Error(Errc::ConfigError, "statistic recipe lists no franchises");
  if (recipe.first_year >= recipe.last_year) throw Error(Errc::ConfigError, "empty year range");
  const Stat stat = recipe.stats.front();
  const auto years = year_range(recipe.first_year, recipe.last_year);

  std::map<std::pair<std::string, int>, const TeamSeason*> index;
  for (const auto& r : rows) index[{r.franchise, r.year}] = &r;

  std::vector<std::vector<double>> series;
  for (const auto& f : recipe.franchises) {
    std::vector<std::optional<double>> values;
    for (int y : years) {
      const auto it = index.find({f, y});
      if (it == index.end()) {
        throw Error(Errc::MissingFranchiseYear, f + " has no season " + std::to_string(y));
      }
      values.push_back(rate(*it->second, stat));
    }
    series.push_back(impute_or_throw(years, values));
  }
  return build_panel(series, recipe.franchises, years);
}

Panel build_team_panel(const std::vector<TeamSeason>& rows, const PanelRecipe& recipe, int min_seg) {
  if (recipe.franchises.size() != 1) throw Error(Errc::ConfigError, "a team panel takes exactly one franchise");
  if (recipe.stats.empty()) throw Error(Errc::ConfigError, "team recipe lists no statistics");
  const std::string& franchise = recipe.franchises.front();

  int first = 0, last = 0;
  bool found = false;
  for (const auto& r : rows) {
    if (r.franchise != franchise || r.year > recipe.last_year) continue;
    if (recipe.first_year != 0 && r.year < recipe.first_year) continue;
    first = found ? std::min(first, r.year) : r.year;
    last = found ? std::max(last, r.year) : r.year;
    found = true;
  }
  if (!found) throw Error(Errc::UnknownFranchise, "no seasons for franchise " + franchise);
  const auto years = year_range(first, last);
  if (static_cast<int>(years.size()) < 2 * min_seg) {
    throw Error(Errc::FranchiseTooShort, franchise + " spans " + std::to_string(years.size()) +
                                             " seasons, fewer than 2 * min_seg = " + std::to_string(2 * min_seg));
  }

  std::map<int, std::vector<const TeamSeason*>> by_year;
  for (const auto& r : rows) {
    if (r.year >= first && r.year <= last) by_year[r.year].push_back(&r);
  }

  std::vector<std::vector<double>> series;
  std::vector<std::string> ids;
  for (Stat stat : recipe.stats) {
    std::vector<std::optional<double>> values;
    for (int y : years) {
      std::optional<double> own;
      std::vector<double> peers;
      for (const TeamSeason* r : by_year[y]) {
        const auto v = rate(*r, stat);
        if (!v) continue;
        peers.push_back(*v);
        if (r->franchise == franchise) own = v;
      }
      std::optional<double> z;
      if (own) {
        try {
          z = season_zscore(*own, peers);
        } catch (const Error& e) {
          if (e.code() != Errc::DegenerateSeason) throw;
        }
      }
      values.push_back(z);
    }
    try {
      series.push_back(impute_or_throw(years, values));
      ids.emplace_back(stat_column(stat));
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientData) throw;
      warn(franchise + ": dropping " + std::string(stat_column(stat)) + " (" + e.what() + ")");
    }
  }
  if (series.empty()) throw Error(Errc::InsufficientData, franchise + ": no statistic could be built");
  return build_panel(series, ids, years);
}

std::vector<std::string> franchises_in(const std::vector<TeamSeason>& rows, int year) {
  std::set<std::string> ids;
  for (const auto& r : rows) {
    if (r.year == year) ids.insert(r.franchise);
  }
  return {ids.begin(), ids.end()};
}

Panel parse_wide_csv(std::istream& in, std::string_view source) {
  const auto table = detail::read_csv(in, source);
  if (table.header.size() < 2) throw Error(Errc::ParseError, std::string(source) + ": need a year column and at least one series");
  std::vector<int> years;
  std::vector<std::vector<std::optional<double>>> cols(table.header.size() - 1);
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto y = number_at(table, r, 0, source);
    if (!y || *y != std::floor(*y)) bad_cell(source, table.lines[r], table.header[0], "time label must be an integer");
    if (!years.empty() && static_cast<int>(*y) <= years.back()) {
      bad_cell(source, table.lines[r], table.header[0], "time labels must increase");
    }
    years.push_back(static_cast<int>(*y));
    for (std::size_t c = 1; c < table.header.size(); ++c) cols[c - 1].push_back(number_at(table, r, c, source));
  }
  if (years.empty()) throw Error(Errc::ParseError, std::string(source) + ": no data rows");
  std::vector<std::vector<double>> series;
  for (std::size_t c = 0; c < cols.size(); ++c) {
    try {
      series.push_back(impute_or_throw(years, cols[c]));
    } catch (const Error& e) {
      if (e.code() != Errc::InsufficientData) throw;
      throw Error(Errc::InsufficientData, std::string(source) + ": series " + table.header[c + 1] +
                                              " has fewer than two observed values");
    }
  }
  return build_panel(series, {table.header.begin() + 1, table.header.end()}, years);
}

Panel load_wide_csv(const std::string& path) {
  auto in = open_input(path);
  return parse_wide_csv(in, path);
}

}  // namespace panelcp::baseball
