#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "panelcp/panel.hpp"

namespace panelcp::baseball {

/// Counting statistics of a team season. SO is batter strikeouts, SOA
/// strikeouts by the team's pitchers.
enum class Stat { R, H, HR, BB, SO, SB, AB, RA, HA, HRA, BBA, SOA, Attendance };

inline constexpr std::size_t kStatCount = 13;

/// Column name in the teams file ("HR", "attendance", ...).
std::string_view stat_column(Stat s);

/// Accepts column names in any case plus the aliases K (SO) and ATT.
/// Throws ConfigError.
Stat parse_stat(std::string_view name);

struct TeamSeason {
  int year = 0;
  std::string league;
  std::string team_id;
  std::string franchise;  // canonical franchise id
  std::string name;
  double games = 0.0;
  std::array<std::optional<double>, kStatCount> stats;

  std::optional<double> get(Stat s) const { return stats[static_cast<std::size_t>(s)]; }
};

struct Franchise {
  std::string id;
  std::string canonical;
  std::string label;
  std::string name;
};

/// Historical franchise ids mapped onto the modern franchise.
class FranchiseMap {
 public:
  static FranchiseMap load(const std::string& path);
  static FranchiseMap parse(std::istream& in, std::string_view source);

  const Franchise* find(std::string_view id) const;
  /// Canonical id for a historical id. Throws UnknownFranchise.
  const std::string& canonical(std::string_view id) const;
  /// Canonical id for a user token: an id, a label or a team name, any case.
  /// Throws UnknownFranchise.
  std::string resolve(std::string_view token) const;
  /// Display name of a canonical franchise.
  std::string name_of(std::string_view canonical_id) const;

  std::size_t size() const noexcept { return by_id_.size(); }

 private:
  std::map<std::string, Franchise, std::less<>> by_id_;
};

/// Parses a Lahman-style teams file. Empty cells are missing values; ids are
/// normalized through `map`. Throws ParseError naming row and column, or
/// UnknownFranchise.
std::vector<TeamSeason> parse_teams_csv(std::istream& in, const FranchiseMap& map,
                                        std::string_view source = "<input>");
std::vector<TeamSeason> load_teams_csv(const std::string& path, const FranchiseMap& map);

enum class RecipeKind { LeagueAggregate, PerStatistic, PerTeam };

struct PanelRecipe {
  RecipeKind kind = RecipeKind::LeagueAggregate;
  int first_year = 1900;  // 0 = first season of the franchise (per-team)
  int last_year = 2020;
  std::vector<Stat> stats;
  std::vector<std::string> franchises;

  /// HR, SO, BB and SB per game, 1900-2020.
  static PanelRecipe league();
  /// One statistic over the sixteen franchises of the 1901-2020 league.
  static PanelRecipe per_statistic(Stat stat);
  /// Ten scoring and prevention statistics over a franchise's existence.
  static PanelRecipe per_team(std::string franchise);
};

/// The sixteen franchises present in every season 1901-2020, by label.
const std::vector<std::string>& fixed_franchises();

/// League panel: each year's unweighted mean over teams of the per-game
/// rate, imputed, then standardized per statistic. Throws MissingYears.
Panel build_league_panel(const std::vector<TeamSeason>& rows,
                         const PanelRecipe& recipe = PanelRecipe::league());

/// One row per franchise of the raw per-game rate of `recipe.stats[0]`,
/// imputed. Throws MissingFranchiseYear.
Panel build_stat_panel(const std::vector<TeamSeason>& rows, const PanelRecipe& recipe);

/// One row per statistic: the franchise's per-game rate as a z-score against
/// every team of the same season. Statistics that cannot be imputed are
/// dropped with a warning. Throws UnknownFranchise or FranchiseTooShort.
Panel build_team_panel(const std::vector<TeamSeason>& rows, const PanelRecipe& recipe,
                       int min_seg = 5);

/// Canonical ids of franchises with a season in `year`, sorted.
std::vector<std::string> franchises_in(const std::vector<TeamSeason>& rows, int year);

/// Wide panel file: a year column followed by one column per series; empty
/// cells are imputed per series. Throws ParseError or InsufficientData.
Panel parse_wide_csv(std::istream& in, std::string_view source = "<input>");
Panel load_wide_csv(const std::string& path);

}  // namespace panelcp::baseball
