#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "panelcp/analysis.hpp"
#include "panelcp/baseball.hpp"
#include "panelcp/error.hpp"
#include "panelcp/io.hpp"
#include "panelcp/plot.hpp"

#ifndef PANELCP_FRANCHISE_MAP
#define PANELCP_FRANCHISE_MAP "data/franchises.csv"
#endif

namespace fs = std::filesystem;
using namespace panelcp;

namespace {

enum Exit { kOk = 0, kUsage = 2, kIngest = 3, kNumeric = 4, kIo = 5 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code(Errc code) {
  switch (code) {
    case Errc::ParseError:
    case Errc::UnknownFranchise:
    case Errc::MissingYears:
    case Errc::MissingFranchiseYear:
    case Errc::FranchiseTooShort:
    case Errc::ZeroGames:
    case Errc::MisalignedSeries:
    case Errc::DegenerateSeason:
    case Errc::InsufficientData:
    case Errc::MalformedResult:
      return kIngest;
    case Errc::IoError:
      return kIo;
    default:
      return kNumeric;
  }
}

struct Options {
  std::string input;
  std::string franchises = PANELCP_FRANCHISE_MAP;
  std::string recipe = "league";
  double phi = 0.5;
  int min_seg = 5;
  std::string threshold = "bootstrap";
  double alpha = 0.05;
  std::size_t boot_reps = 500;
  std::size_t factors = 0;
  std::uint64_t seed = 1;
  std::string scales = "-1,-2";
  bool no_variance = false;
  std::string threshold_file;
  std::string out = ".";
  bool plots = false;
  std::string result;
};

struct Recipe {
  enum class Kind { League, Stat, Team, Generic } kind = Kind::League;
  std::string arg;
};

Recipe parse_recipe(const std::string& text) {
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "league" && colon == std::string::npos) return {Recipe::Kind::League, ""};
  if (head == "generic" && colon == std::string::npos) return {Recipe::Kind::Generic, ""};
  if (head == "stat" && !arg.empty()) {
    try {
      baseball::parse_stat(arg);
    } catch (const Error& e) {
      throw UsageError(e.what());
    }
    return {Recipe::Kind::Stat, arg};
  }
  if (head == "team" && !arg.empty()) return {Recipe::Kind::Team, arg};
  throw UsageError("--recipe must be league, stat:<name>, team:<franchise> or generic, got '" + text + "'");
}

std::vector<int> parse_scales(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("--scales: bad entry '" + tok + "'");
    }
    if (used != tok.size() || v == 0) throw UsageError("--scales: bad entry '" + tok + "'");
    out.push_back(v < 0 ? v : -v);
  }
  if (out.empty()) throw UsageError("--scales: no scales given");
  return out;
}

AnalysisConfig make_config(const Options& o) {
  AnalysisConfig c;
  c.segmentation.dc.phi = o.phi;
  c.segmentation.min_seg = o.min_seg;
  c.seed = o.seed;
  c.scales.scales = parse_scales(o.scales);
  c.detect_variance = !o.no_variance;
  c.threshold.alpha = o.alpha;
  c.threshold.n_reps = o.boot_reps;
  c.threshold.n_factors = o.factors;
  if (o.threshold == "bootstrap") {
    c.threshold.method = ThresholdMethod::Bootstrap;
  } else if (o.threshold.rfind("fixed:", 0) == 0) {
    c.threshold.method = ThresholdMethod::Deterministic;
    std::size_t used = 0;
    const std::string arg = o.threshold.substr(6);
    try {
      c.threshold.C = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size() || !(c.threshold.C > 0.0) || !std::isfinite(c.threshold.C)) {
      throw UsageError("--threshold fixed:<C> needs a positive constant, got '" + arg + "'");
    }
  } else {
    throw UsageError("--threshold must be bootstrap or fixed:<C>, got '" + o.threshold + "'");
  }
  try {
    c.segmentation.validate();
    c.threshold.validate();
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  return c;
}

struct Loaded {
  std::vector<std::pair<std::string, Panel>> panels;
  std::vector<std::string> names;
};

Loaded load_panels(const Options& o, const Recipe& r, int min_seg) {
  Loaded out;
  if (r.kind == Recipe::Kind::Generic) {
    out.panels.emplace_back(fs::path(o.input).stem().string(), baseball::load_wide_csv(o.input));
    out.names.push_back(out.panels.back().first);
    return out;
  }
  const auto map = baseball::FranchiseMap::load(o.franchises);
  const auto rows = baseball::load_teams_csv(o.input, map);
  switch (r.kind) {
    case Recipe::Kind::League:
      out.panels.emplace_back("league", baseball::build_league_panel(rows));
      out.names.emplace_back("league");
      break;
    case Recipe::Kind::Stat: {
      const auto stat = baseball::parse_stat(r.arg);
      const std::string label = "stat:" + std::string(baseball::stat_column(stat));
      out.panels.emplace_back(label, baseball::build_stat_panel(rows, baseball::PanelRecipe::per_statistic(stat)));
      out.names.push_back(label);
      break;
    }
    case Recipe::Kind::Team: {
      const int last = baseball::PanelRecipe::per_team("").last_year;
      const auto ids = r.arg == "all" ? baseball::franchises_in(rows, last)
                                      : std::vector<std::string>{map.resolve(r.arg)};
      for (const auto& id : ids) {
        out.panels.emplace_back(id, baseball::build_team_panel(rows, baseball::PanelRecipe::per_team(id), min_seg));
        out.names.push_back(map.name_of(id));
      }
      break;
    }
    case Recipe::Kind::Generic:
      break;
  }
  return out;
}

std::string file_stem(const std::string& label) {
  std::string s = label;
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
  }
  return s;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(Errc::IoError, "cannot create directory " + dir);
}

void write_plots(const ResultDocument& doc, const std::string& dir, const std::vector<std::string>& names) {
  ensure_dir(dir);
  for (const auto& a : doc.analyses) {
    write_file_atomic((fs::path(dir) / (file_stem(a.label) + ".svg")).string(), plot_panel_svg(a));
  }
  if (doc.run.recipe.rfind("team:", 0) == 0) {
    write_file_atomic((fs::path(dir) / "timeline.svg").string(), plot_timeline_svg(doc.analyses, names));
  }
}

void print_summary(const Analysis& a) {
  std::cout << a.label << " (" << a.panel.n() << " x " << a.panel.T() << ")\n";
  std::cout << "  mean threshold " << a.thresholds.mean.threshold << ":";
  for (int y : a.mean.years()) std::cout << ' ' << y;
  std::cout << '\n';
  if (a.variance) {
    std::cout << "  variance threshold " << a.thresholds.variance->threshold << ":";
    for (int y : a.variance->years()) std::cout << ' ' << y;
    std::cout << '\n';
  }
}

RunInfo run_info(const std::string& command, const Options& o, const AnalysisConfig& config) {
  const Recipe r = parse_recipe(o.recipe);
  return {command, o.recipe, o.input, r.kind == Recipe::Kind::Generic ? "" : o.franchises, config};
}

int cmd_detect(const Options& o, std::string& stage) {
  stage = "arguments";
  const Recipe recipe = parse_recipe(o.recipe);
  const AnalysisConfig config = make_config(o);

  std::optional<ThresholdDocument> given;
  if (!o.threshold_file.empty()) {
    stage = "threshold file";
    given = parse_thresholds(read_text_file(o.threshold_file));
  }
  stage = "ingest";
  const Loaded loaded = load_panels(o, recipe, config.segmentation.min_seg);

  ResultDocument doc;
  doc.run = run_info("detect", o, config);
  for (const auto& [label, panel] : loaded.panels) {
    stage = "detect " + label;
    std::optional<AnalysisThresholds> thr;
    if (given) {
      const ThresholdEntry& e = given->at(label);
      if (e.panel_fingerprint != panel.fingerprint()) {
        throw Error(Errc::FingerprintMismatch, "thresholds for '" + label + "' were calibrated on another panel");
      }
      thr = e.thresholds;
    }
    doc.analyses.push_back(analyze(label, panel, config, thr));
    print_summary(doc.analyses.back());
  }

  stage = "write";
  ensure_dir(o.out);
  const std::string path = (fs::path(o.out) / "result.json").string();
  write_file_atomic(path, dump_result(doc));
  std::cout << "wrote " << path << '\n';
  if (o.plots) {
    stage = "plot";
    write_plots(doc, (fs::path(o.out) / "plots").string(), loaded.names);
  }
  return kOk;
}

int cmd_calibrate(const Options& o, std::string& stage) {
  stage = "arguments";
  const Recipe recipe = parse_recipe(o.recipe);
  const AnalysisConfig config = make_config(o);
  if (config.threshold.method != ThresholdMethod::Bootstrap) {
    throw UsageError("calibrate needs --threshold bootstrap");
  }
  stage = "ingest";
  const Loaded loaded = load_panels(o, recipe, config.segmentation.min_seg);

  ThresholdDocument doc;
  doc.run = run_info("calibrate", o, config);
  for (const auto& [label, panel] : loaded.panels) {
    stage = "calibrate " + label;
    const AnalysisThresholds thr = calibrate_analysis(panel, config);
    doc.entries.push_back({label, panel.fingerprint(), thr});
    std::cout << label << ": mean " << thr.mean.threshold;
    if (thr.variance) std::cout << ", variance " << thr.variance->threshold;
    std::cout << '\n';
  }
  stage = "write";
  ensure_dir(o.out);
  const std::string path = (fs::path(o.out) / "thresholds.json").string();
  write_file_atomic(path, dump_thresholds(doc));
  std::cout << "wrote " << path << '\n';
  return kOk;
}

int cmd_plot(const Options& o, std::string& stage) {
  stage = "read result";
  const ResultDocument doc = parse_result(read_text_file(o.result));
  std::vector<std::string> names;
  if (doc.run.recipe.rfind("team:", 0) == 0 && !doc.run.franchise_map.empty()) {
    stage = "franchise map";
    const auto map = baseball::FranchiseMap::load(doc.run.franchise_map);
    for (const auto& a : doc.analyses) names.push_back(map.name_of(a.label));
  }
  stage = "plot";
  write_plots(doc, o.out, names);
  std::cout << "wrote plots to " << o.out << '\n';
  return kOk;
}

int cmd_ingest(const Options& o, std::string& stage) {
  stage = "arguments";
  const Recipe recipe = parse_recipe(o.recipe);
  if (o.min_seg < 2) throw UsageError("--min-seg must be at least 2");
  stage = "ingest";
  const Loaded loaded = load_panels(o, recipe, o.min_seg);
  stage = "write";
  ensure_dir(o.out);
  for (const auto& [label, panel] : loaded.panels) {
    std::ostringstream csv;
    csv.precision(17);
    csv << "year";
    for (const auto& id : panel.series_ids()) csv << ',' << id;
    csv << '\n';
    for (int t = 1; t <= static_cast<int>(panel.T()); ++t) {
      csv << panel.time_label(t);
      for (std::size_t j = 0; j < panel.n(); ++j) csv << ',' << panel.at(j, t);
      csv << '\n';
    }
    const std::string path = (fs::path(o.out) / (file_stem(label) + ".csv")).string();
    write_file_atomic(path, csv.str());
    std::cout << "wrote " << path << '\n';
  }
  return kOk;
}

void add_panel_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--input", o.input, "Teams CSV (or wide panel CSV for the generic recipe)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--franchises", o.franchises, "Franchise map CSV")->capture_default_str();
  cmd->add_option("--recipe", o.recipe, "league | stat:<name> | team:<franchise|all> | generic")
      ->capture_default_str();
  cmd->add_option("--min-seg", o.min_seg, "Minimum segment length")->capture_default_str();
}

void add_detection_options(CLI::App* cmd, Options& o) {
  add_panel_options(cmd, o);
  cmd->add_option("--phi", o.phi, "Double CUSUM weight exponent")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  cmd->add_option("--threshold", o.threshold, "bootstrap | fixed:<C>")->capture_default_str();
  cmd->add_option("--alpha", o.alpha, "Bootstrap significance level")
      ->check(CLI::Validator(
          [](std::string& v) -> std::string {
            try {
              const double a = std::stod(v);
              if (a > 0.0 && a < 1.0) return {};
            } catch (const std::exception&) {
            }
            return "alpha must lie strictly between 0 and 1";
          },
          "(0,1)"))
      ->capture_default_str();
  cmd->add_option("--boot-reps", o.boot_reps, "Bootstrap replicates")->check(CLI::Range(100, 1000000))->capture_default_str();
  cmd->add_option("--factors", o.factors, "Factor count (0 = eigenvalue-ratio rule)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--scales", o.scales, "Haar scales, e.g. -1,-2")->capture_default_str();
  cmd->add_flag("--no-variance", o.no_variance, "Skip variance detection");
  cmd->add_option("--out", o.out, "Output directory")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mean and variance change points in panels of time series"};
  app.require_subcommand(1);
  Options o;

  auto* detect = app.add_subcommand("detect", "Detect change points and write result.json");
  add_detection_options(detect, o);
  detect->add_option("--threshold-file", o.threshold_file, "Thresholds written by calibrate")->check(CLI::ExistingFile);
  detect->add_flag("--plots", o.plots, "Also write SVG plots under <out>/plots");

  auto* calibrate = app.add_subcommand("calibrate", "Bootstrap thresholds and write thresholds.json");
  add_detection_options(calibrate, o);

  auto* plot = app.add_subcommand("plot", "Draw SVG plots from a result document");
  plot->add_option("--result", o.result, "result.json from detect")->required()->check(CLI::ExistingFile);
  plot->add_option("--out", o.out, "Output directory")->capture_default_str();

  auto* ingest = app.add_subcommand("ingest", "Build a panel and write it as a wide CSV");
  add_panel_options(ingest, o);
  ingest->add_option("--out", o.out, "Output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  set_warning_handler([](std::string_view m) { std::cerr << "panelcp: warning: " << m << '\n'; });
  std::string stage = "start";
  try {
    if (detect->parsed()) return cmd_detect(o, stage);
    if (calibrate->parsed()) return cmd_calibrate(o, stage);
    if (plot->parsed()) return cmd_plot(o, stage);
    if (ingest->parsed()) return cmd_ingest(o, stage);
  } catch (const UsageError& e) {
    std::cerr << "panelcp: " << stage << ": " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "panelcp: " << stage << ": " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "panelcp: " << stage << ": " << e.what() << '\n';
    return kNumeric;
  }
  return kUsage;
}
