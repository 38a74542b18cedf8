#include "panelcp/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "panelcp/error.hpp"

namespace panelcp {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(Errc::MalformedResult, what); }

ThresholdMethod parse_threshold_method(const std::string& s) {
  if (s == "bootstrap") return ThresholdMethod::Bootstrap;
  if (s == "deterministic") return ThresholdMethod::Deterministic;
  if (s == "fixed") return ThresholdMethod::Fixed;
  malformed("unknown threshold method '" + s + "'");
}

ChangeKind parse_kind(const std::string& s) {
  if (s == "mean") return ChangeKind::Mean;
  if (s == "variance") return ChangeKind::Variance;
  malformed("unknown change kind '" + s + "'");
}

std::uint64_t parse_hex(const std::string& s) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(s, &used, 16);
  } catch (const std::exception&) {
    malformed("bad fingerprint '" + s + "'");
  }
  if (used != s.size()) malformed("bad fingerprint '" + s + "'");
  return v;
}

json spec_json(const ThresholdSpec& s) {
  return {{"method", to_string(s.method)}, {"threshold", s.threshold}, {"alpha", s.alpha},
          {"n_reps", s.n_reps},           {"n_factors", s.n_factors}, {"block_length", s.block_length},
          {"seed", s.seed},               {"C", s.C}};
}

ThresholdSpec spec_from(const json& j) {
  ThresholdSpec s;
  s.method = parse_threshold_method(j.at("method").get<std::string>());
  s.threshold = j.at("threshold").get<double>();
  s.alpha = j.at("alpha").get<double>();
  s.n_reps = j.at("n_reps").get<std::size_t>();
  s.n_factors = j.at("n_factors").get<std::size_t>();
  s.block_length = j.at("block_length").get<std::size_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.C = j.at("C").get<double>();
  return s;
}

json thresholds_json(const AnalysisThresholds& t) {
  return {{"mean", spec_json(t.mean)}, {"variance", t.variance ? spec_json(*t.variance) : json(nullptr)}};
}

AnalysisThresholds thresholds_from(const json& j) {
  AnalysisThresholds t;
  t.mean = spec_from(j.at("mean"));
  if (!j.at("variance").is_null()) t.variance = spec_from(j.at("variance"));
  return t;
}

json segmentation_json(const SegmentationConfig& c) {
  return {{"phi", c.dc.phi},
          {"min_seg", c.min_seg},
          {"scale", to_string(c.scale)},
          {"rescale_per_segment", c.rescale_per_segment}};
}

SegmentationConfig segmentation_from(const json& j) {
  SegmentationConfig c;
  c.dc.phi = j.at("phi").get<double>();
  c.min_seg = j.at("min_seg").get<int>();
  c.scale = parse_scale_method(j.at("scale").get<std::string>());
  c.rescale_per_segment = j.at("rescale_per_segment").get<bool>();
  return c;
}

json config_json(const AnalysisConfig& c) {
  const auto& r = c.threshold;
  return {{"segmentation", segmentation_json(c.segmentation)},
          {"threshold",
           {{"method", to_string(r.method)},
            {"alpha", r.alpha},
            {"n_reps", r.n_reps},
            {"n_factors", r.n_factors},
            {"C", r.C},
            {"pilot_C", r.pilot_C}}},
          {"seed", c.seed},
          {"scales", c.scales.scales},
          {"detect_variance", c.detect_variance},
          {"variance_scale", to_string(c.variance_scale)}};
}

AnalysisConfig config_from(const json& j) {
  AnalysisConfig c;
  c.segmentation = segmentation_from(j.at("segmentation"));
  const json& r = j.at("threshold");
  c.threshold.method = parse_threshold_method(r.at("method").get<std::string>());
  c.threshold.alpha = r.at("alpha").get<double>();
  c.threshold.n_reps = r.at("n_reps").get<std::size_t>();
  c.threshold.n_factors = r.at("n_factors").get<std::size_t>();
  c.threshold.C = r.at("C").get<double>();
  c.threshold.pilot_C = r.at("pilot_C").get<double>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.scales.scales = j.at("scales").get<std::vector<int>>();
  c.detect_variance = j.at("detect_variance").get<bool>();
  c.variance_scale = parse_scale_method(j.at("variance_scale").get<std::string>());
  return c;
}

json run_json(const RunInfo& run) {
  return {{"command", run.command},
          {"recipe", run.recipe},
          {"input", run.input},
          {"franchise_map", run.franchise_map},
          {"config", config_json(run.config)}};
}

RunInfo run_from(const json& j) {
  return {j.at("command").get<std::string>(), j.at("recipe").get<std::string>(),
          j.at("input").get<std::string>(), j.at("franchise_map").get<std::string>(),
          config_from(j.at("config"))};
}

json panel_json(const Panel& p) {
  json rows = json::array();
  for (std::size_t j = 0; j < p.n(); ++j) {
    const auto r = p.row(j);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"fingerprint", fingerprint_hex(p.fingerprint())},
          {"series", p.series_ids()},
          {"time", p.time_index()},
          {"values", std::move(rows)}};
}

Panel panel_from(const json& j) {
  Panel p;
  try {
    p = build_panel(j.at("values").get<std::vector<std::vector<double>>>(),
                    j.at("series").get<std::vector<std::string>>(), j.at("time").get<std::vector<int>>());
  } catch (const Error& e) {
    malformed(std::string("embedded panel is invalid: ") + e.what());
  }
  if (p.fingerprint() != parse_hex(j.at("fingerprint").get<std::string>())) {
    malformed("embedded panel does not match its fingerprint");
  }
  return p;
}

json detection_json(const DetectionResult& d, const Panel& labels) {
  json cps = json::array();
  for (const auto& cp : d.change_points) {
    cps.push_back({{"year", cp.time_label},
                   {"index", cp.index},
                   {"kind", to_string(cp.kind)},
                   {"dc_value", cp.dc_value},
                   {"threshold", cp.threshold},
                   {"segment", {cp.seg_start, cp.seg_end}},
                   {"m_star", cp.m_star}});
  }
  json segs = json::array();
  for (const auto& s : d.segments) {
    segs.push_back({{"start", s.start},
                    {"end", s.end},
                    {"first_year", labels.time_label(s.start)},
                    {"last_year", labels.time_label(s.end)}});
  }
  return {{"threshold", d.threshold},
          {"config", segmentation_json(d.config)},
          {"scales", d.scales},
          {"panel_fingerprint", fingerprint_hex(d.panel_fingerprint)},
          {"change_points", std::move(cps)},
          {"segments", std::move(segs)}};
}

DetectionResult detection_from(const json& j) {
  DetectionResult d;
  d.threshold = j.at("threshold").get<double>();
  d.config = segmentation_from(j.at("config"));
  d.scales = j.at("scales").get<std::vector<double>>();
  d.panel_fingerprint = parse_hex(j.at("panel_fingerprint").get<std::string>());
  for (const auto& c : j.at("change_points")) {
    const auto seg = c.at("segment").get<std::vector<int>>();
    if (seg.size() != 2) malformed("change point segment must hold two indices");
    d.change_points.push_back({c.at("year").get<int>(), c.at("index").get<int>(),
                               parse_kind(c.at("kind").get<std::string>()), c.at("dc_value").get<double>(),
                               c.at("threshold").get<double>(), seg[0], seg[1],
                               c.at("m_star").get<std::size_t>()});
  }
  for (const auto& s : j.at("segments")) d.segments.push_back({s.at("start").get<int>(), s.at("end").get<int>()});
  return d;
}

json parse_document(std::string_view text, std::string_view format) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    malformed(std::string("not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format) {
    malformed("expected a " + std::string(format) + " document");
  }
  if (j.value("version", 0) != kFormatVersion) malformed("unsupported document version");
  return j;
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    malformed(e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::MalformedResult) throw;
    malformed(e.what());
  }
}

}  // namespace

const ThresholdEntry& ThresholdDocument::at(std::string_view label) const {
  for (const auto& e : entries) {
    if (e.label == label) return e;
  }
  throw Error(Errc::ConfigError, "threshold file has no entry for '" + std::string(label) + "'");
}

std::string dump_result(const ResultDocument& doc) {
  json analyses = json::array();
  for (const auto& a : doc.analyses) {
    analyses.push_back({{"label", a.label},
                        {"panel", panel_json(a.panel)},
                        {"thresholds", thresholds_json(a.thresholds)},
                        {"mean", detection_json(a.mean, a.panel)},
                        {"variance", a.variance ? detection_json(*a.variance, a.panel) : json(nullptr)}});
  }
  const json j = {{"format", kResultFormat},
                  {"version", kFormatVersion},
                  {"run", run_json(doc.run)},
                  {"analyses", std::move(analyses)}};
  return j.dump(2) + "\n";
}

ResultDocument parse_result(std::string_view text) {
  const json j = parse_document(text, kResultFormat);
  return guarded([&] {
    ResultDocument doc;
    doc.run = run_from(j.at("run"));
    for (const auto& a : j.at("analyses")) {
      Analysis an;
      an.label = a.at("label").get<std::string>();
      an.panel = panel_from(a.at("panel"));
      an.thresholds = thresholds_from(a.at("thresholds"));
      an.mean = detection_from(a.at("mean"));
      if (an.mean.panel_fingerprint != an.panel.fingerprint()) {
        malformed(an.label + ": mean result refers to another panel");
      }
      if (!a.at("variance").is_null()) an.variance = detection_from(a.at("variance"));
      for (const auto* d : {&an.mean, an.variance ? &*an.variance : nullptr}) {
        if (!d) continue;
        for (const auto& cp : d->change_points) {
          if (cp.index < 1 || cp.index >= static_cast<int>(an.panel.T())) {
            malformed(an.label + ": change point index out of range");
          }
        }
      }
      doc.analyses.push_back(std::move(an));
    }
    return doc;
  });
}

std::string dump_thresholds(const ThresholdDocument& doc) {
  json entries = json::array();
  for (const auto& e : doc.entries) {
    entries.push_back({{"label", e.label},
                       {"panel_fingerprint", fingerprint_hex(e.panel_fingerprint)},
                       {"thresholds", thresholds_json(e.thresholds)}});
  }
  const json j = {{"format", kThresholdFormat},
                  {"version", kFormatVersion},
                  {"run", run_json(doc.run)},
                  {"entries", std::move(entries)}};
  return j.dump(2) + "\n";
}

ThresholdDocument parse_thresholds(std::string_view text) {
  const json j = parse_document(text, kThresholdFormat);
  return guarded([&] {
    ThresholdDocument doc;
    doc.run = run_from(j.at("run"));
    for (const auto& e : j.at("entries")) {
      doc.entries.push_back({e.at("label").get<std::string>(),
                             parse_hex(e.at("panel_fingerprint").get<std::string>()),
                             thresholds_from(e.at("thresholds"))});
    }
    return doc;
  });
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(Errc::IoError, "cannot read " + path);
  return ss.str();
}

void write_file_atomic(const std::string& path, std::string_view content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot create " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(Errc::IoError, "cannot move " + tmp + " to " + path);
  }
}

}  // namespace panelcp
