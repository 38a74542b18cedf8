#include <doctest.h>

#include <limits>

#include "panelcp/plot.hpp"
#include "panelcp/synth.hpp"
#include "support.hpp"

using namespace panelcp;

namespace {

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

Analysis sample(double threshold) {
  synth::PlantedPanelSpec spec;
  spec.n = 4;
  spec.T = 80;
  spec.seed = 12;
  spec.mean_breaks = {{40, std::vector<double>(4, 3.0)}};
  AnalysisConfig cfg;
  cfg.detect_variance = true;
  AnalysisThresholds thr;
  thr.mean.method = ThresholdMethod::Fixed;
  thr.mean.threshold = threshold;
  thr.variance = thr.mean;
  thr.variance->threshold = std::numeric_limits<double>::max();
  return analyze("sample", synth::gen_piecewise_panel(spec).panel, cfg, thr);
}

}  // namespace

TEST_SUITE("plot") {
  TEST_CASE("markers follow change points") {
    testing::QuietWarnings quiet;
    const Analysis a = sample(3.0);
    REQUIRE(a.mean.change_points.size() == 1);
    const std::string svg = plot_panel_svg(a);
    CHECK(svg.rfind("<svg", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(count(svg, "<polyline") == 4);
    // One marker per panel cell plus the legend swatch.
    CHECK(count(svg, "stroke=\"#b03a2e\"") == 4 + 1);
    CHECK(count(svg, "stroke-dasharray") == 1);

    Analysis with_var = a;
    with_var.variance->change_points.push_back({60, 60, ChangeKind::Variance, 5.0, 4.0, 41, 80, 2});
    CHECK(count(plot_panel_svg(with_var), "stroke-dasharray") == 4 + 1);
  }

  TEST_CASE("no change points, no markers") {
    testing::QuietWarnings quiet;
    const Analysis a = sample(std::numeric_limits<double>::max());
    CHECK(a.mean.change_points.empty());
    const std::string svg = plot_panel_svg(a);
    CHECK(count(svg, "stroke=\"#b03a2e\"") == 1);
    CHECK(count(svg, "stroke-dasharray") == 1);
  }

  TEST_CASE("deterministic bytes") {
    testing::QuietWarnings quiet;
    const Analysis a = sample(3.0);
    CHECK(plot_panel_svg(a) == plot_panel_svg(sample(3.0)));
    const std::vector<Analysis> all{a, sample(std::numeric_limits<double>::max())};
    const std::string t = plot_timeline_svg(all, {"first", "second"});
    CHECK(t == plot_timeline_svg(all, {"first", "second"}));
    CHECK(t.find(">first</text>") != std::string::npos);
    CHECK(count(t, "stroke=\"#b03a2e\"") == 1 + 1);
    CHECK_ERRC(plot_timeline_svg({}), Errc::MalformedResult);
    CHECK_ERRC(plot_timeline_svg(all, {"only one"}), Errc::ConfigError);
  }

  TEST_CASE("text is escaped") {
    testing::QuietWarnings quiet;
    Analysis a = sample(3.0);
    a.label = "R&D <x>";
    CHECK(plot_panel_svg(a).find("R&amp;D &lt;x&gt;") != std::string::npos);
  }
}
