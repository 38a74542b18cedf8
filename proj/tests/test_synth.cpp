#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "panelcp/double_cusum.hpp"
#include "panelcp/preprocess.hpp"
#include "panelcp/synth.hpp"
#include "support.hpp"

using namespace panelcp;
using namespace panelcp::synth;

TEST_SUITE("synth") {
  TEST_CASE("noiseless construction has two levels") {
    PlantedPanelSpec spec;
    spec.n = 3;
    spec.T = 30;
    spec.noise_sd = 0.0;
    spec.mean_breaks = {{12, {1.0, -2.0, 0.5}}};
    const auto pp = gen_piecewise_panel(spec);
    CHECK(pp.mean_truth == std::vector<int>{12});
    for (std::size_t j = 0; j < 3; ++j) {
      for (int t = 1; t <= 30; ++t) CHECK(pp.panel.at(j, t) == (t <= 12 ? 0.0 : spec.mean_breaks[0].jumps[j]));
    }
  }

  TEST_CASE("seeded generation") {
    PlantedPanelSpec spec;
    spec.seed = 99;
    spec.rho = 0.3;
    CHECK(gen_piecewise_panel(spec).panel == gen_piecewise_panel(spec).panel);
    auto other = spec;
    other.seed = 100;
    CHECK(!(gen_piecewise_panel(other).panel == gen_piecewise_panel(spec).panel));
  }

  TEST_CASE("noise level") {
    PlantedPanelSpec spec;
    spec.n = 3;
    spec.T = 10000;
    spec.seed = 5;
    const auto pp = gen_piecewise_panel(spec);
    for (std::size_t j = 0; j < 3; ++j) {
      const double sd = sample_sd(pp.panel.row(j));
      CHECK(sd >= 0.97);
      CHECK(sd <= 1.03);
    }
  }

  TEST_CASE("variance breaks scale the noise") {
    PlantedPanelSpec spec;
    spec.n = 2;
    spec.T = 4000;
    spec.seed = 8;
    spec.variance_breaks = {{2000, {3.0, 0.5}}};
    const auto pp = gen_piecewise_panel(spec);
    const auto r0 = pp.panel.row(0), r1 = pp.panel.row(1);
    CHECK(sample_sd(r0.subspan(2000)) / sample_sd(r0.subspan(0, 2000)) == doctest::Approx(3.0).epsilon(0.08));
    CHECK(sample_sd(r1.subspan(2000)) / sample_sd(r1.subspan(0, 2000)) == doctest::Approx(0.5).epsilon(0.08));
  }

  TEST_CASE("spec validation") {
    PlantedPanelSpec spec;
    spec.mean_breaks = {{40, std::vector<double>(4, 1.0)}, {45, std::vector<double>(4, 1.0)}};
    CHECK_ERRC(spec.validate(), Errc::ConfigError);
    spec.mean_breaks = {{40, std::vector<double>(3, 1.0)}};
    CHECK_ERRC(spec.validate(), Errc::ConfigError);
    spec.mean_breaks.clear();
    spec.variance_breaks = {{40, {1.0, 1.0, 0.0, 1.0}}};
    CHECK_ERRC(spec.validate(), Errc::ConfigError);
    spec.variance_breaks.clear();
    spec.rho = 1.0;
    CHECK_ERRC(spec.validate(), Errc::ConfigError);
  }

  TEST_CASE("spec file format") {
    std::istringstream in(
        "# suite\n"
        "n = 4\n"
        "T = 90\n"
        "noise_sd = 0.5   # trailing comment\n"
        "rho = 0.3\n"
        "seed = 7\n"
        "mean_break = 30 : 2\n"
        "variance_break = 60 : 3 3 1 1\n");
    const auto spec = parse_spec(in);
    CHECK(spec.n == 4);
    CHECK(spec.T == 90);
    CHECK(spec.noise_sd == 0.5);
    CHECK(spec.rho == 0.3);
    CHECK(spec.seed == 7);
    CHECK(spec.mean_breaks[0].jumps == std::vector<double>(4, 2.0));
    CHECK(spec.variance_breaks[0].multipliers == std::vector<double>{3, 3, 1, 1});

    std::istringstream bad("n = 4\nT = ten\n");
    try {
      parse_spec(bad);
      FAIL("expected a parse error");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::ParseError);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream unknown("colour = red\n");
    CHECK_ERRC(parse_spec(unknown), Errc::ParseError);
  }

  TEST_CASE("suite files parse") {
    for (const char* name : {"mean_power", "null", "variance_power", "mean_only", "variance_null"}) {
      CHECK_NOTHROW(load_spec(std::string(PANELCP_SUITE_DIR) + "/" + name + ".spec"));
    }
    CHECK_ERRC(load_spec("/nonexistent/x.spec"), Errc::IoError);
  }

  TEST_CASE("brute force") {
    const Panel c = build_panel({std::vector<double>(20, 1.0), std::vector<double>(20, 3.0)});
    const std::vector<double> unit(2, 1.0);
    const auto r = brute_force_single_change(c, 1, 20, unit, 0.5);
    CHECK(r.value <= 1e-12);

    PlantedPanelSpec spec;
    spec.noise_sd = 0.0;
    spec.T = 50;
    spec.mean_breaks = {{21, std::vector<double>(4, 1.0)}};
    const auto pp = gen_piecewise_panel(spec);
    CHECK(brute_force_single_change(pp.panel, 1, 50, std::vector<double>(4, 1.0), 0.5).b == 21);

    const Panel big = testing::gaussian_panel(8, 1200, 1);
    CHECK_ERRC(brute_force_single_change(big, 1, 1200, std::vector<double>(8, 1.0), 0.5), Errc::InstanceTooLarge);
  }

  TEST_CASE("scoring") {
    auto s = score_detection({40, 80}, {41, 79}, 3);
    CHECK(s.matched == 2);
    CHECK(s.spurious == 0);
    CHECK(s.exact_recovery());
    CHECK(s.localization_errors == std::vector<int>{1, 1});

    s = score_detection({40}, {40, 100}, 3);
    CHECK(s.matched == 1);
    CHECK(s.spurious == 1);
    CHECK(!s.exact_recovery());

    s = score_detection({40, 80}, {}, 3);
    CHECK(s.matched == 0);
    CHECK(s.spurious == 0);
    CHECK(s.unmatched_true == 2);

    s = score_detection({40, 44}, {43}, 3);
    CHECK(s.matched == 1);
    CHECK(s.localization_errors == std::vector<int>{1});
  }

  TEST_CASE("scoring ignores input order") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pos(1, 100);
    for (int i = 0; i < 200; ++i) {
      std::vector<int> truth(4), det(5);
      for (auto& v : truth) v = pos(rng);
      for (auto& v : det) v = pos(rng);
      const auto a = score_detection(truth, det, 3);
      std::shuffle(truth.begin(), truth.end(), rng);
      std::shuffle(det.begin(), det.end(), rng);
      const auto b = score_detection(truth, det, 3);
      CHECK(a.matched == b.matched);
      CHECK(a.spurious == b.spurious);
      CHECK(a.localization_errors == b.localization_errors);
    }
  }
}
