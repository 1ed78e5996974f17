#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ceeds/config.hpp"
#include "ceeds/csv.hpp"
#include "ceeds/error.hpp"
#include "ceeds/experiment.hpp"
#include "ceeds/plot.hpp"
#include "doctest.h"

using namespace ceeds;
using namespace ceeds::harness;
namespace fs = std::filesystem;

namespace {

ExperimentConfig short_config() {
  ExperimentConfig c;
  c.total_samples = 400;
  c.analysis_cutoff = 240;
  c.hold_samples = 10;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("ceeds_unit_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("config text parsing and overrides") {
  const auto c = parse_config(
      "# trial\n"
      "waveform = 0*45,ramp(50,0,-2)\n"
      "\n"
      "km = 0.5   # half strength\n"
      "tau = 0.2\n"
      "integral_limit = 1000\n"
      "seed = 18446744073709551615\n");
  CHECK(c.waveform == "0*45,ramp(50,0,-2)");
  CHECK(c.km == 0.5);
  CHECK(c.plant.tau == 0.2);
  CHECK(c.integral_limit == 1000.0);
  CHECK(c.seed == 18446744073709551615ULL);
  CHECK(c.window_length == 35);

  for (const char* bad : {"nonsense = 1", "km = x", "km", "window_length = -3", "seed = 1.5"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_config(bad), Error);
  }
}

TEST_CASE("config key-values round trip") {
  ExperimentConfig c;
  c.km = 0.1;
  c.plant.noise_sigma = 1.0 / 3.0;
  c.integral_limit = 123.25;
  std::string text;
  for (const auto& [k, v] : c.to_key_values()) text += k + " = " + v + "\n";
  const auto back = parse_config(text);
  CHECK(back.to_key_values() == c.to_key_values());
  CHECK(back.plant.noise_sigma == c.plant.noise_sigma);

  ExperimentConfig automatic;
  std::string auto_text;
  for (const auto& [k, v] : automatic.to_key_values()) auto_text += k + " = " + v + "\n";
  CHECK_FALSE(parse_config(auto_text).integral_limit.has_value());
}

TEST_CASE("config invariants") {
  ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  c.total_samples = 640;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.loop_ms = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.waveform = "ramp(1,2,0)";
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_THROWS_AS(run_experiment(c), Error);
}

TEST_CASE("format real is shortest round trip") {
  CHECK(format_real(0.1) == "0.1");
  CHECK(format_real(400) == "400");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("error reduction definition") {
  const std::vector<double> base{-50, 30, -20};
  const std::vector<double> ceeds{-10, 10, -7};
  CHECK(error_reduction(base, ceeds, 0) == doctest::Approx(73.0).epsilon(1e-12));
  CHECK(error_reduction(base, base, 0) == 0.0);
  CHECK(error_reduction(base, ceeds, 1) == doctest::Approx(66.0).epsilon(1e-12));
  const std::vector<double> worse{-100, 0, 0};
  CHECK(error_reduction(base, worse, 0) == 0.0);
  const std::vector<double> zero(3, 0.0);
  try {
    error_reduction(zero, ceeds, 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kUndefinedMetric);
  }
  CHECK_THROWS_AS(error_reduction(base, ceeds, 3), Error);
}

TEST_CASE("calibration recovers the plant gain") {
  const auto pts = calibrate(ExperimentConfig{});
  CHECK(pts.size() == 11);
  const auto tf = control::fit_transfer(pts);
  CHECK(std::abs(tf.slope() - 2.0) < 0.02);
  CHECK(std::abs(tf.intercept()) < 2.0);
  CHECK(tf.duty_max() == 500.0);
}

TEST_CASE("paired run structure") {
  const auto cfg = short_config();
  const auto r = run_experiment(cfg);
  REQUIRE(r.baseline.records.size() == cfg.total_samples);
  REQUIRE(r.ceeds.records.size() == cfg.total_samples);
  for (std::size_t t = 0; t < cfg.analysis_cutoff; ++t) {
    CHECK(r.baseline.records[t] == r.ceeds.records[t]);
  }
  const std::size_t apply_at = cfg.analysis_cutoff + cfg.hold_samples;
  CHECK(r.ceeds.records[apply_at - 1].phase == control::Phase::kHold);
  CHECK(r.ceeds.records[apply_at].phase == control::Phase::kApply);
  REQUIRE(r.ceeds.chosen);
  CHECK(r.ceeds.chosen->modal_period() == 80);
  for (const auto& rec : r.ceeds.records) {
    CHECK(rec.time_ms == static_cast<long long>(rec.sample_index) * cfg.loop_ms);
    if (rec.phase != control::Phase::kApply) CHECK(rec.cancellation_rpm == 0.0);
  }
  CHECK(error_reduction(r.baseline, r.ceeds, cfg.analysis_cutoff) > 30.0);
}

TEST_CASE("disturbance-free runs settle to zero error") {
  auto cfg = short_config();
  cfg.waveform = "0*10";
  cfg.plant.noise_sigma = 0.0;
  const auto r = run_experiment(cfg);
  CHECK(std::abs(r.baseline.records.back().error) < 0.5);
  CHECK(std::abs(r.ceeds.records.back().error) < 0.5);
}

TEST_CASE("csv schema and round trip") {
  const auto cfg = short_config();
  const auto r = run_experiment(cfg);
  const std::string text = to_csv(r.ceeds);
  std::istringstream lines(text);
  std::string line;
  std::size_t rows = 0;
  bool seen_columns = false;
  while (std::getline(lines, line)) {
    if (line.starts_with("#")) {
      CHECK_FALSE(seen_columns);
      continue;
    }
    if (!seen_columns) {
      CHECK(line == kCsvColumns);
      seen_columns = true;
      continue;
    }
    ++rows;
  }
  CHECK(rows == cfg.total_samples);

  const auto back = parse_csv(text);
  CHECK(back.header == r.ceeds.header);
  REQUIRE(back.chosen);
  CHECK(back.chosen->offset == r.ceeds.chosen->offset);
  CHECK(back.chosen->modal_period() == r.ceeds.chosen->modal_period());
  REQUIRE(back.records.size() == r.ceeds.records.size());
  for (std::size_t i = 0; i < back.records.size(); ++i) {
    CHECK(back.records[i].phase == r.ceeds.records[i].phase);
    CHECK(std::abs(back.records[i].error - r.ceeds.records[i].error) <=
          1e-5 * std::max(1.0, std::abs(r.ceeds.records[i].error)));
  }
  const auto base_back = parse_csv(to_csv(r.baseline));
  CHECK(error_reduction(base_back, back, cfg.analysis_cutoff) ==
        doctest::Approx(error_reduction(r.baseline, r.ceeds, cfg.analysis_cutoff)).epsilon(1e-4));
}

TEST_CASE("three-sample log writes three rows") {
  ExperimentLog log;
  log.header = {{"seed", "1"}};
  for (std::size_t i = 0; i < 3; ++i) {
    SampleRecord rec;
    rec.sample_index = i;
    rec.time_ms = static_cast<long long>(50 * i);
    rec.setpoint_rpm = 400;
    rec.measured_rpm = 399.5 - static_cast<double>(i);
    rec.error = rec.measured_rpm - 400;
    log.records.push_back(rec);
  }
  const auto text = to_csv(log);
  CHECK(text ==
        "# seed=1\n"
        "# chosen=none\n" +
            std::string(kCsvColumns) +
            "\n"
            "0,0,collect,400,399.5,-0.5,0,0,0\n"
            "1,50,collect,400,398.5,-1.5,0,0,0\n"
            "2,100,collect,400,397.5,-2.5,0,0,0\n");
  const auto dir = scratch_dir("csv");
  write_csv(log, dir / "log.csv");
  CHECK(slurp(dir / "log.csv") == text);
  CHECK(read_csv(dir / "log.csv").records == parse_csv(text).records);
  CHECK_THROWS_AS(write_csv(log, dir / "missing" / "deeper" / "log.csv"), Error);
}

TEST_CASE("csv parse errors") {
  CHECK_THROWS_AS(parse_csv("not,a,csv\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvColumns) + "\n0,0,dance,1,2,3,4,5,6\n"), Error);
}

TEST_CASE("summary is deterministic and names both reference points") {
  const auto cfg = short_config();
  const auto a = summarize(cfg, run_experiment(cfg));
  const auto b = summarize(cfg, run_experiment(cfg));
  CHECK(a == b);
  CHECK(a.find("reduction_from_55:") != std::string::npos);
  CHECK(a.find("reduction_from_240:") != std::string::npos);
  CHECK(a.find("modal_period 80") != std::string::npos);
}

TEST_CASE("plots") {
  const auto cfg = short_config();
  const auto r = run_experiment(cfg);
  const auto dir = scratch_dir("plots");
  const auto files = render_plots(r.baseline, r.ceeds, r.ceeds.chosen, cfg.analysis_cutoff, dir);
  const auto overlay = slurp(files.error_overlay);
  CHECK(overlay.starts_with("<svg"));
  CHECK(overlay.find("</svg>") != std::string::npos);
  const auto cycle = slurp(files.cancellation_cycle);
  CHECK(cycle.find("no candidate") == std::string::npos);

  const auto none = render_plots(r.baseline, r.baseline, std::nullopt, cfg.analysis_cutoff, dir);
  CHECK(slurp(none.cancellation_cycle).find("no candidate") != std::string::npos);

  const Series s{"e", "#000", {1.0, -2.0, 3.0}};
  const auto svg = render_svg_chart({.title = "a<b&c"}, std::span<const Series>(&s, 1));
  CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
}
