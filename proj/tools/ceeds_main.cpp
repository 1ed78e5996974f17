// ceeds: run paired PIDF / CEEDS experiments on the simulated motor.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ceeds/config.hpp"
#include "ceeds/control.hpp"
#include "ceeds/csv.hpp"
#include "ceeds/error.hpp"
#include "ceeds/experiment.hpp"
#include "ceeds/plot.hpp"

namespace {

using ceeds::harness::ExperimentConfig;

struct CommonOptions {
  std::string config_path;
  std::optional<std::string> waveform;
  std::optional<double> km;
  std::optional<std::uint64_t> seed;
  std::string seeds;  // "a..b"
  std::optional<std::string> output;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config_path, "key = value experiment file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--waveform", o.waveform, "interference waveform, e.g. \"0*60,50*20\"");
  cmd->add_option("--km", o.km, "cancellation gain");
  cmd->add_option("--seed", o.seed, "noise seed");
  cmd->add_option("--seeds", o.seeds, "inclusive seed range a..b");
  cmd->add_option("--output", o.output, "output directory");
}

ExperimentConfig resolve(const CommonOptions& o) {
  ExperimentConfig cfg;
  if (!o.config_path.empty()) cfg = ceeds::harness::load_config(o.config_path);
  if (o.waveform) cfg.waveform = *o.waveform;
  if (o.km) cfg.km = *o.km;
  if (o.seed) cfg.seed = *o.seed;
  if (o.output) cfg.output_dir = *o.output;
  cfg.validate();
  return cfg;
}

std::vector<std::uint64_t> seed_list(const CommonOptions& o, const ExperimentConfig& cfg) {
  if (o.seeds.empty()) return {cfg.seed};
  const auto dots = o.seeds.find("..");
  if (dots == std::string::npos) {
    throw ceeds::Error(ceeds::ErrorCode::kConfig, "--seeds expects a..b");
  }
  std::uint64_t a = 0, b = 0;
  try {
    a = std::stoull(o.seeds.substr(0, dots));
    b = std::stoull(o.seeds.substr(dots + 2));
  } catch (const std::exception&) {
    throw ceeds::Error(ceeds::ErrorCode::kConfig, "--seeds expects a..b");
  }
  if (b < a) throw ceeds::Error(ceeds::ErrorCode::kConfig, "--seeds range is empty");
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = a; s <= b; ++s) seeds.push_back(s);
  return seeds;
}

int cmd_run(const CommonOptions& o, bool realtime) {
  const ExperimentConfig base = resolve(o);
  const auto seeds = seed_list(o, base);
  for (std::uint64_t seed : seeds) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    std::filesystem::path dir = cfg.output_dir;
    if (seeds.size() > 1) dir /= "seed_" + std::to_string(seed);
    std::filesystem::create_directories(dir);

    const auto result = ceeds::harness::run_experiment(cfg, {realtime});
    ceeds::harness::write_csv(result.baseline, dir / "baseline.csv");
    ceeds::harness::write_csv(result.ceeds, dir / "ceeds.csv");
    ceeds::harness::render_plots(result.baseline, result.ceeds, result.ceeds.chosen,
                                 cfg.analysis_cutoff, dir);
    const std::string summary = ceeds::harness::summarize(cfg, result);
    ceeds::harness::write_text(dir / "summary.txt", summary);
    std::cout << summary;
    if (seeds.size() > 1) std::cout << "\n";
  }
  return 0;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

int cmd_sweep(const CommonOptions& o) {
  const ExperimentConfig base = resolve(o);
  CommonOptions ranged = o;
  if (ranged.seeds.empty()) ranged.seeds = "1..10";
  const auto seeds = seed_list(ranged, base);
  const std::size_t early = ceeds::harness::kStartupSettledSample;
  const std::size_t cutoff = base.analysis_cutoff;

  std::printf("waveform: %s\n", base.waveform.c_str());
  std::printf("%8s %8s %8s %14s %14s\n", "seed", "period", "rank", "red_from_early",
              "red_from_cutoff");
  std::vector<double> from_early, from_cutoff;
  for (std::uint64_t seed : seeds) {
    ExperimentConfig cfg = base;
    cfg.seed = seed;
    const auto r = ceeds::harness::run_experiment(cfg);
    const double a = ceeds::harness::error_reduction(r.baseline, r.ceeds, early);
    const double b = ceeds::harness::error_reduction(r.baseline, r.ceeds, cutoff);
    from_early.push_back(a);
    from_cutoff.push_back(b);
    if (r.ceeds.chosen) {
      std::printf("%8llu %8zu %8d %13.2f%% %13.2f%%\n", static_cast<unsigned long long>(seed),
                  r.ceeds.chosen->modal_period(), r.ceeds.chosen->source_rank, a, b);
    } else {
      std::printf("%8llu %8s %8s %13.2f%% %13.2f%%\n", static_cast<unsigned long long>(seed), "-",
                  "-", a, b);
    }
  }
  std::printf("median reduction from sample %zu: %.2f%%\n", early, median(from_early));
  std::printf("median reduction from sample %zu: %.2f%%\n", cutoff, median(from_cutoff));
  return 0;
}

int cmd_calibrate(const CommonOptions& o) {
  const ExperimentConfig cfg = resolve(o);
  const auto points = ceeds::harness::calibrate(cfg);
  std::printf("%10s %12s\n", "duty", "steady_rpm");
  for (const auto& p : points) std::printf("%10.4g %12.6g\n", p.duty, p.rpm);
  const auto tf = ceeds::control::fit_transfer(points);
  std::printf("forward: rpm  = %.6g * duty + %.6g\n", tf.slope(), tf.intercept());
  std::printf("inverse: duty = (rpm - %.6g) / %.6g\n", tf.intercept(), tf.slope());
  std::printf("feedforward duty at %.6g rpm: %.6g\n", cfg.setpoint_rpm,
              tf.inverse(cfg.setpoint_rpm));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-profile cyclical error cancellation on a simulated DC motor"};
  app.require_subcommand(1);

  CommonOptions run_opts;
  bool realtime = false;
  auto* run = app.add_subcommand("run", "paired baseline / CEEDS experiment with CSV and plots");
  add_common(run, run_opts);
  run->add_flag("--realtime", realtime, "pace the loop at loop_ms wall-clock");

  CommonOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "seed sweep with median reduction table");
  add_common(sweep, sweep_opts);

  CommonOptions cal_opts;
  auto* cal = app.add_subcommand("calibrate", "open-loop duty ladder and transfer fit");
  add_common(cal, cal_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_opts, realtime);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*cal) return cmd_calibrate(cal_opts);
  } catch (const ceeds::Error& e) {
    std::cerr << "ceeds: " << ceeds::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ceeds: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
