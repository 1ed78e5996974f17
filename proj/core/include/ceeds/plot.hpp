#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ceeds/cancellation.hpp"
#include "ceeds/experiment.hpp"

namespace ceeds::harness {

struct Series {
  std::string label;
  std::string color;
  std::vector<double> values;  // x is the index
};

struct ChartSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::optional<double> marker_x;  // dashed vertical line
  std::string marker_label;
  bool stems = false;  // draw samples as stems instead of a polyline
};

/// Static SVG line chart of one or more index-aligned series.
std::string render_svg_chart(const ChartSpec& spec, std::span<const Series> series);

struct PlotFiles {
  std::filesystem::path error_overlay;
  std::filesystem::path cancellation_cycle;
};

/// Writes error_overlay.svg and cancellation_cycle.svg into output_dir. With
/// no chosen cycle the second file is a "no candidate" placeholder.
PlotFiles render_plots(const ExperimentLog& baseline, const ExperimentLog& ceeds,
                       const std::optional<cancel::CancellationCycle>& chosen,
                       std::size_t analysis_cutoff, const std::filesystem::path& output_dir);

}  // namespace ceeds::harness
