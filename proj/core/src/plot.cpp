#include "ceeds/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "ceeds/csv.hpp"

namespace ceeds::harness {
namespace {

constexpr double kWidth = 900.0;
constexpr double kHeight = 420.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 55.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v + 0.0);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

// Round step from {1, 2, 5} x 10^k giving about `target` intervals.
double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double f : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= f * mag) return f * mag;
  }
  return 10.0 * mag;
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
         num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) +
         "\" font-family=\"sans-serif\" font-size=\"12\">\n"
         "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

std::string render_svg_chart(const ChartSpec& spec, std::span<const Series> series) {
  std::size_t n = 1;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& s : series) {
    n = std::max(n, s.values.size());
    for (double v : s.values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!std::isfinite(lo)) lo = hi = 0.0;
  if (spec.stems) {
    lo = std::min(lo, 0.0);
    hi = std::max(hi, 0.0);
  }
  if (hi - lo < 1e-9) {
    lo -= 1.0;
    hi += 1.0;
  }
  const double pad = 0.05 * (hi - lo);
  lo -= pad;
  hi += pad;
  const double x_max = static_cast<double>(n > 1 ? n - 1 : 1);

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) { return kLeft + plot_w * x / x_max; };
  auto py = [&](double y) { return kTop + plot_h * (hi - y) / (hi - lo); };

  std::string out = svg_open();
  out += "<text x=\"" + num(kWidth / 2) + "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(spec.title) + "</text>\n";

  // Grid and ticks.
  const double ystep = nice_step(hi - lo, 6);
  for (double y = std::ceil(lo / ystep) * ystep; y <= hi; y += ystep) {
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(y)) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(py(y)) + "\" stroke=\"#e0e0e0\"/>\n";
    out += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(py(y) + 4) +
           "\" text-anchor=\"end\">" + tick_label(y) + "</text>\n";
  }
  const double xstep = nice_step(x_max, 8);
  for (double x = 0.0; x <= x_max + 1e-9; x += xstep) {
    out += "<text x=\"" + num(px(x)) + "\" y=\"" + num(kHeight - kBottom + 16) +
           "\" text-anchor=\"middle\">" + tick_label(x) + "</text>\n";
  }
  out += "<rect x=\"" + num(kLeft) + "\" y=\"" + num(kTop) + "\" width=\"" + num(plot_w) +
         "\" height=\"" + num(plot_h) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  if (lo < 0.0 && hi > 0.0) {
    out += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(py(0)) + "\" x2=\"" +
           num(kWidth - kRight) + "\" y2=\"" + num(py(0)) + "\" stroke=\"#999\"/>\n";
  }
  out += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kHeight - 12) +
         "\" text-anchor=\"middle\">" + escape(spec.x_label) + "</text>\n";
  out += "<text transform=\"translate(16 " + num(kTop + plot_h / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(spec.y_label) + "</text>\n";

  for (const auto& s : series) {
    if (spec.stems) {
      for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double x = px(static_cast<double>(i));
        out += "<line x1=\"" + num(x) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(x) +
               "\" y2=\"" + num(py(s.values[i])) + "\" stroke=\"" + s.color + "\"/>\n";
        out += "<circle cx=\"" + num(x) + "\" cy=\"" + num(py(s.values[i])) +
               "\" r=\"2\" fill=\"" + s.color + "\"/>\n";
      }
      continue;
    }
    out += "<polyline fill=\"none\" stroke-width=\"1.2\" stroke=\"" + s.color + "\" points=\"";
    for (std::size_t i = 0; i < s.values.size(); ++i) {
      if (i > 0) out += ' ';
      out += num(px(static_cast<double>(i))) + "," + num(py(s.values[i]));
    }
    out += "\"/>\n";
  }

  if (spec.marker_x && *spec.marker_x <= x_max) {
    const double x = px(*spec.marker_x);
    out += "<line x1=\"" + num(x) + "\" y1=\"" + num(kTop) + "\" x2=\"" + num(x) + "\" y2=\"" +
           num(kTop + plot_h) + "\" stroke=\"#c00\" stroke-dasharray=\"6 4\"/>\n";
    out += "<text x=\"" + num(x + 4) + "\" y=\"" + num(kTop + 14) + "\" fill=\"#c00\">" +
           escape(spec.marker_label) + "</text>\n";
  }

  // Legend.
  double ly = kTop + 14;
  for (const auto& s : series) {
    if (s.label.empty()) continue;
    const double lx = kWidth - kRight - 150;
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly - 4) + "\" x2=\"" + num(lx + 20) +
           "\" y2=\"" + num(ly - 4) + "\" stroke=\"" + s.color + "\" stroke-width=\"2\"/>\n";
    out += "<text x=\"" + num(lx + 26) + "\" y=\"" + num(ly) + "\">" + escape(s.label) +
           "</text>\n";
    ly += 16;
  }
  out += "</svg>\n";
  return out;
}

PlotFiles render_plots(const ExperimentLog& baseline, const ExperimentLog& ceeds,
                       const std::optional<cancel::CancellationCycle>& chosen,
                       std::size_t analysis_cutoff, const std::filesystem::path& output_dir) {
  PlotFiles files{output_dir / "error_overlay.svg", output_dir / "cancellation_cycle.svg"};

  ChartSpec overlay;
  overlay.title = "Error denial: PIDF baseline vs CEEDS";
  overlay.x_label = "data sample index";
  overlay.y_label = "error (RPM)";
  overlay.marker_x = static_cast<double>(analysis_cutoff);
  overlay.marker_label = "analysis cutoff";
  const std::vector<Series> overlay_series{{"PIDF (km = 0)", "#888888", baseline.errors()},
                                           {"CEEDS", "#1f5fbf", ceeds.errors()}};
  write_text(files.error_overlay, render_svg_chart(overlay, overlay_series));

  if (chosen) {
    ChartSpec cyc;
    char title[128];
    std::snprintf(title, sizeof title,
                  "Selected cancellation cycle (rank %d, offset %zu, period %zu)",
                  chosen->source_rank, chosen->offset, chosen->modal_period());
    cyc.title = title;
    cyc.x_label = "cycle position (samples)";
    cyc.y_label = "cancellation (RPM)";
    cyc.stems = true;
    const std::vector<Series> cyc_series{{"", "#1f5fbf", chosen->cycle_values}};
    write_text(files.cancellation_cycle, render_svg_chart(cyc, cyc_series));
  } else {
    std::string svg = svg_open();
    svg += "<text x=\"" + num(kWidth / 2) + "\" y=\"" + num(kHeight / 2) +
           "\" text-anchor=\"middle\" font-size=\"18\">no candidate: PIDF fallback</text>\n</svg>\n";
    write_text(files.cancellation_cycle, svg);
  }
  return files;
}

}  // namespace ceeds::harness
