#include "ceeds/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ceeds/error.hpp"

namespace ceeds::harness {
namespace {

void append_real(std::string& out, double v) {
  char buf[32];
  // + 0.0 folds negative zero.
  std::snprintf(buf, sizeof buf, "%.6g", v + 0.0);
  out += buf;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      parts.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

double read_real(std::string_view s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, "bad CSV number '" + std::string(s) + "'");
  }
  return v;
}

long long read_int(std::string_view s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::kParse, "bad CSV integer '" + std::string(s) + "'");
  }
  return v;
}

control::Phase read_phase(std::string_view s) {
  for (auto p : {control::Phase::kCollect, control::Phase::kHold, control::Phase::kApply,
                 control::Phase::kFallbackPidf}) {
    if (control::to_string(p) == s) return p;
  }
  throw Error(ErrorCode::kParse, "unknown phase '" + std::string(s) + "'");
}

}  // namespace

std::string to_csv(const ExperimentLog& log) {
  std::string out;
  out.reserve(96 * (log.records.size() + log.header.size() + 8));
  for (const auto& [k, v] : log.header) out += "# " + k + "=" + v + "\n";
  if (log.chosen) {
    out += "# chosen_source_rank=" + std::to_string(log.chosen->source_rank) + "\n";
    out += "# chosen_offset=" + std::to_string(log.chosen->offset) + "\n";
    out += "# chosen_modal_period=" + std::to_string(log.chosen->modal_period()) + "\n";
    out += "# chosen_cycle=";
    for (std::size_t k = 0; k < log.chosen->cycle_values.size(); ++k) {
      if (k > 0) out += ';';
      append_real(out, log.chosen->cycle_values[k]);
    }
    out += "\n";
  } else {
    out += "# chosen=none\n";
  }
  out += kCsvColumns;
  out += '\n';
  for (const auto& r : log.records) {
    out += std::to_string(r.sample_index);
    out += ',';
    out += std::to_string(r.time_ms);
    out += ',';
    out += control::to_string(r.phase);
    for (double v : {r.setpoint_rpm, r.measured_rpm, r.error, r.duty, r.interference_rpm,
                     r.cancellation_rpm}) {
      out += ',';
      append_real(out, v);
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

void write_csv(const ExperimentLog& log, const std::filesystem::path& path) {
  write_text(path, to_csv(log));
}

ExperimentLog parse_csv(std::string_view text) {
  ExperimentLog log;
  bool columns_seen = false;
  cancel::CancellationCycle chosen;
  bool has_chosen = false;
  for (std::string_view line : split(text, '\n')) {
    if (line.empty()) continue;
    if (line.starts_with("# ")) {
      line.remove_prefix(2);
      const auto eq = line.find('=');
      if (eq == std::string_view::npos) continue;
      const std::string_view key = line.substr(0, eq);
      const std::string_view value = line.substr(eq + 1);
      if (key == "chosen_source_rank") {
        chosen.source_rank = static_cast<int>(read_int(value));
      } else if (key == "chosen_offset") {
        chosen.offset = static_cast<std::size_t>(read_int(value));
      } else if (key == "chosen_cycle") {
        for (auto v : split(value, ';')) chosen.cycle_values.push_back(read_real(v));
        has_chosen = true;
      } else if (key != "chosen_modal_period" && key != "chosen") {
        log.header.emplace_back(std::string(key), std::string(value));
      }
      continue;
    }
    if (!columns_seen) {
      if (line != kCsvColumns) throw Error(ErrorCode::kParse, "unexpected CSV column header");
      columns_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 9) throw Error(ErrorCode::kParse, "CSV row has wrong field count");
    SampleRecord r;
    r.sample_index = static_cast<std::size_t>(read_int(f[0]));
    r.time_ms = read_int(f[1]);
    r.phase = read_phase(f[2]);
    r.setpoint_rpm = read_real(f[3]);
    r.measured_rpm = read_real(f[4]);
    r.error = read_real(f[5]);
    r.duty = read_real(f[6]);
    r.interference_rpm = read_real(f[7]);
    r.cancellation_rpm = read_real(f[8]);
    log.records.push_back(r);
  }
  if (has_chosen) log.chosen = std::move(chosen);
  return log;
}

ExperimentLog read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_csv(ss.str());
}

}  // namespace ceeds::harness
