#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ceeds/experiment.hpp"

namespace ceeds::harness {

inline constexpr std::string_view kCsvColumns =
    "sample_index,time_ms,phase,setpoint_rpm,measured_rpm,error,duty,interference_rpm,"
    "cancellation_rpm";

/// "# key=value" header lines, the chosen-cycle dump, the column row, then one
/// row per sample. Reals use 6 significant digits.
std::string to_csv(const ExperimentLog& log);
void write_csv(const ExperimentLog& log, const std::filesystem::path& path);

/// Reads back what to_csv produced (header and records; chosen cycle included).
ExperimentLog parse_csv(std::string_view text);
ExperimentLog read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view contents);

}  // namespace ceeds::harness
