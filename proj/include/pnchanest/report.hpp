#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "pnchanest/harness.hpp"

namespace pnchanest {

enum class ReportFormat { Csv, Json };

ReportFormat parse_format(std::string_view name);

/// Exact CSV header.
inline constexpr std::string_view kCsvHeader =
    "estimator,snr_db,empirical_mse,predicted_mse,crb,trials,std_error";

void emit_report(const MseReport& report, ReportFormat format, std::ostream& out);
/// Throws std::runtime_error naming the destination and the cause on I/O
/// failure.
void emit_report(const MseReport& report, ReportFormat format, const std::filesystem::path& destination);

/// CSV carries rows only; metadata is left default.
MseReport parse_report_csv(std::istream& in);
MseReport parse_report_json(std::istream& in);

std::string config_to_json(const SweepConfig& config);
SweepConfig config_from_json(const std::string& text);

}  // namespace pnchanest
