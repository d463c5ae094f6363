#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include <json.hpp>

#include "tsgd/config.hpp"
#include "tsgd/harness.hpp"

namespace tsgd {

// CSV columns: update_index,ql_grand,wall_time_s,cum_grad_evals,diverged
void write_report_csv(const MetricsReport& report, std::ostream& out);
std::vector<MetricsRow> read_report_csv(std::istream& in);  // steps stays 0

nlohmann::json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& doc);

// Throws IoError naming the path on any I/O failure.
void emit_report(const MetricsReport& report, const std::filesystem::path& path,
                 ReportFormat format);

nlohmann::json stability_to_json(const StabilityReport& report);
// CSV columns: method,seed,eta,final_ql_grand,diverged
void write_stability_csv(const StabilityReport& report, std::ostream& out);
void emit_stability_report(const StabilityReport& report, const std::filesystem::path& path,
                           ReportFormat format);

}  // namespace tsgd
