/**
 * @file report.hpp
 * @brief Serialization of metric reports and comparison tables.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "pinngm/eval/metrics.hpp"

namespace pinngm::eval {

/// Flat key-value JSON text; missing values are null.
std::string report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const std::string& text);

void write_report(const std::string& path, const MetricsReport& report);
MetricsReport read_report(const std::string& path);

/// The nine comparison columns, in table order.
const std::vector<std::string>& compare_columns();

/// "NA" when missing, "D" for percentages above 100, otherwise fixed notation.
std::string format_percent(const std::optional<double>& v);

/// One row per report, in the given order, with a leading "Model" column.
void write_compare_csv(std::ostream& os, const std::vector<MetricsReport>& reports);

}  // namespace pinngm::eval
