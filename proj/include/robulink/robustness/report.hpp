/**
 * @file report.hpp
 * @brief Text, CSV and JSON renderings of robustness reports, and the score
 *        record log.
 */
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "robulink/robustness/robustness.hpp"

namespace robulink {

/// Tasks x strengths plus Overall, one row per model in ranking order.
std::string render_task_table_text(const RobustnessReport& report, Measure measure);
std::string render_task_table_csv(const RobustnessReport& report, Measure measure);

enum class Axis { Step, Group, Dimension };

std::string render_axis_table_text(const RobustnessReport& report, Measure measure, Axis axis);
std::string render_axis_table_csv(const RobustnessReport& report, Measure measure, Axis axis);

std::string render_ranking_text(const RobustnessReport& report);

/// Every cell with count and interval; absent cells are null.
nlohmann::json report_to_json(const RobustnessReport& report);

nlohmann::json score_to_json(const ScoreValue& s);
ScoreValue score_from_json(const nlohmann::json& j);

std::string eval_record_to_json_line(const EvalRecord& r);
EvalRecord eval_record_from_json_line(std::string_view line);
void save_eval_records(const std::vector<EvalRecord>& records, const std::filesystem::path& path);
std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path);

/// "0.1234", or "-" for an absent value.
std::string format_value(const std::optional<double>& v);

}  // namespace robulink
