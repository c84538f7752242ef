/**
 * @file correlation.hpp
 * @brief Rank correlation between corruption units across models.
 */
#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "robulink/robustness/report.hpp"

namespace robulink {

/// Rows are corruption units (steps, groups or dimensions), columns models.
struct PerfMatrix {
    std::vector<std::string> rows;
    std::vector<std::string> columns;
    std::vector<std::vector<std::optional<double>>> values;  // [row][column]

    std::size_t row_count() const { return rows.size(); }
    std::size_t column_count() const { return columns.size(); }
    bool row_complete(std::size_t r) const;
    /// Row values; throws if any entry is absent.
    std::vector<double> row(std::size_t r) const;
};

/// One column per model (in report order), one row per unit of `axis`.
PerfMatrix perf_matrix(const RobustnessReport& report, Measure measure, Axis axis);

/// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> v);

/// Spearman correlation as the Pearson correlation of average ranks.
/// Throws std::invalid_argument when sizes differ or are below 3; returns
/// nullopt when either input is constant.
std::optional<double> srocc(std::span<const double> x, std::span<const double> y);

struct CorrelationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::optional<double>>> values;
};

/// Pairwise srocc between rows. Rows that are constant or incomplete have
/// absent entries (diagonal included). Needs at least 3 columns.
CorrelationMatrix correlation_matrix(const PerfMatrix& perf);

std::string correlation_matrix_csv(const CorrelationMatrix& m);
std::string perf_matrix_csv(const PerfMatrix& m);

}  // namespace robulink
