/**
 * @file robustness.hpp
 * @brief Absolute and relative robustness, their aggregation into report
 *        cells, ranking and bootstrap intervals.
 *
 *     R_a = Score(GT, LMM(I_dis))
 *     R_r = Score(GT, LMM(I_ref)) * Score(LMM(I_ref), LMM(I_dis))
 */
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/dataset/manifest.hpp"
#include "robulink/score/score.hpp"

namespace robulink {

struct EvalRecord {
    std::string model;
    std::string sample_id;
    Task task = Task::MCQ;
    int dimension = 1;
    Strength strength = Strength::Low;
    std::optional<ScoreValue> ref_vs_gt;
    std::optional<ScoreValue> dist_vs_gt;
    std::optional<ScoreValue> ref_vs_dist;
};

/// nullopt when the operand is missing.
std::optional<double> absolute(const EvalRecord& r);
std::optional<double> relative(const EvalRecord& r);

enum class Measure { Absolute, Relative };

/// Compensated (Neumaier) mean; nullopt for an empty input.
std::optional<double> mean(std::span<const double> values);

using Interval = std::pair<double, double>;

/// Percentile bootstrap of the mean. nullopt for fewer than two values.
std::optional<Interval> bootstrap_ci(std::span<const double> values, double level = 0.90, int resamples = 1000,
                                     std::uint64_t seed = 0);

struct Cell {
    std::optional<double> value;  // absent for an empty cell
    std::size_t count = 0;
    std::optional<Interval> ci;
};

struct MeasureCells {
    /// [task][strength - 1]
    std::array<std::array<Cell, 3>, 3> task_strength;
    std::array<Cell, 7> step;    // indexed by Step
    std::array<Cell, 7> group;   // indexed by Group
    std::array<Cell, kDimensionCount> dimension;  // [dimension - 1]
    Cell overall;

    const Cell& at(Task t, Strength s) const {
        return task_strength[static_cast<std::size_t>(t)][static_cast<std::size_t>(s) - 1];
    }
};

struct ModelReport {
    std::string model;
    MeasureCells absolute;
    MeasureCells relative;
    std::size_t records = 0;
    /// Records without the operands for each measure (excluded, not zeroed).
    std::size_t missing_absolute = 0;
    std::size_t missing_relative = 0;

    const MeasureCells& cells(Measure m) const { return m == Measure::Absolute ? absolute : relative; }
};

struct AggregateOptions {
    bool with_ci = true;
    double level = 0.90;
    int resamples = 1000;
    std::uint64_t seed = 0;
};

struct RankEntry {
    std::string model;
    std::optional<double> absolute;
    std::optional<double> relative;
    /// (R_a + R_r) / 2
    std::optional<double> score;
};

struct RobustnessReport {
    std::vector<ModelReport> models;  // sorted by name
    std::vector<RankEntry> ranking;
    double ci_level = 0.90;

    const ModelReport* find(const std::string& model) const;
};

/// Groups by model and fills every cell with the per-record mean. Strength
/// None records count towards no cell.
RobustnessReport aggregate(const std::vector<EvalRecord>& records, const AggregateOptions& options = {});

/// Descending (R_a + R_r)/2, then R_r, then name. Models without a score go last.
std::vector<RankEntry> rank(const std::vector<ModelReport>& models);

}  // namespace robulink
