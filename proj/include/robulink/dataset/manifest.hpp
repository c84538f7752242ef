/**
 * @file manifest.hpp
 * @brief Benchmark samples and their newline-delimited JSON manifest.
 *
 * One JSON object per line:
 *
 *     {"id": "s1", "task": "MCQ", "image_path": "img/s1.png",
 *      "question": "...", "choices": [{"label": "A", "text": "..."}, ...],
 *      "gt_answer": "A", "source": "fixture"}
 *
 * `choices` may also be a list of plain strings, labeled A, B, C... in order.
 * CAP samples may carry an explicit `score_points` list. Image paths are
 * relative to the manifest's directory.
 */
#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robulink {

enum class Task { MCQ, VQA, CAP };

inline constexpr std::array<Task, 3> kAllTasks = {Task::MCQ, Task::VQA, Task::CAP};

std::string_view to_string(Task t);
std::optional<Task> parse_task(std::string_view text);

struct Choice {
    std::string label;
    std::string text;
    bool operator==(const Choice&) const = default;
};

struct Sample {
    std::string id;
    Task task = Task::MCQ;
    /// As written in the manifest.
    std::string image_path;
    std::string question;
    std::vector<Choice> choices;
    std::string gt_answer;
    std::string source;
    /// CAP only: explicit ground-truth score points, if annotated.
    std::vector<std::string> score_points;
    /// image_path resolved against the manifest directory (not serialized).
    std::filesystem::path image_file;

    bool operator==(const Sample& o) const {
        return id == o.id && task == o.task && image_path == o.image_path && question == o.question &&
               choices == o.choices && gt_answer == o.gt_answer && source == o.source &&
               score_points == o.score_points;
    }
};

class ManifestError : public std::runtime_error {
public:
    ManifestError(std::size_t line, std::string field, const std::string& what);
    /// 1-based; 0 when the error is not tied to a line.
    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }
    /// The message without the line/field prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t line_;
    std::string field_;
    std::string detail_;
};

/// Throws ManifestError (line 0) on an invariant breach.
void validate_sample(const Sample& s);

std::size_t word_count(std::string_view text);

/// Parses manifest text; blank lines are skipped. Image paths are resolved
/// against `base_dir`.
std::vector<Sample> parse_manifest(std::string_view text, const std::filesystem::path& base_dir = {});
std::vector<Sample> load_manifest(const std::filesystem::path& path);

std::string sample_to_json_line(const Sample& s);
void save_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path);

struct TaskBalance {
    std::array<std::size_t, 3> counts{};  // indexed by Task
    std::size_t total = 0;
    /// True when the per-task counts differ by more than one from each other.
    bool unbalanced = false;

    std::size_t count(Task t) const { return counts[static_cast<std::size_t>(t)]; }
};

TaskBalance task_balance(const std::vector<Sample>& samples);

/// MCQ helper: index of the choice whose label equals `label` (case-insensitive).
std::optional<std::size_t> find_choice(const Sample& s, std::string_view label);

}  // namespace robulink
