/**
 * @file score.hpp
 * @brief Score(.,.) for multiple-choice, open-ended and captioning answers.
 *
 * Multiple-choice answers are parsed to an option label when possible and
 * otherwise judged; open-ended answers are rated by a judge over several
 * repeats and averaged. Without a working judge every path falls back to a
 * deterministic text comparison, and the method tag says so.
 */
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "robulink/dataset/manifest.hpp"
#include "robulink/score/judge.hpp"

namespace robulink {

enum class ScoreMethod { OptionParse, Judge, OfflineFallback };

std::string_view to_string(ScoreMethod m);
std::optional<ScoreMethod> parse_score_method(std::string_view text);

struct ScoreValue {
    double value = 0.0;
    ScoreMethod method = ScoreMethod::OfflineFallback;
    /// Successful judge repeats that went into `value`; 0 when no judge was used.
    int repeats = 0;
    /// Judge template hash when a judge produced the value.
    std::string template_hash;

    bool operator==(const ScoreValue&) const = default;
};

struct ScoreOptions {
    int repeats = 5;
    /// Judge successes needed before the fallback is skipped; capped at `repeats`.
    int min_success = 3;
    JudgeTemplates templates = default_judge_templates();
};

/// `judge` may be null (offline). `question` only feeds judge prompts.
ScoreValue score_mcq(std::string_view output, std::string_view gt_label, const std::vector<Choice>& choices,
                     Judge* judge, const JudgeContext& ctx = {}, const ScoreOptions& options = {},
                     std::string_view question = {});

/// Open-ended answer against ground truth; CAP prompts use `score_points`
/// when given.
ScoreValue score_open(std::string_view output, std::string_view gt, Task task, Judge* judge,
                      const JudgeContext& ctx = {}, const ScoreOptions& options = {},
                      const std::vector<std::string>& score_points = {}, std::string_view question = {});

/// Agreement between the answer on the reference image and on the
/// distorted image. MCQ compares parsed labels.
ScoreValue score_consistency(std::string_view out_ref, std::string_view out_dist, Task task, Judge* judge,
                             const JudgeContext& ctx = {}, const ScoreOptions& options = {},
                             const std::vector<Choice>& choices = {}, std::string_view question = {});

/// Score of `output` against a sample's ground truth, dispatching on task.
ScoreValue score_against_gt(const Sample& sample, std::string_view output, Judge* judge, const JudgeContext& ctx,
                            const ScoreOptions& options = {});

}  // namespace robulink
