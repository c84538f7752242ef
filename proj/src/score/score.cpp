#include "robulink/score/score.hpp"

#include <algorithm>
#include <cmath>

#include "robulink/score/text.hpp"

namespace robulink {

namespace {

std::vector<std::string> labels_of(const std::vector<Choice>& choices) {
    std::vector<std::string> out;
    for (const auto& c : choices) out.push_back(c.label);
    return out;
}

std::vector<std::string> bodies_of(const std::vector<Choice>& choices) {
    std::vector<std::string> out;
    for (const auto& c : choices) out.push_back(c.text);
    return out;
}

std::string render_choices(const std::vector<Choice>& choices) {
    std::string out;
    for (const auto& c : choices) {
        if (!out.empty()) out += '\n';
        out += c.label + ". " + c.text;
    }
    return out;
}

bool same_label(std::string_view a, std::string_view b) { return normalize_text(a) == normalize_text(b); }

/// Label chosen by an answer: parsed label first, then a unique choice body.
std::optional<std::string> resolve_label(std::string_view output, const std::vector<Choice>& choices) {
    if (auto l = parse_option_label(output, labels_of(choices))) {
        return l;
    }
    if (auto i = match_choice_text(output, bodies_of(choices))) {
        return choices[*i].label;
    }
    return std::nullopt;
}

int effective_min(const ScoreOptions& o) { return std::clamp(o.min_success, 1, std::max(1, o.repeats)); }

/// Mean of the parsed judge ratings over the repeats, if enough succeeded.
std::optional<ScoreValue> judged_mean(Judge* judge, const std::string& prompt, const JudgeContext& ctx,
                                      const ScoreOptions& options) {
    if (!judge || options.repeats < 1) {
        return std::nullopt;
    }
    double sum = 0.0;
    int ok = 0;
    for (int r = 0; r < options.repeats; ++r) {
        try {
            if (const auto v = parse_rating(judge->complete(prompt, ctx, r))) {
                sum += std::clamp(*v, 0.0, 1.0);
                ++ok;
            }
        } catch (const std::exception&) {
            // counted as a failed repeat
        }
    }
    if (ok < effective_min(options)) {
        return std::nullopt;
    }
    return ScoreValue{sum / ok, ScoreMethod::Judge, ok, options.templates.hash()};
}

ScoreValue fallback(double v) { return {v, ScoreMethod::OfflineFallback, 0, {}}; }

}  // namespace

std::string_view to_string(ScoreMethod m) {
    switch (m) {
        case ScoreMethod::OptionParse: return "option-parse";
        case ScoreMethod::Judge: return "judge";
        case ScoreMethod::OfflineFallback: return "offline-fallback";
    }
    return "?";
}

std::optional<ScoreMethod> parse_score_method(std::string_view text) {
    if (text == "option-parse") return ScoreMethod::OptionParse;
    if (text == "judge") return ScoreMethod::Judge;
    if (text == "offline-fallback") return ScoreMethod::OfflineFallback;
    return std::nullopt;
}

ScoreValue score_mcq(std::string_view output, std::string_view gt_label, const std::vector<Choice>& choices,
                     Judge* judge, const JudgeContext& ctx, const ScoreOptions& options, std::string_view question) {
    if (choices.empty()) {
        throw std::invalid_argument("score_mcq: no choices");
    }
    const auto labels = labels_of(choices);
    if (std::none_of(labels.begin(), labels.end(), [&](const std::string& l) { return same_label(l, gt_label); })) {
        throw std::invalid_argument("score_mcq: ground-truth label '" + std::string(gt_label) + "' is not a choice");
    }
    if (const auto l = parse_option_label(output, labels)) {
        return {same_label(*l, gt_label) ? 1.0 : 0.0, ScoreMethod::OptionParse, 0, {}};
    }
    if (judge) {
        std::string prompt = fill_template(options.templates.mcq_equivalence, "question", std::string(question));
        prompt = fill_template(prompt, "choices", render_choices(choices));
        prompt = fill_template(prompt, "gt", std::string(gt_label));
        prompt = fill_template(prompt, "output", std::string(output));
        try {
            if (const auto v = parse_verdict(judge->complete(prompt, ctx, 0))) {
                return {*v ? 1.0 : 0.0, ScoreMethod::Judge, 1, options.templates.hash()};
            }
        } catch (const std::exception&) {
        }
    }
    const auto i = match_choice_text(output, bodies_of(choices));
    return fallback(i && same_label(choices[*i].label, gt_label) ? 1.0 : 0.0);
}

ScoreValue score_open(std::string_view output, std::string_view gt, Task task, Judge* judge, const JudgeContext& ctx,
                      const ScoreOptions& options, const std::vector<std::string>& score_points,
                      std::string_view question) {
    if (options.repeats < 1) {
        throw std::invalid_argument("score_open: repeats must be at least 1");
    }
    if (judge) {
        std::string prompt;
        if (task == Task::CAP) {
            std::string points;
            for (const auto& p : score_points) points += "- " + p + "\n";
            if (points.empty()) points = "- (derive them from the ground-truth caption)\n";
            prompt = fill_template(options.templates.cap_rating, "points", points);
        } else {
            prompt = options.templates.open_rating;
        }
        prompt = fill_template(prompt, "question", std::string(question));
        prompt = fill_template(prompt, "gt", std::string(gt));
        prompt = fill_template(prompt, "output", std::string(output));
        if (auto v = judged_mean(judge, prompt, ctx, options)) {
            return *v;
        }
    }
    return fallback(token_f1(output, gt));
}

ScoreValue score_consistency(std::string_view out_ref, std::string_view out_dist, Task task, Judge* judge,
                             const JudgeContext& ctx, const ScoreOptions& options, const std::vector<Choice>& choices,
                             std::string_view question) {
    if (task == Task::MCQ) {
        if (!choices.empty()) {
            const auto labels = labels_of(choices);
            const auto a = parse_option_label(out_ref, labels);
            const auto b = parse_option_label(out_dist, labels);
            if (a && b) {
                return {same_label(*a, *b) ? 1.0 : 0.0, ScoreMethod::OptionParse, 0, {}};
            }
            const auto ra = resolve_label(out_ref, choices);
            const auto rb = resolve_label(out_dist, choices);
            if (ra && rb) {
                return fallback(same_label(*ra, *rb) ? 1.0 : 0.0);
            }
        } else {
            const std::vector<std::string> letters = {"A", "B", "C", "D", "E", "F", "G", "H"};
            const auto a = parse_option_label(out_ref, letters);
            const auto b = parse_option_label(out_dist, letters);
            if (a && b) {
                return {*a == *b ? 1.0 : 0.0, ScoreMethod::OptionParse, 0, {}};
            }
        }
        return fallback(normalize_text(out_ref) == normalize_text(out_dist) && !normalize_text(out_ref).empty()
                            ? 1.0
                            : 0.0);
    }
    if (options.repeats < 1) {
        throw std::invalid_argument("score_consistency: repeats must be at least 1");
    }
    if (judge) {
        std::string prompt = fill_template(options.templates.consistency, "question", std::string(question));
        prompt = fill_template(prompt, "reference", std::string(out_ref));
        prompt = fill_template(prompt, "output", std::string(out_dist));
        if (auto v = judged_mean(judge, prompt, ctx, options)) {
            return *v;
        }
    }
    return fallback(token_f1(out_ref, out_dist));
}

ScoreValue score_against_gt(const Sample& sample, std::string_view output, Judge* judge, const JudgeContext& ctx,
                            const ScoreOptions& options) {
    if (sample.task == Task::MCQ) {
        return score_mcq(output, sample.gt_answer, sample.choices, judge, ctx, options, sample.question);
    }
    return score_open(output, sample.gt_answer, sample.task, judge, ctx, options, sample.score_points,
                      sample.question);
}

}  // namespace robulink
