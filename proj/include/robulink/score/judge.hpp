/**
 * @file judge.hpp
 * @brief Judge-model interface and the versioned prompt templates it is fed.
 */
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace robulink {

class ModelClient;

class JudgeUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What a judge call is about; used for cache keys and error context.
struct JudgeContext {
    std::string sample_id;
    std::string subject;  // e.g. "dist_vs_gt@16-jpeg@mid"
};

class Judge {
public:
    virtual ~Judge() = default;
    virtual std::string name() const = 0;
    /// Raw judge reply for one repeat; throws on failure.
    virtual std::string complete(const std::string& prompt, const JudgeContext& ctx, int repeat) = 0;
};

/// Judge backed by a callable; handy for tests and scripted judges.
class FunctionJudge final : public Judge {
public:
    using Fn = std::function<std::string(const std::string& prompt, int repeat)>;
    FunctionJudge(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}
    std::string name() const override { return name_; }
    std::string complete(const std::string& prompt, const JudgeContext&, int repeat) override {
        return fn_(prompt, repeat);
    }

private:
    std::string name_;
    Fn fn_;
};

/// Judge that goes through a ModelClient (cache, retries, concurrency limits).
/// Each repeat has its own cache entry.
class ClientJudge final : public Judge {
public:
    explicit ClientJudge(std::shared_ptr<ModelClient> client);
    std::string name() const override;
    std::string complete(const std::string& prompt, const JudgeContext& ctx, int repeat) override;

private:
    std::shared_ptr<ModelClient> client_;
};

/// Placeholders: {question}, {choices}, {gt}, {output}, {reference}, {points}.
struct JudgeTemplates {
    std::string mcq_equivalence;
    std::string open_rating;
    std::string cap_rating;
    std::string consistency;

    /// SHA-256 over all four templates; stored with every judged score.
    std::string hash() const;
};

JudgeTemplates default_judge_templates();
JudgeTemplates judge_templates_from_json(const nlohmann::json& j);
nlohmann::json judge_templates_to_json(const JudgeTemplates& t);

std::string fill_template(std::string tmpl, const std::string& key, const std::string& value);

/// First number in the reply, read as a rating in [0,1]. Values in (1,10]
/// are read as a 0-10 scale and values in (10,100] as percentages.
std::optional<double> parse_rating(const std::string& reply);

/// "yes"/"no" or a numeric rating thresholded at 0.5.
std::optional<bool> parse_verdict(const std::string& reply);

}  // namespace robulink
