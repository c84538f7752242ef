/**
 * @file cli.hpp
 * @brief The robulink command pipeline, callable in-process.
 *
 * Subcommands hand off through files under the output directory:
 *
 *     distorted/records.jsonl   distort-set
 *     exchanges/<model>.jsonl   eval (run output, issue order)
 *     exchanges/<model>.log     eval (append-only cache)
 *     scores.jsonl              score
 *     report/                   report
 *     analysis/                 analyze
 *
 * Exit codes: 0 success, 2 partial success (coverage report written),
 * 1 hard failure.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/dataset/distorted_set.hpp"
#include "robulink/modelclient/inference.hpp"
#include "robulink/modelclient/transport.hpp"
#include "robulink/score/judge.hpp"

namespace robulink {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitPartial = 2;

struct RunConfig {
    std::filesystem::path manifest;
    std::filesystem::path out = "robulink-out";
    std::uint64_t seed = 0;
    std::vector<int> dims;                // empty means all 33
    std::vector<Strength> strengths;      // empty means low, mid, high
    StrengthPlan strength_plan = StrengthPlan::Full;
    std::vector<Endpoint> endpoints;
    std::optional<Endpoint> judge;
    bool offline = false;
    int repeats = 5;
    double ci_level = 0.90;
    int resamples = 1000;
    unsigned threads = 0;
    PromptTemplates prompts = default_prompt_templates();
    JudgeTemplates judge_templates = default_judge_templates();
    nlohmann::json gates;  // null means the default proxy gate

    std::vector<int> resolved_dims() const;
    std::vector<Strength> resolved_strengths() const;

    /// Relative paths are resolved against `base_dir`.
    static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
    /// Stable key order, no credentials.
    nlohmann::json to_json() const;
};

RunConfig load_run_config(const std::filesystem::path& path);

/// Parses "all", "16", "jpeg", "1,5,28" or "1-8".
std::vector<int> parse_dimension_list(const std::string& text);
/// Parses "all", "low", "low,high".
std::vector<Strength> parse_strength_list(const std::string& text);

/// Injection points for tests.
struct CliContext {
    std::ostream* out = nullptr;
    std::ostream* err = nullptr;
    /// Builds the transport for an endpoint; defaults to make_transport.
    std::function<std::shared_ptr<Transport>(const Endpoint&)> transport_factory;
};

struct CorruptRequest {
    std::vector<std::filesystem::path> inputs;  // files or directories
    std::vector<int> dims;
    std::vector<Strength> strengths;
    std::uint64_t seed = 0;
    std::filesystem::path out;
};

int cmd_corrupt(const CorruptRequest& req, const CliContext& ctx = {});
int cmd_distort_set(const RunConfig& cfg, const CliContext& ctx = {});
int cmd_gate(const RunConfig& cfg, const std::vector<std::filesystem::path>& inputs, const CliContext& ctx = {});
int cmd_eval(const RunConfig& cfg, const CliContext& ctx = {});
int cmd_score(const RunConfig& cfg, const CliContext& ctx = {});
int cmd_report(const RunConfig& cfg, const CliContext& ctx = {});
int cmd_analyze(const RunConfig& cfg, const CliContext& ctx = {});

/// Writes `<out>/config.resolved.json`.
void write_resolved_config(const RunConfig& cfg);

/// Full command line, including argv[0].
int run_cli(const std::vector<std::string>& args, const CliContext& ctx = {});

}  // namespace robulink
