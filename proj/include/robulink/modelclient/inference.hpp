/**
 * @file inference.hpp
 * @brief Batch querying of a model over reference and distorted images.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "robulink/dataset/distorted_set.hpp"
#include "robulink/dataset/manifest.hpp"
#include "robulink/modelclient/client.hpp"

namespace robulink {

/// Per-task prompts. `{question}` and `{choices}` (one "A. text" line per
/// choice) are substituted.
struct PromptTemplates {
    std::string mcq;
    std::string vqa;
    std::string cap;

    const std::string& for_task(Task t) const;
};

PromptTemplates default_prompt_templates();
/// Missing keys fall back to the defaults.
PromptTemplates prompt_templates_from_json(const nlohmann::json& j);
nlohmann::json prompt_templates_to_json(const PromptTemplates& t);

std::string render_prompt(const PromptTemplates& templates, const Sample& sample);

/// Seeded permutation of [0, n) used to interleave tasks when querying.
std::vector<std::size_t> interleaved_order(std::size_t n, std::uint64_t seed);

struct InferenceFailure {
    std::string sample_id;
    std::string corruption_key;
    std::string message;
};

struct InferenceRun {
    /// Successful exchanges in issue order.
    std::vector<Exchange> exchanges;
    std::vector<InferenceFailure> failures;
    std::size_t planned = 0;
    std::size_t cache_hits = 0;
    /// Transport calls made during this run.
    std::size_t transport_calls = 0;
};

struct InferenceOptions {
    std::uint64_t seed = 0;
    /// Worker threads; 0 uses the endpoint's max_in_flight.
    unsigned threads = 0;
};

/// One exchange per sample reference plus one per distorted record.
/// Distorted image paths are resolved against `set_dir`. Per-item failures
/// are collected and the batch completes.
InferenceRun run_inference(ModelClient& client, const std::vector<Sample>& samples,
                           const std::vector<DistortedRecord>& records, const std::filesystem::path& set_dir,
                           const PromptTemplates& templates, const InferenceOptions& options = {});

}  // namespace robulink
