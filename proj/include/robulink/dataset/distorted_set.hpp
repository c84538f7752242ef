/**
 * @file distorted_set.hpp
 * @brief Planning, materializing and verifying corrupted derivatives of a
 *        sample set.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "robulink/corrupt/engine.hpp"
#include "robulink/dataset/manifest.hpp"

namespace robulink {

struct DistortedRecord {
    std::string sample_id;
    int dimension = 1;
    Strength strength = Strength::Low;
    std::uint64_t seed = 0;
    /// Relative to the distorted-set directory.
    std::string image_path;
    bool synthetic_wild = false;

    CorruptionSpec spec() const { return {dimension, strength, seed}; }
    /// "<dim>-<slug>@<strength>", the corruption key used by caches and logs.
    std::string corruption_key() const { return corruption_label(spec()); }
    bool operator==(const DistortedRecord&) const = default;
};

enum class StrengthPlan {
    /// Every (sample, dimension) gets every requested strength.
    Full,
    /// Every (sample, dimension) gets one strength, cycled so the levels are
    /// evenly represented.
    RoundRobin,
};

/// Per-sample seed derived from the run seed and the sample id.
std::uint64_t record_seed(std::uint64_t run_seed, const std::string& sample_id);

/// Default relative output path for one record.
std::string record_image_path(const std::string& sample_id, int dimension, Strength strength);

/// Pure planning step; no I/O. Order: samples, then dimensions, then strengths.
std::vector<DistortedRecord> plan_distorted_set(const std::vector<Sample>& samples, const std::vector<int>& dims,
                                                const std::vector<Strength>& strengths, std::uint64_t seed,
                                                StrengthPlan plan = StrengthPlan::Full);

struct RecordFailure {
    std::string sample_id;
    int dimension = 0;
    Strength strength = Strength::None;
    std::string message;
};

struct DistortedSet {
    /// Records whose image was written successfully.
    std::vector<DistortedRecord> records;
    std::vector<RecordFailure> failures;
    std::size_t planned = 0;
};

struct BuildOptions {
    StrengthPlan plan = StrengthPlan::Full;
    /// 0 picks the hardware concurrency.
    unsigned threads = 0;
};

/// Plans, corrupts and writes PNGs under `out_dir`. Failures are recorded per
/// record and the batch continues.
DistortedSet build_distorted_set(const std::vector<Sample>& samples, const std::vector<int>& dims,
                                 const std::vector<Strength>& strengths, std::uint64_t seed,
                                 const std::filesystem::path& out_dir, const BuildOptions& options = {},
                                 const CodecRegistry& codecs = default_codecs());

/// Re-applies the stored spec to the reference and compares with the stored
/// image bit for bit.
bool verify_record(const DistortedRecord& record, const ImageBuffer& reference, const std::filesystem::path& set_dir,
                   const CodecRegistry& codecs = default_codecs());

std::string record_to_json_line(const DistortedRecord& r);
DistortedRecord record_from_json_line(std::string_view line);
void save_distorted_records(const std::vector<DistortedRecord>& records, const std::filesystem::path& path);
/// Throws ManifestError naming the line on malformed input or duplicate
/// (sample_id, dimension, strength) triples.
std::vector<DistortedRecord> load_distorted_records(const std::filesystem::path& path);

}  // namespace robulink
