/**
 * @file exchange.hpp
 * @brief One model call and the append-only log that doubles as a cache.
 */
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace robulink {

inline constexpr std::string_view kReferenceKey = "reference";

struct Exchange {
    std::string model;
    std::string sample_id;
    /// Corruption label, or "reference" for the clean image.
    std::string corruption_key;
    std::string prompt;
    /// SHA-256 of the raster (width, height and samples); empty for text-only calls.
    std::string image_digest;
    std::string response;
    /// UTC, ISO-8601.
    std::string timestamp;
    int attempts = 0;

    bool operator==(const Exchange&) const = default;
};

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

struct ExchangeKey {
    std::string model;
    std::string sample_id;
    std::string corruption_key;
    std::string prompt_hash;

    std::string str() const;
    bool operator==(const ExchangeKey&) const = default;
};

ExchangeKey key_of(const Exchange& e);

std::string exchange_to_json_line(const Exchange& e);
Exchange exchange_from_json_line(std::string_view line);

/// Current UTC time as ISO-8601 with a trailing Z.
std::string utc_timestamp();

/// Append-only exchange log. Existing entries are loaded on construction;
/// lookups read an in-memory index, appends write through to the file under
/// a single-writer lock. An empty path keeps everything in memory.
class ExchangeCache {
public:
    ExchangeCache() = default;
    explicit ExchangeCache(std::filesystem::path path);

    std::optional<Exchange> find(const ExchangeKey& key) const;
    /// Later entries for the same key win on reload; append itself never rewrites.
    void append(const Exchange& e);
    std::size_t size() const;
    /// Snapshot of all entries in log order.
    std::vector<Exchange> entries() const;
    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
    mutable std::mutex mu_;
    std::vector<Exchange> log_;
    std::map<std::string, std::size_t> index_;
    std::ofstream out_;
};

}  // namespace robulink
