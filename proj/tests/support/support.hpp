// Glue between the oracle types and the library types, plus scratch
// directories for tests that touch the filesystem.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fixture_corpus.hpp"
#include "robulink/imgcore/image.hpp"

namespace testing {

inline robulink::ImageBuffer to_buffer(const oracle::RawImage& r) { return {r.width, r.height, r.rgb}; }

inline oracle::RawImage to_raw(const robulink::ImageBuffer& b) {
    return {b.width(), b.height(), std::vector<std::uint8_t>(b.data().begin(), b.data().end())};
}

std::filesystem::path fixture_dir();

// The committed corpus, read through the library's image reader.
const std::vector<robulink::ImageBuffer>& corpus();

class ScratchDir {
public:
    explicit ScratchDir(const std::string& tag);
    ~ScratchDir();
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& leaf) const { return path_ / leaf; }

private:
    std::filesystem::path path_;
};

void write_text(const std::filesystem::path& p, const std::string& text);
std::string read_text(const std::filesystem::path& p);

// Small random RGB image from the oracle generator family.
robulink::ImageBuffer noise_image(int w, int h, std::uint64_t seed);

}  // namespace testing
