#include "support.hpp"

#include <unistd.h>

#include <atomic>
#include <fstream>
#include <sstream>

#include "robulink/imgcore/image_io.hpp"

namespace testing {

std::filesystem::path fixture_dir() { return ROBULINK_FIXTURE_DIR; }

const std::vector<robulink::ImageBuffer>& corpus() {
    static const std::vector<robulink::ImageBuffer> images = [] {
        std::vector<robulink::ImageBuffer> v;
        for (int i = 0; i < oracle::kCorpusSize; ++i)
            v.push_back(robulink::read_image(fixture_dir() / "corpus" / oracle::fixture_name(i)));
        return v;
    }();
    return images;
}

ScratchDir::ScratchDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("robulink-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

ScratchDir::~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& p, const std::string& text) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << text;
}

std::string read_text(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

robulink::ImageBuffer noise_image(int w, int h, std::uint64_t seed) {
    std::uint64_t s = seed * 0x9E3779B97F4A7C15ull + 1;
    std::vector<std::uint8_t> px(static_cast<std::size_t>(w) * h * 3);
    for (auto& b : px) {
        s ^= s >> 12, s ^= s << 25, s ^= s >> 27;
        b = static_cast<std::uint8_t>((s * 0x2545F4914F6CDD1Dull) >> 56);
    }
    return {w, h, std::move(px)};
}

}  // namespace testing
