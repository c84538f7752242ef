#include "fixture_corpus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace oracle {

namespace {

// xorshift64*; deliberately different from the library's generator.
struct Xs {
    std::uint64_t s;
    explicit Xs(std::uint64_t seed) : s(seed ? seed : 0x2545F4914F6CDD1DULL) {}
    std::uint64_t next() {
        s ^= s >> 12;
        s ^= s << 25;
        s ^= s >> 27;
        return s * 0x2545F4914F6CDD1DULL;
    }
    double unit() { return static_cast<double>(next() >> 11) / 9007199254740992.0; }
    int range(int lo, int hi) { return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
};

std::uint8_t clamp8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace

RawImage corpus_image(int index, std::uint64_t seed) {
    Xs rng(seed * 1000003ULL + static_cast<std::uint64_t>(index) * 7919ULL + 1);
    for (int i = 0; i < 4; ++i) rng.next();
    RawImage img{kCorpusSide, kCorpusSide, std::vector<std::uint8_t>(kCorpusSide * kCorpusSide * 3)};
    const int n = kCorpusSide;

    // background: two-color linear gradient at a random angle
    double c0[3], c1[3];
    for (int c = 0; c < 3; ++c) {
        c0[c] = 30 + 190 * rng.unit();
        c1[c] = 30 + 190 * rng.unit();
    }
    const double ang = rng.unit() * 6.283185307179586;
    const double ca = std::cos(ang), sa = std::sin(ang);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double t = std::clamp(0.5 + ((x - n / 2.0) * ca + (y - n / 2.0) * sa) / n, 0.0, 1.0);
            for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(c0[c] + (c1[c] - c0[c]) * t);
        }
    }

    // stripes on some images
    if (index % 3 == 0) {
        const int period = rng.range(6, 16);
        const double amp = 20 + 30 * rng.unit();
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                const double s = std::sin(6.283185307179586 * (x + 0.5 * y) / period) * amp;
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(img.at(x, y, c) + s);
            }
    }

    // filled shapes: rectangles and discs
    const int shapes = rng.range(3, 7);
    for (int k = 0; k < shapes; ++k) {
        double col[3];
        for (int c = 0; c < 3; ++c) col[c] = 255 * rng.unit();
        const int cx = rng.range(0, n - 1), cy = rng.range(0, n - 1);
        const int r = rng.range(8, 30);
        const bool disc = rng.next() & 1;
        for (int y = std::max(0, cy - r); y < std::min(n, cy + r); ++y)
            for (int x = std::max(0, cx - r); x < std::min(n, cx + r); ++x) {
                if (disc && (x - cx) * (x - cx) + (y - cy) * (y - cy) > r * r) continue;
                for (int c = 0; c < 3; ++c) img.at(x, y, c) = clamp8(col[c]);
            }
    }

    // mild texture noise everywhere
    const double amp = 4 + 10 * rng.unit();
    for (auto& v : img.rgb) v = clamp8(v + amp * (rng.unit() - 0.5) * 2);
    return img;
}

std::vector<RawImage> fixture_corpus(std::uint64_t seed) {
    std::vector<RawImage> out;
    for (int i = 0; i < kCorpusSize; ++i) out.push_back(corpus_image(i, seed));
    return out;
}

}  // namespace oracle

namespace oracle {

std::vector<std::uint8_t> encode_p6(const RawImage& img) {
    const std::string header = "P6\n" + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.insert(out.end(), img.rgb.begin(), img.rgb.end());
    return out;
}

std::string fixture_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "img%02d.p6", index);
    return buf;
}

}  // namespace oracle
