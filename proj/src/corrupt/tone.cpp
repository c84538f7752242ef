#include <algorithm>
#include <array>
#include <cmath>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"
#include "robulink/imgcore/color.hpp"
#include "robulink/rng.hpp"

namespace robulink {

namespace {

struct ColorBox {
    std::size_t begin;
    std::size_t end;
    std::array<int, 3> lo;
    std::array<int, 3> hi;

    int widest_channel() const {
        int best = 0;
        for (int c = 1; c < 3; ++c) {
            if (hi[c] - lo[c] > hi[best] - lo[best]) {
                best = c;
            }
        }
        return best;
    }
    int range() const {
        const int c = widest_channel();
        return hi[c] - lo[c];
    }
};

using Rgb = std::array<std::uint8_t, 3>;
using Item = std::pair<Rgb, std::uint32_t>;

void fit_box(const std::vector<Item>& items, ColorBox& box) {
    box.lo = {255, 255, 255};
    box.hi = {0, 0, 0};
    for (std::size_t i = box.begin; i < box.end; ++i) {
        for (int c = 0; c < 3; ++c) {
            box.lo[c] = std::min<int>(box.lo[c], items[i].first[c]);
            box.hi[c] = std::max<int>(box.hi[c], items[i].first[c]);
        }
    }
}

}  // namespace

std::uint8_t quantize_uniform(std::uint8_t v, int levels) noexcept {
    if (levels >= 256 || levels < 2) {
        return levels < 2 ? 0 : v;
    }
    const double q = std::floor(v * (levels - 1) / 255.0 + 0.5);
    return static_cast<std::uint8_t>(std::floor(q * 255.0 / (levels - 1) + 0.5));
}

ImageBuffer median_cut(const ImageBuffer& img, int colors) {
    if (colors < 1) {
        throw CorruptionError("palette size must be positive");
    }
    const std::size_t n = img.pixel_count();
    // (color, pixel index) pairs so the final mapping is by box membership.
    std::vector<Item> items(n);
    for (std::size_t i = 0; i < n; ++i) {
        items[i] = {{img.data()[3 * i], img.data()[3 * i + 1], img.data()[3 * i + 2]}, static_cast<std::uint32_t>(i)};
    }
    auto refresh = [&](ColorBox& box) { fit_box(items, box); };

    std::vector<ColorBox> boxes{{0, n, {}, {}}};
    refresh(boxes[0]);
    while (static_cast<int>(boxes.size()) < colors) {
        std::size_t pick = boxes.size();
        for (std::size_t b = 0; b < boxes.size(); ++b) {
            if (boxes[b].range() == 0 || boxes[b].end - boxes[b].begin < 2) {
                continue;
            }
            if (pick == boxes.size() || boxes[b].range() > boxes[pick].range() ||
                (boxes[b].range() == boxes[pick].range() &&
                 boxes[b].end - boxes[b].begin > boxes[pick].end - boxes[pick].begin)) {
                pick = b;
            }
        }
        if (pick == boxes.size()) {
            break;
        }
        ColorBox box = boxes[pick];
        const int ch = box.widest_channel();
        std::stable_sort(items.begin() + box.begin, items.begin() + box.end, [ch](const auto& a, const auto& b) {
            if (a.first[ch] != b.first[ch]) return a.first[ch] < b.first[ch];
            if (a.first != b.first) return a.first < b.first;
            return a.second < b.second;
        });
        std::size_t mid = box.begin + (box.end - box.begin) / 2;
        // Keep equal colors on one side of the cut.
        const std::uint8_t split_value = items[mid].first[ch];
        std::size_t cut = mid;
        while (cut > box.begin && items[cut - 1].first[ch] == split_value) {
            --cut;
        }
        if (cut == box.begin) {
            cut = mid;
            while (cut < box.end && items[cut].first[ch] == split_value) {
                ++cut;
            }
        }
        ColorBox left{box.begin, cut, {}, {}};
        ColorBox right{cut, box.end, {}, {}};
        refresh(left);
        refresh(right);
        boxes[pick] = left;
        boxes.push_back(right);
    }

    ImageBuffer out(img.width(), img.height());
    for (const ColorBox& box : boxes) {
        std::uint64_t sum[3] = {0, 0, 0};
        for (std::size_t i = box.begin; i < box.end; ++i) {
            for (int c = 0; c < 3; ++c) {
                sum[c] += items[i].first[c];
            }
        }
        const std::uint64_t count = box.end - box.begin;
        Rgb mean{};
        for (int c = 0; c < 3; ++c) {
            mean[c] = static_cast<std::uint8_t>((sum[c] + count / 2) / count);
        }
        for (std::size_t i = box.begin; i < box.end; ++i) {
            const std::uint32_t p = items[i].second;
            for (int c = 0; c < 3; ++c) {
                out.data()[3 * p + c] = mean[c];
            }
        }
    }
    return out;
}

ImageBuffer tone_color_fault(const ImageBuffer& img, ToneFault kind, double param, std::uint64_t key) {
    const auto src = img.data();
    const std::size_t n = img.pixel_count();
    switch (kind) {
        case ToneFault::HsvSaturation: {
            if (param < 0.0) {
                throw CorruptionError("saturation factor must be non-negative");
            }
            if (param == 1.0) {
                return img;
            }
            FloatImage f(img.width(), img.height());
            for (std::size_t i = 0; i < n; ++i) {
                Triple hsv = rgb_to_hsv({src[3 * i] / 255.0, src[3 * i + 1] / 255.0, src[3 * i + 2] / 255.0});
                hsv[1] = std::min(1.0, hsv[1] * param);
                const Triple rgb = hsv_to_rgb(hsv);
                for (int c = 0; c < 3; ++c) {
                    f.data()[3 * i + c] = rgb[c];
                }
            }
            return f.clamp_quantize();
        }
        case ToneFault::LabSaturation: {
            if (param < 0.0) {
                throw CorruptionError("chroma factor must be non-negative");
            }
            if (param == 1.0) {
                return img;
            }
            FloatImage f(img.width(), img.height());
            for (std::size_t i = 0; i < n; ++i) {
                const Triple lab = rgb_to_lab({src[3 * i] / 255.0, src[3 * i + 1] / 255.0, src[3 * i + 2] / 255.0});
                const Triple rgb = lab_to_rgb_in_gamut({lab[0], lab[1] * param, lab[2] * param});
                for (int c = 0; c < 3; ++c) {
                    f.data()[3 * i + c] = rgb[c];
                }
            }
            return f.clamp_quantize();
        }
        case ToneFault::MaxBrighten: {
            if (param <= 0.0 || param > 1.0) {
                throw CorruptionError("max-brighten gamma must be in (0,1]");
            }
            const double peak = *std::max_element(src.begin(), src.end()) / 255.0;
            if (peak == 0.0 || param == 1.0) {
                return img;
            }
            FloatImage f = img.to_float();
            for (double& v : f.data()) {
                v = peak * std::pow(v / peak, param);
            }
            return f.clamp_quantize();
        }
        case ToneFault::MinDarken: {
            if (param < 1.0) {
                throw CorruptionError("min-darken gamma must be >= 1");
            }
            const double floor_v = *std::min_element(src.begin(), src.end()) / 255.0;
            if (floor_v >= 1.0 || param == 1.0) {
                return img;
            }
            FloatImage f = img.to_float();
            const double span = 1.0 - floor_v;
            for (double& v : f.data()) {
                v = floor_v + span * std::pow((v - floor_v) / span, param);
            }
            return f.clamp_quantize();
        }
        case ToneFault::MeanShift: {
            const int magnitude = static_cast<int>(std::lround(std::abs(param)));
            if (magnitude == 0) {
                return img;
            }
            SubStream rng(key);
            const int delta = (rng.next_u64() >> 63) ? magnitude : -magnitude;
            ImageBuffer out = img;
            for (auto& v : out.data()) {
                v = static_cast<std::uint8_t>(std::clamp(static_cast<int>(v) + delta, 0, 255));
            }
            return out;
        }
        case ToneFault::ColorQuant:
            return median_cut(img, static_cast<int>(std::lround(param)));
        case ToneFault::GrayQuant: {
            const int levels = static_cast<int>(std::lround(param));
            if (levels < 2) {
                throw CorruptionError("quantizer needs at least 2 levels");
            }
            ImageBuffer out = img;
            for (auto& v : out.data()) {
                v = quantize_uniform(v, levels);
            }
            return out;
        }
    }
    return img;
}

}  // namespace robulink
