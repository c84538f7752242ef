#include "robulink/corrupt/dimensions.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace robulink {

namespace {

constexpr std::array<DimensionInfo, kDimensionCount> kDimensions = {{
    {1, "motion_blur", "Motion blur", Step::EI, Group::Blur, true},
    {2, "bright_illumination", "Bright illumination", Step::EI, Group::Wild, true},
    {3, "dark_illumination", "Dark illumination", Step::EI, Group::Wild, true},
    {4, "blocking_obstacle", "Blocking obstacle", Step::EI, Group::Wild, true},
    {5, "lens_blur", "Lens blur", Step::CI, Group::Blur, true},
    {6, "resolution_limit", "Resolution limit", Step::CI, Group::Spatial, true},
    {7, "lens_obstacle", "Lens obstacle", Step::CI, Group::Wild, true},
    {8, "lens_shaking", "Lens shaking", Step::CI, Group::Wild, true},
    {9, "white_noise", "White noise", Step::AD, Group::Noise, false},
    {10, "color_noise", "Color noise", Step::AD, Group::Noise, false},
    {11, "impulse_noise", "Impulse noise", Step::AD, Group::Noise, false},
    {12, "multiplicative_noise", "Multiplicative noise", Step::AD, Group::Noise, false},
    {13, "clock_jitter", "Clock jittering", Step::AD, Group::Spatial, false},
    {14, "color_quantization", "Color quantization", Step::SE, Group::Chrominance, false},
    {15, "jpeg2000", "JPEG2000 codec", Step::SE, Group::Compression, false},
    {16, "jpeg", "JPEG codec", Step::SE, Group::Compression, false},
    {17, "webp", "WEBP codec", Step::SE, Group::Compression, false},
    {18, "gray_quantization", "Grayscale quantization", Step::SE, Group::Spatial, false},
    {19, "block_exchange", "Block exchange", Step::CT, Group::Spatial, false},
    {20, "block_repeat", "Block repeat", Step::CT, Group::Spatial, false},
    {21, "block_lost", "Block lost", Step::CT, Group::Spatial, false},
    {22, "block_interpolation", "Block interpolation", Step::CT, Group::Spatial, false},
    {23, "hsv_saturation", "HSV saturation", Step::RD, Group::Chrominance, false},
    {24, "lab_saturation", "LAB saturation", Step::RD, Group::Chrominance, false},
    {25, "max_brighten", "Maximum brighten", Step::RD, Group::Luminance, false},
    {26, "min_darken", "Minimum darken", Step::RD, Group::Luminance, false},
    {27, "mean_shift", "Mean shift", Step::RD, Group::Luminance, false},
    {28, "gaussian_filter", "Gaussian filter", Step::EP, Group::Blur, false},
    {29, "color_diffusion", "Color diffusion", Step::EP, Group::Chrominance, false},
    {30, "color_shift", "Color shift", Step::EP, Group::Chrominance, false},
    {31, "cnn_denoise", "CNN denoise", Step::EP, Group::Noise, false},
    {32, "sharpness_change", "Sharpness change", Step::EP, Group::Chrominance, false},
    {33, "contrast_change", "Contrast change", Step::EP, Group::Chrominance, false},
}};

// (low, mid, high) per dimension. Each row is checked by the strength
// monotonicity test over the fixture corpus.
constexpr std::array<std::array<StrengthParams, 3>, kDimensionCount> kStrengthTable = {{
    {{{5, 0}, {11, 0}, {21, 0}}},                          // 1  kernel length
    {{{1.5, 0}, {2.2, 0}, {3.2, 0}}},                      // 2  gain
    {{{0.55, 2.0}, {0.35, 4.0}, {0.18, 8.0}}},             // 3  gain, noise sigma (8-bit units)
    {{{0.10, 0}, {0.25, 0}, {0.45, 0}}},                   // 4  area fraction
    {{{2, 0}, {4, 0}, {8, 0}}},                            // 5  disk radius
    {{{2, 0}, {4, 0}, {8, 0}}},                            // 6  downsample factor
    {{{0.10, 0}, {0.25, 0}, {0.45, 0}}},                   // 7  area fraction
    {{{3, 9}, {6, 9}, {10, 9}}},                           // 8  copies, blur length
    {{{0.02, 0}, {0.05, 0}, {0.10, 0}}},                   // 9  sigma
    {{{0.04, 0}, {0.10, 0}, {0.20, 0}}},                   // 10 sigma
    {{{0.005, 0}, {0.02, 0}, {0.08, 0}}},                  // 11 probability
    {{{0.05, 0}, {0.12, 0}, {0.25, 0}}},                   // 12 sigma
    {{{1, 0}, {3, 0}, {7, 0}}},                            // 13 max row displacement
    {{{64, 0}, {16, 0}, {8, 0}}},                          // 14 palette size
    {{{40, 0}, {120, 0}, {300, 0}}},                       // 15 compression ratio
    {{{25, 0}, {10, 0}, {5, 0}}},                          // 16 quality
    {{{20, 0}, {8, 0}, {3, 0}}},                           // 17 quality
    {{{32, 0}, {8, 0}, {4, 0}}},                           // 18 levels per channel
    {{{2, 32}, {6, 32}, {12, 32}}},                        // 19 count, block size
    {{{2, 32}, {6, 32}, {12, 32}}},                        // 20
    {{{2, 32}, {6, 32}, {12, 32}}},                        // 21
    {{{2, 32}, {6, 32}, {12, 32}}},                        // 22
    {{{1.6, 0}, {2.4, 0}, {4.0, 0}}},                      // 23 saturation factor
    {{{0.6, 0}, {0.3, 0}, {0.1, 0}}},                      // 24 chroma factor
    {{{0.7, 0}, {0.5, 0}, {0.3, 0}}},                      // 25 gamma
    {{{1.4, 0}, {2.0, 0}, {3.0, 0}}},                      // 26 gamma
    {{{25, 0}, {51, 0}, {76, 0}}},                         // 27 |delta| (8-bit units)
    {{{1.5, 0}, {3, 0}, {6, 0}}},                          // 28 sigma
    {{{4, 0}, {8, 0}, {16, 0}}},                           // 29 sigma
    {{{4, 0}, {10, 0}, {20, 0}}},                          // 30 offset length
    {{{1, 0}, {2, 0}, {4, 0}}},                            // 31 iterations
    {{{2, 0}, {4, 0}, {8, 0}}},                            // 32 amount
    {{{1.8, 0}, {2.8, 0}, {4.5, 0}}},                      // 33 contrast factor
}};

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

}  // namespace

const DimensionInfo& dimension_info(int id) {
    if (id < 1 || id > kDimensionCount) {
        throw CorruptionError("corruption dimension must be in 1..33, got " + std::to_string(id));
    }
    return kDimensions[id - 1];
}

std::span<const DimensionInfo> all_dimensions() { return kDimensions; }

std::optional<int> parse_dimension(std::string_view text) {
    int id = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), id);
    if (ec == std::errc() && ptr == text.data() + text.size()) {
        if (id >= 1 && id <= kDimensionCount) {
            return id;
        }
        return std::nullopt;
    }
    const std::string key = lower(text);
    for (const auto& d : kDimensions) {
        if (d.slug == key) {
            return d.id;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Step s) {
    switch (s) {
        case Step::EI: return "EI";
        case Step::CI: return "CI";
        case Step::AD: return "AD";
        case Step::SE: return "SE";
        case Step::CT: return "CT";
        case Step::RD: return "RD";
        case Step::EP: return "EP";
    }
    return "?";
}

std::string_view step_title(Step s) {
    switch (s) {
        case Step::EI: return "Environment";
        case Step::CI: return "Camera";
        case Step::AD: return "Analog";
        case Step::SE: return "Source";
        case Step::CT: return "Channel";
        case Step::RD: return "Receiver";
        case Step::EP: return "Enhancement";
    }
    return "?";
}

std::string_view to_string(Group g) {
    switch (g) {
        case Group::Blur: return "blur";
        case Group::Luminance: return "luminance";
        case Group::Chrominance: return "chrominance";
        case Group::Spatial: return "spatial";
        case Group::Noise: return "noise";
        case Group::Compression: return "compression";
        case Group::Wild: return "wild";
    }
    return "?";
}

std::string_view group_title(Group g) {
    switch (g) {
        case Group::Blur: return "Blur";
        case Group::Luminance: return "Luminance";
        case Group::Chrominance: return "Color";
        case Group::Spatial: return "Spatial";
        case Group::Noise: return "Noise";
        case Group::Compression: return "Compress";
        case Group::Wild: return "Wild";
    }
    return "?";
}

std::string_view to_string(Strength s) {
    switch (s) {
        case Strength::None: return "none";
        case Strength::Low: return "low";
        case Strength::Mid: return "mid";
        case Strength::High: return "high";
    }
    return "?";
}

std::optional<Strength> parse_strength(std::string_view text) {
    const std::string key = lower(text);
    if (key == "none") return Strength::None;
    if (key == "low") return Strength::Low;
    if (key == "mid") return Strength::Mid;
    if (key == "high") return Strength::High;
    return std::nullopt;
}

std::optional<Step> parse_step(std::string_view text) {
    const std::string key = lower(text);
    for (Step s : kAllSteps) {
        if (lower(to_string(s)) == key) {
            return s;
        }
    }
    return std::nullopt;
}

std::optional<Group> parse_group(std::string_view text) {
    const std::string key = lower(text);
    for (Group g : kAllGroups) {
        if (to_string(g) == key) {
            return g;
        }
    }
    return std::nullopt;
}

StrengthParams strength_params(int dimension, Strength strength) {
    dimension_info(dimension);
    if (strength == Strength::None) {
        throw CorruptionError("strength 'none' has no calibrated parameters");
    }
    return kStrengthTable[dimension - 1][static_cast<int>(strength) - 1];
}

}  // namespace robulink
