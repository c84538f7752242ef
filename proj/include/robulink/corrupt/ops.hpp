/**
 * @file ops.hpp
 * @brief Corruption operator families. Each takes a 64-bit stream key from which
 *        all of its random draws are derived, and quantizes to 8 bits once.
 */
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "robulink/imgcore/image.hpp"

namespace robulink {

/// Side information an operator can report alongside its output.
struct CorruptionMetadata {
    /// Every pixel outside these rectangles is bit-identical to the input.
    /// Empty means the operator is global.
    std::vector<BlockRect> regions;
    std::vector<std::string> warnings;
    bool synthetic_wild = false;
};

struct OpResult {
    ImageBuffer image;
    CorruptionMetadata meta;
};

// --- noise -----------------------------------------------------------------

enum class NoiseKind { White, Color, Impulse, Multiplicative };

/// `amount` is sigma (normalized units) for white/color/multiplicative and the
/// per-pixel probability for impulse.
ImageBuffer inject_noise(const ImageBuffer& img, NoiseKind kind, double amount, std::uint64_t key);

// --- macro-block channel faults -------------------------------------------

enum class BlockFault { Exchange, Repeat, Lost, Interpolate };

OpResult corrupt_blocks(const ImageBuffer& img, BlockFault kind, int block_size, int count, std::uint64_t key);

// --- tone / color faults ---------------------------------------------------

enum class ToneFault { HsvSaturation, LabSaturation, MaxBrighten, MinDarken, MeanShift, ColorQuant, GrayQuant };

ImageBuffer tone_color_fault(const ImageBuffer& img, ToneFault kind, double param, std::uint64_t key);

/// Uniform scalar quantizer on one 8-bit sample with `levels` levels.
std::uint8_t quantize_uniform(std::uint8_t v, int levels) noexcept;

/// Deterministic median-cut palette reduction to at most `colors` entries.
ImageBuffer median_cut(const ImageBuffer& img, int colors);

// --- capture-side approximations ------------------------------------------

enum class OpticsFault {
    MotionBlur,
    LensBlur,
    ResolutionLimit,
    BrightIllumination,
    DarkIllumination,
    BlockingObstacle,
    LensObstacle,
    LensShaking
};

struct OpticsParams {
    double value = 0.0;
    double aux = 0.0;
};

OpResult optics_sim(const ImageBuffer& img, OpticsFault kind, OpticsParams param, std::uint64_t key);

/// Geometry of the seeded occluder for a given area fraction; exposed so tests
/// can check locality independently.
BlockRect obstacle_rect(int width, int height, double area_fraction, std::uint64_t key);

// --- enhancement post-processing artifacts ---------------------------------

enum class EnhanceArtifact { GaussianFilter, ColorDiffusion, ColorShift, CnnDenoiseProxy, Sharpen, Contrast };

ImageBuffer enhance_artifact(const ImageBuffer& img, EnhanceArtifact kind, double param, std::uint64_t key);

/// Green-plane translation used by the color-shift artifact.
ImageBuffer shift_green(const ImageBuffer& img, int dx, int dy);

/// Seeded offset vector of the given length for the color-shift artifact.
std::pair<int, int> color_shift_offset(double length, std::uint64_t key);

}  // namespace robulink
