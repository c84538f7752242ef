#pragma once

#include <span>
#include <vector>

#include "robulink/imgcore/image.hpp"

namespace robulink {

/// Dense 2-D correlation kernel with odd sides, anchored at its center.
struct Kernel {
    int width = 1;
    int height = 1;
    std::vector<double> weights{1.0};

    Kernel() = default;
    Kernel(int w, int h, std::vector<double> values);

    double at(int x, int y) const { return weights[static_cast<std::size_t>(y) * width + x]; }
    double sum() const;
    void normalize();

    static Kernel identity() { return Kernel(); }
    static Kernel box(int side);
    /// Isotropic Gaussian truncated at ceil(3 sigma).
    static Kernel gaussian(double sigma);
    /// Anti-aliased uniform disk.
    static Kernel disk(double radius);
    /// Line segment of the given length through the center.
    static Kernel motion(int length, double angle_rad);
};

/// Per-channel correlation with replicate border. Kernel sides must be odd
/// and no larger than the image.
FloatImage convolve(const FloatImage& img, const Kernel& kernel);
ImageBuffer convolve(const ImageBuffer& img, const Kernel& kernel);

/// Row pass with `horizontal` then column pass with `vertical` (both odd length).
FloatImage convolve_separable(const FloatImage& img, std::span<const double> horizontal,
                              std::span<const double> vertical);

/// Same operation on a single plane.
std::vector<double> convolve_plane(std::span<const double> plane, int width, int height,
                                   std::span<const double> horizontal, std::span<const double> vertical);

/// Normalized 1-D Gaussian taps for sigma, radius ceil(3 sigma) capped at max_radius.
std::vector<double> gaussian_taps(double sigma, int max_radius);

enum class ResampleFilter { Bilinear, Bicubic };

/// Separable resampling with pixel-center alignment and replicate border.
/// Bicubic uses the Keys kernel with a = -0.5.
FloatImage resample(const FloatImage& img, int new_width, int new_height, ResampleFilter filter);
ImageBuffer resample(const ImageBuffer& img, int new_width, int new_height, ResampleFilter filter);

}  // namespace robulink
