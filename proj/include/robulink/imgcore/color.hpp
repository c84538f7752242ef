#pragma once

#include <array>
#include <vector>

#include "robulink/imgcore/image.hpp"

namespace robulink {

enum class ColorSpace { YCbCr, HSV, CIELAB };

using Triple = std::array<double, 3>;

// Scalar conversions on normalized sRGB in [0,1].
//  YCbCr: ITU-R BT.601 full range, Cb/Cr offset so gray is 0.5.
//  HSV:   hexcone model, H in degrees [0,360), S and V in [0,1].
//  CIELAB: D65 white, 2 degree observer, L in [0,100].
Triple rgb_to_ycbcr(const Triple& rgb) noexcept;
Triple ycbcr_to_rgb(const Triple& ycc) noexcept;
Triple rgb_to_hsv(const Triple& rgb) noexcept;
Triple hsv_to_rgb(const Triple& hsv) noexcept;
Triple rgb_to_lab(const Triple& rgb) noexcept;
Triple lab_to_rgb(const Triple& lab) noexcept;

/// lab_to_rgb with chroma pulled toward neutral (same L) until the result
/// lies inside the sRGB cube.
Triple lab_to_rgb_in_gamut(const Triple& lab) noexcept;

double srgb_to_linear(double v) noexcept;
double linear_to_srgb(double v) noexcept;

/// BT.601 luma on gamma-encoded values.
inline double luma(double r, double g, double b) noexcept { return 0.299 * r + 0.587 * g + 0.114 * b; }

/// Three full-resolution planes in one color space.
struct ColorPlanes {
    ColorSpace space = ColorSpace::YCbCr;
    int width = 0;
    int height = 0;
    std::array<std::vector<double>, 3> plane;

    double& at(int p, int x, int y) { return plane[p][static_cast<std::size_t>(y) * width + x]; }
    double at(int p, int x, int y) const { return plane[p][static_cast<std::size_t>(y) * width + x]; }
};

ColorPlanes convert_colorspace(const FloatImage& img, ColorSpace target);
ColorPlanes convert_colorspace(const ImageBuffer& img, ColorSpace target);

/// Inverse of convert_colorspace; values are left unclamped.
FloatImage to_rgb(const ColorPlanes& planes);

}  // namespace robulink
