#include <algorithm>
#include <cmath>
#include <numbers>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"
#include "robulink/imgcore/color.hpp"
#include "robulink/imgcore/filter.hpp"
#include "robulink/rng.hpp"

namespace robulink {

namespace {

int max_radius(const ImageBuffer& img) { return (std::min(img.width(), img.height()) - 1) / 2; }

FloatImage gaussian_blur(const FloatImage& f, double sigma, int limit) {
    const auto taps = gaussian_taps(sigma, limit);
    return convolve_separable(f, taps, taps);
}

// Joint-range bilateral filter; repeated passes flatten texture while keeping
// strong edges, which is the look of an over-aggressive learned denoiser.
FloatImage bilateral(const FloatImage& src, int radius, double sigma_space, double sigma_range) {
    const int w = src.width();
    const int h = src.height();
    std::vector<double> spatial(static_cast<std::size_t>(2 * radius + 1) * (2 * radius + 1));
    for (int j = -radius; j <= radius; ++j) {
        for (int i = -radius; i <= radius; ++i) {
            spatial[static_cast<std::size_t>(j + radius) * (2 * radius + 1) + (i + radius)] =
                std::exp(-(i * i + j * j) / (2.0 * sigma_space * sigma_space));
        }
    }
    const double range_scale = -1.0 / (2.0 * sigma_range * sigma_range);
    FloatImage out(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double c0 = src.at(x, y, 0);
            const double c1 = src.at(x, y, 1);
            const double c2 = src.at(x, y, 2);
            double acc[3] = {0, 0, 0};
            double norm = 0.0;
            for (int j = -radius; j <= radius; ++j) {
                const int sy = std::clamp(y + j, 0, h - 1);
                for (int i = -radius; i <= radius; ++i) {
                    const int sx = std::clamp(x + i, 0, w - 1);
                    const double d0 = src.at(sx, sy, 0) - c0;
                    const double d1 = src.at(sx, sy, 1) - c1;
                    const double d2 = src.at(sx, sy, 2) - c2;
                    const double wgt = spatial[static_cast<std::size_t>(j + radius) * (2 * radius + 1) + (i + radius)] *
                                       std::exp(range_scale * (d0 * d0 + d1 * d1 + d2 * d2));
                    acc[0] += wgt * src.at(sx, sy, 0);
                    acc[1] += wgt * src.at(sx, sy, 1);
                    acc[2] += wgt * src.at(sx, sy, 2);
                    norm += wgt;
                }
            }
            out.at(x, y, 0) = acc[0] / norm;
            out.at(x, y, 1) = acc[1] / norm;
            out.at(x, y, 2) = acc[2] / norm;
        }
    }
    return out;
}

}  // namespace

std::pair<int, int> color_shift_offset(double length, std::uint64_t key) {
    SubStream rng(key);
    const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return {static_cast<int>(std::lround(length * std::cos(angle))),
            static_cast<int>(std::lround(length * std::sin(angle)))};
}

ImageBuffer shift_green(const ImageBuffer& img, int dx, int dy) {
    ImageBuffer out = img;
    for (int y = 0; y < img.height(); ++y) {
        const int sy = std::clamp(y - dy, 0, img.height() - 1);
        for (int x = 0; x < img.width(); ++x) {
            const int sx = std::clamp(x - dx, 0, img.width() - 1);
            out.at(x, y, 1) = img.at(sx, sy, 1);
        }
    }
    return out;
}

ImageBuffer enhance_artifact(const ImageBuffer& img, EnhanceArtifact kind, double param, std::uint64_t key) {
    switch (kind) {
        case EnhanceArtifact::GaussianFilter: {
            if (param <= 0.0) {
                return img;
            }
            return gaussian_blur(img.to_float(), param, max_radius(img)).clamp_quantize();
        }
        case EnhanceArtifact::ColorDiffusion: {
            if (param <= 0.0) {
                return img;
            }
            ColorPlanes lab = convert_colorspace(img, ColorSpace::CIELAB);
            const auto taps = gaussian_taps(param, max_radius(img));
            lab.plane[1] = convolve_plane(lab.plane[1], lab.width, lab.height, taps, taps);
            lab.plane[2] = convolve_plane(lab.plane[2], lab.width, lab.height, taps, taps);
            FloatImage f(img.width(), img.height());
            for (std::size_t i = 0; i < img.pixel_count(); ++i) {
                const Triple rgb = lab_to_rgb_in_gamut({lab.plane[0][i], lab.plane[1][i], lab.plane[2][i]});
                for (int c = 0; c < 3; ++c) {
                    f.data()[3 * i + c] = rgb[c];
                }
            }
            return f.clamp_quantize();
        }
        case EnhanceArtifact::ColorShift: {
            const auto [dx, dy] = color_shift_offset(param, key);
            return shift_green(img, dx, dy);
        }
        case EnhanceArtifact::CnnDenoiseProxy: {
            const int iterations = static_cast<int>(std::lround(param));
            if (iterations <= 0) {
                return img;
            }
            const int radius = std::min(5, max_radius(img));
            FloatImage f = img.to_float();
            for (int i = 0; i < iterations; ++i) {
                f = bilateral(f, radius, 3.0, 0.12);
            }
            return f.clamp_quantize();
        }
        case EnhanceArtifact::Sharpen: {
            if (param == 0.0) {
                return img;
            }
            const FloatImage f = img.to_float();
            const FloatImage blurred = gaussian_blur(f, 1.0, max_radius(img));
            FloatImage out(img.width(), img.height());
            for (std::size_t i = 0; i < f.data().size(); ++i) {
                out.data()[i] = f.data()[i] + param * (f.data()[i] - blurred.data()[i]);
            }
            return out.clamp_quantize();
        }
        case EnhanceArtifact::Contrast: {
            if (param == 1.0) {
                return img;
            }
            FloatImage f = img.to_float();
            double mean = 0.0;
            for (double v : f.data()) {
                mean += v;
            }
            mean /= static_cast<double>(f.data().size());
            for (double& v : f.data()) {
                v = mean + param * (v - mean);
            }
            return f.clamp_quantize();
        }
    }
    return img;
}

}  // namespace robulink
