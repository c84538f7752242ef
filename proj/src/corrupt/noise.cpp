#include <algorithm>
#include <cmath>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"
#include "robulink/imgcore/color.hpp"
#include "robulink/rng.hpp"

namespace robulink {

namespace {

// Largest s in [0,1] keeping y + s*d inside [0,1] for each channel.
double chroma_scale(double y, const double d[3]) {
    double s = 1.0;
    for (int c = 0; c < 3; ++c) {
        if (d[c] > 0.0 && y + d[c] > 1.0) {
            s = std::min(s, (1.0 - y) / d[c]);
        } else if (d[c] < 0.0 && y + d[c] < 0.0) {
            s = std::min(s, -y / d[c]);
        }
    }
    return std::max(s, 0.0);
}

}  // namespace

ImageBuffer inject_noise(const ImageBuffer& img, NoiseKind kind, double amount, std::uint64_t key) {
    if (kind == NoiseKind::Impulse ? (amount < 0.0 || amount > 1.0) : amount < 0.0) {
        throw CorruptionError("noise amount out of range: " + std::to_string(amount));
    }
    if (amount == 0.0) {
        return img;
    }
    SubStream rng(key);
    const auto src = img.data();
    const std::size_t n = img.pixel_count();

    switch (kind) {
        case NoiseKind::White: {
            FloatImage f = img.to_float();
            for (double& v : f.data()) {
                v += amount * rng.normal();
            }
            return f.clamp_quantize();
        }
        case NoiseKind::Multiplicative: {
            FloatImage f = img.to_float();
            for (double& v : f.data()) {
                v *= 1.0 + amount * rng.normal();
            }
            return f.clamp_quantize();
        }
        case NoiseKind::Impulse: {
            ImageBuffer out = img;
            auto dst = out.data();
            for (std::size_t i = 0; i < n; ++i) {
                const bool hit = rng.uniform() < amount;
                const bool salt = (rng.next_u64() >> 63) != 0;
                if (hit) {
                    const std::uint8_t v = salt ? 255 : 0;
                    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = v;
                }
            }
            return out;
        }
        case NoiseKind::Color: {
            FloatImage f(img.width(), img.height());
            auto dst = f.data();
            for (std::size_t i = 0; i < n; ++i) {
                const Triple rgb{src[3 * i] / 255.0, src[3 * i + 1] / 255.0, src[3 * i + 2] / 255.0};
                Triple ycc = rgb_to_ycbcr(rgb);
                ycc[1] += amount * rng.normal();
                ycc[2] += amount * rng.normal();
                const Triple noisy = ycbcr_to_rgb(ycc);
                // Pull chroma back toward gray until the pixel fits the gamut so
                // clipping never moves luma.
                const double y = ycc[0];
                const double d[3] = {noisy[0] - y, noisy[1] - y, noisy[2] - y};
                const double s = chroma_scale(y, d);
                for (int c = 0; c < 3; ++c) {
                    dst[3 * i + c] = y + s * d[c];
                }
            }
            return f.clamp_quantize();
        }
    }
    return img;
}

}  // namespace robulink
