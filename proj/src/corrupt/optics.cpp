#include <algorithm>
#include <cmath>
#include <numbers>

#include "robulink/corrupt/dimensions.hpp"
#include "robulink/corrupt/ops.hpp"
#include "robulink/imgcore/filter.hpp"
#include "robulink/rng.hpp"

namespace robulink {

namespace {

struct Segment {
    double cx;
    double cy;
    double angle;
};

// Sum of unit line segments of `length` centered at each offset, normalized.
Kernel shake_kernel(const std::vector<Segment>& segments, int length) {
    double extent = 0.0;
    for (const auto& s : segments) {
        extent = std::max({extent, std::abs(s.cx), std::abs(s.cy)});
    }
    const int r = static_cast<int>(std::ceil(extent + length / 2.0)) + 1;
    const int side = 2 * r + 1;
    std::vector<double> w(static_cast<std::size_t>(side) * side, 0.0);
    const double half = (length - 1) / 2.0;
    const int samples = 16 * std::max(length, 1);
    for (const auto& s : segments) {
        const double dx = std::cos(s.angle);
        const double dy = std::sin(s.angle);
        for (int i = 0; i <= samples; ++i) {
            const double t = -half + 2.0 * half * i / samples;
            const double px = r + s.cx + t * dx;
            const double py = r + s.cy + t * dy;
            const int x0 = static_cast<int>(std::floor(px));
            const int y0 = static_cast<int>(std::floor(py));
            const double fx = px - x0;
            const double fy = py - y0;
            const auto splat = [&](int x, int y, double weight) {
                if (x >= 0 && x < side && y >= 0 && y < side) {
                    w[static_cast<std::size_t>(y) * side + x] += weight;
                }
            };
            splat(x0, y0, (1 - fx) * (1 - fy));
            splat(x0 + 1, y0, fx * (1 - fy));
            splat(x0, y0 + 1, (1 - fx) * fy);
            splat(x0 + 1, y0 + 1, fx * fy);
        }
    }
    Kernel k(side, side, std::move(w));
    k.normalize();
    return k;
}

// Largest odd side that fits inside the image.
int max_kernel_side(const ImageBuffer& img) {
    const int m = std::min(img.width(), img.height());
    return m % 2 == 1 ? m : m - 1;
}

ImageBuffer convolve_fitting(const ImageBuffer& img, const Kernel& k) {
    if (k.width <= max_kernel_side(img)) {
        return convolve(img, k);
    }
    // Crop the kernel symmetrically to the image and renormalize.
    const int side = max_kernel_side(img);
    const int off = (k.width - side) / 2;
    std::vector<double> w(static_cast<std::size_t>(side) * side);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            w[static_cast<std::size_t>(y) * side + x] = k.at(x + off, y + off);
        }
    }
    Kernel cropped(side, side, std::move(w));
    cropped.normalize();
    return convolve(img, cropped);
}

}  // namespace

BlockRect obstacle_rect(int width, int height, double area_fraction, std::uint64_t key) {
    SubStream rng(key);
    const double target = std::clamp(area_fraction, 0.0, 1.0) * width * height;
    const double aspect = std::exp(rng.uniform(std::log(0.6), std::log(1.6)));
    int w = static_cast<int>(std::lround(std::sqrt(target * aspect)));
    w = std::clamp(w, 1, width);
    int h = static_cast<int>(std::lround(target / w));
    if (h > height) {
        h = height;
        w = std::clamp(static_cast<int>(std::lround(target / h)), 1, width);
    }
    h = std::clamp(h, 1, height);
    BlockRect r;
    r.width = w;
    r.height = h;
    r.x = static_cast<int>(rng.below(static_cast<std::uint64_t>(width - w) + 1));
    r.y = static_cast<int>(rng.below(static_cast<std::uint64_t>(height - h) + 1));
    return r;
}

OpResult optics_sim(const ImageBuffer& img, OpticsFault kind, OpticsParams param, std::uint64_t key) {
    OpResult result{img, {}};
    SubStream rng(key);
    switch (kind) {
        case OpticsFault::MotionBlur: {
            const int length = static_cast<int>(std::lround(param.value));
            if (length <= 1) {
                return result;
            }
            const double angle = rng.uniform(0.0, std::numbers::pi);
            result.image = convolve_fitting(img, Kernel::motion(length, angle));
            return result;
        }
        case OpticsFault::LensBlur: {
            if (param.value <= 0.0) {
                return result;
            }
            result.image = convolve_fitting(img, Kernel::disk(param.value));
            return result;
        }
        case OpticsFault::ResolutionLimit: {
            const double factor = param.value;
            if (factor < 1.0) {
                throw CorruptionError("resolution factor must be >= 1");
            }
            const int w = std::max(1, static_cast<int>(std::lround(img.width() / factor)));
            const int h = std::max(1, static_cast<int>(std::lround(img.height() / factor)));
            const FloatImage small = resample(img.to_float(), w, h, ResampleFilter::Bilinear);
            result.image = resample(small, img.width(), img.height(), ResampleFilter::Bicubic).clamp_quantize();
            return result;
        }
        case OpticsFault::BrightIllumination: {
            if (param.value == 1.0) {
                return result;
            }
            FloatImage f = img.to_float();
            for (double& v : f.data()) {
                v *= param.value;
            }
            result.image = f.clamp_quantize();
            return result;
        }
        case OpticsFault::DarkIllumination: {
            FloatImage f = img.to_float();
            const double sigma = param.aux / 255.0;
            for (double& v : f.data()) {
                v = v * param.value + (sigma > 0.0 ? sigma * rng.normal() : 0.0);
            }
            result.image = f.clamp_quantize();
            return result;
        }
        case OpticsFault::BlockingObstacle: {
            if (param.value <= 0.0) {
                return result;
            }
            const BlockRect r = obstacle_rect(img.width(), img.height(), param.value, derive_key({key, 1}));
            std::uint8_t fill[3];
            for (auto& c : fill) {
                c = static_cast<std::uint8_t>(rng.between(16, 96));
            }
            for (int y = r.y; y < r.y + r.height; ++y) {
                for (int x = r.x; x < r.x + r.width; ++x) {
                    for (int c = 0; c < 3; ++c) {
                        result.image.at(x, y, c) = fill[c];
                    }
                }
            }
            result.meta.regions.push_back(r);
            return result;
        }
        case OpticsFault::LensObstacle: {
            if (param.value <= 0.0) {
                return result;
            }
            constexpr double kOpacity = 0.75;
            constexpr double kEdge = 0.25;  // soft rim as a fraction of the radius
            const BlockRect box = obstacle_rect(img.width(), img.height(), param.value, derive_key({key, 1}));
            // Ellipse with the same area as the box, centered on it; the soft rim
            // extends past the nominal boundary by kEdge/2.
            const double cx = box.x + box.width / 2.0;
            const double cy = box.y + box.height / 2.0;
            const double rx = box.width / std::sqrt(std::numbers::pi);
            const double ry = box.height / std::sqrt(std::numbers::pi);
            double shade[3];
            for (auto& s : shade) {
                s = rng.uniform(0.08, 0.30);
            }
            FloatImage f = img.to_float();
            const double outer = 1.0 + kEdge / 2.0;
            const int x0 = std::max(0, static_cast<int>(std::floor(cx - rx * outer)));
            const int x1 = std::min(img.width(), static_cast<int>(std::ceil(cx + rx * outer)) + 1);
            const int y0 = std::max(0, static_cast<int>(std::floor(cy - ry * outer)));
            const int y1 = std::min(img.height(), static_cast<int>(std::ceil(cy + ry * outer)) + 1);
            BlockRect touched{x0, y0, 0, 0};
            int max_x = -1;
            int max_y = -1;
            int min_x = img.width();
            int min_y = img.height();
            ImageBuffer out = img;
            for (int y = y0; y < y1; ++y) {
                for (int x = x0; x < x1; ++x) {
                    const double dx = (x + 0.5 - cx) / rx;
                    const double dy = (y + 0.5 - cy) / ry;
                    const double d = std::sqrt(dx * dx + dy * dy);
                    const double t = std::clamp((outer - d) / kEdge, 0.0, 1.0);
                    const double mask = t * t * (3.0 - 2.0 * t);
                    if (mask <= 0.0) {
                        continue;
                    }
                    const double a = kOpacity * mask;
                    for (int c = 0; c < 3; ++c) {
                        out.at(x, y, c) = quantize_sample((1.0 - a) * f.at(x, y, c) + a * shade[c]);
                    }
                    min_x = std::min(min_x, x);
                    min_y = std::min(min_y, y);
                    max_x = std::max(max_x, x);
                    max_y = std::max(max_y, y);
                }
            }
            result.image = std::move(out);
            if (max_x >= 0) {
                touched = {min_x, min_y, max_x - min_x + 1, max_y - min_y + 1};
                result.meta.regions.push_back(touched);
            }
            return result;
        }
        case OpticsFault::LensShaking: {
            const int copies = static_cast<int>(std::lround(param.value));
            const int length = std::max(1, static_cast<int>(std::lround(param.aux)));
            if (copies < 1) {
                return result;
            }
            // Random-walk shake path; each exposure is smeared along its own direction.
            std::vector<Segment> segs;
            double px = 0.0;
            double py = 0.0;
            for (int i = 0; i < copies; ++i) {
                const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
                if (i > 0) {
                    px += 1.5 * std::cos(angle);
                    py += 1.5 * std::sin(angle);
                }
                segs.push_back({px, py, angle});
            }
            double mx = 0.0;
            double my = 0.0;
            for (const auto& s : segs) {
                mx += s.cx / copies;
                my += s.cy / copies;
            }
            for (auto& s : segs) {
                s.cx -= mx;
                s.cy -= my;
            }
            result.image = convolve_fitting(img, shake_kernel(segs, length));
            return result;
        }
    }
    return result;
}

}  // namespace robulink
