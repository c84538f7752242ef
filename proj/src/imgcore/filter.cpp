#include "robulink/imgcore/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace robulink {

Kernel::Kernel(int w, int h, std::vector<double> values) : width(w), height(h), weights(std::move(values)) {
    if (w < 1 || h < 1 || w % 2 == 0 || h % 2 == 0) {
        throw ImageError("kernel sides must be odd and positive, got " + std::to_string(w) + "x" +
                         std::to_string(h));
    }
    if (weights.size() != static_cast<std::size_t>(w) * h) {
        throw ImageError("kernel weight count does not match its shape");
    }
}

double Kernel::sum() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

void Kernel::normalize() {
    const double s = sum();
    if (s == 0.0) {
        throw ImageError("cannot normalize a zero-sum kernel");
    }
    for (double& w : weights) {
        w /= s;
    }
}

Kernel Kernel::box(int side) {
    return Kernel(side, side, std::vector<double>(static_cast<std::size_t>(side) * side, 1.0 / (side * side)));
}

Kernel Kernel::gaussian(double sigma) {
    if (sigma <= 0.0) {
        return Kernel();
    }
    const auto taps = gaussian_taps(sigma, 1 << 20);
    const int side = static_cast<int>(taps.size());
    std::vector<double> w(static_cast<std::size_t>(side) * side);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            w[static_cast<std::size_t>(y) * side + x] = taps[x] * taps[y];
        }
    }
    return Kernel(side, side, std::move(w));
}

Kernel Kernel::disk(double radius) {
    if (radius <= 0.0) {
        return Kernel();
    }
    const int r = static_cast<int>(std::ceil(radius));
    const int side = 2 * r + 1;
    constexpr int kSub = 8;
    std::vector<double> w(static_cast<std::size_t>(side) * side, 0.0);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            int inside = 0;
            for (int sy = 0; sy < kSub; ++sy) {
                for (int sx = 0; sx < kSub; ++sx) {
                    const double px = x - r - 0.5 + (sx + 0.5) / kSub;
                    const double py = y - r - 0.5 + (sy + 0.5) / kSub;
                    if (px * px + py * py <= radius * radius) {
                        ++inside;
                    }
                }
            }
            w[static_cast<std::size_t>(y) * side + x] = inside;
        }
    }
    Kernel k(side, side, std::move(w));
    k.normalize();
    return k;
}

Kernel Kernel::motion(int length, double angle_rad) {
    if (length <= 1) {
        return Kernel();
    }
    const int side = length % 2 == 1 ? length : length + 1;
    const int c = side / 2;
    std::vector<double> w(static_cast<std::size_t>(side) * side, 0.0);
    const double half = (length - 1) / 2.0;
    const double dx = std::cos(angle_rad);
    const double dy = std::sin(angle_rad);
    const int samples = 16 * length;
    for (int i = 0; i <= samples; ++i) {
        const double t = -half + (2.0 * half) * i / samples;
        const double px = c + t * dx;
        const double py = c + t * dy;
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
    Kernel k(side, side, std::move(w));
    k.normalize();
    return k;
}

std::vector<double> gaussian_taps(double sigma, int max_radius) {
    if (sigma <= 0.0 || max_radius <= 0) {
        return {1.0};
    }
    const int radius = std::min(static_cast<int>(std::ceil(3.0 * sigma)), max_radius);
    std::vector<double> taps(2 * radius + 1);
    double total = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        taps[i + radius] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        total += taps[i + radius];
    }
    for (double& t : taps) {
        t /= total;
    }
    return taps;
}

FloatImage convolve(const FloatImage& img, const Kernel& kernel) {
    if (kernel.width > img.width() || kernel.height > img.height()) {
        throw ImageError("kernel " + std::to_string(kernel.width) + "x" + std::to_string(kernel.height) +
                         " is larger than image " + std::to_string(img.width()) + "x" +
                         std::to_string(img.height()));
    }
    const int kx = kernel.width / 2;
    const int ky = kernel.height / 2;
    FloatImage out(img.width(), img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc[3] = {0.0, 0.0, 0.0};
            for (int j = 0; j < kernel.height; ++j) {
                const int sy = std::clamp(y + j - ky, 0, img.height() - 1);
                for (int i = 0; i < kernel.width; ++i) {
                    const double w = kernel.at(i, j);
                    if (w == 0.0) {
                        continue;
                    }
                    const int sx = std::clamp(x + i - kx, 0, img.width() - 1);
                    acc[0] += w * img.at(sx, sy, 0);
                    acc[1] += w * img.at(sx, sy, 1);
                    acc[2] += w * img.at(sx, sy, 2);
                }
            }
            out.at(x, y, 0) = acc[0];
            out.at(x, y, 1) = acc[1];
            out.at(x, y, 2) = acc[2];
        }
    }
    return out;
}

ImageBuffer convolve(const ImageBuffer& img, const Kernel& kernel) {
    return convolve(img.to_float(), kernel).clamp_quantize();
}

std::vector<double> convolve_plane(std::span<const double> plane, int width, int height,
                                   std::span<const double> horizontal, std::span<const double> vertical) {
    const int rx = static_cast<int>(horizontal.size()) / 2;
    const int ry = static_cast<int>(vertical.size()) / 2;
    std::vector<double> tmp(plane.size());
    for (int y = 0; y < height; ++y) {
        const double* row = plane.data() + static_cast<std::size_t>(y) * width;
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int i = -rx; i <= rx; ++i) {
                acc += horizontal[i + rx] * row[std::clamp(x + i, 0, width - 1)];
            }
            tmp[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    std::vector<double> out(plane.size());
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc = 0.0;
            for (int j = -ry; j <= ry; ++j) {
                acc += vertical[j + ry] * tmp[static_cast<std::size_t>(std::clamp(y + j, 0, height - 1)) * width + x];
            }
            out[static_cast<std::size_t>(y) * width + x] = acc;
        }
    }
    return out;
}

FloatImage convolve_separable(const FloatImage& img, std::span<const double> horizontal,
                              std::span<const double> vertical) {
    if (horizontal.size() % 2 == 0 || vertical.size() % 2 == 0) {
        throw ImageError("separable taps must have odd length");
    }
    if (static_cast<int>(horizontal.size()) > img.width() || static_cast<int>(vertical.size()) > img.height()) {
        throw ImageError("separable kernel is larger than the image");
    }
    const std::size_t n = img.pixel_count();
    FloatImage out(img.width(), img.height());
    std::vector<double> plane(n);
    for (int c = 0; c < 3; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            plane[i] = img.data()[3 * i + c];
        }
        const auto res = convolve_plane(plane, img.width(), img.height(), horizontal, vertical);
        for (std::size_t i = 0; i < n; ++i) {
            out.data()[3 * i + c] = res[i];
        }
    }
    return out;
}

namespace {

struct Taps {
    int index[4];
    double weight[4];
    int count;
};

double cubic_weight(double t) {
    constexpr double a = -0.5;
    t = std::abs(t);
    if (t <= 1.0) {
        return ((a + 2.0) * t - (a + 3.0)) * t * t + 1.0;
    }
    if (t < 2.0) {
        return ((a * t - 5.0 * a) * t + 8.0 * a) * t - 4.0 * a;
    }
    return 0.0;
}

std::vector<Taps> build_taps(int src_n, int dst_n, ResampleFilter filter) {
    std::vector<Taps> taps(dst_n);
    const double scale = static_cast<double>(src_n) / dst_n;
    for (int i = 0; i < dst_n; ++i) {
        const double pos = (i + 0.5) * scale - 0.5;
        const int base = static_cast<int>(std::floor(pos));
        const double frac = pos - base;
        Taps& t = taps[i];
        if (filter == ResampleFilter::Bilinear) {
            t.count = 2;
            t.index[0] = std::clamp(base, 0, src_n - 1);
            t.index[1] = std::clamp(base + 1, 0, src_n - 1);
            t.weight[0] = 1.0 - frac;
            t.weight[1] = frac;
        } else {
            t.count = 4;
            for (int k = 0; k < 4; ++k) {
                t.index[k] = std::clamp(base - 1 + k, 0, src_n - 1);
                t.weight[k] = cubic_weight(frac - (k - 1));
            }
        }
    }
    return taps;
}

}  // namespace

FloatImage resample(const FloatImage& img, int new_width, int new_height, ResampleFilter filter) {
    if (new_width < 1 || new_height < 1) {
        throw ImageError("resample target must be at least 1x1, got " + std::to_string(new_width) + "x" +
                         std::to_string(new_height));
    }
    const auto tx = build_taps(img.width(), new_width, filter);
    const auto ty = build_taps(img.height(), new_height, filter);

    FloatImage horiz(new_width, img.height());
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < new_width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < tx[x].count; ++k) {
                    acc += tx[x].weight[k] * img.at(tx[x].index[k], y, c);
                }
                horiz.at(x, y, c) = acc;
            }
        }
    }
    FloatImage out(new_width, new_height);
    for (int y = 0; y < new_height; ++y) {
        for (int x = 0; x < new_width; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = 0; k < ty[y].count; ++k) {
                    acc += ty[y].weight[k] * horiz.at(x, ty[y].index[k], c);
                }
                out.at(x, y, c) = acc;
            }
        }
    }
    return out;
}

ImageBuffer resample(const ImageBuffer& img, int new_width, int new_height, ResampleFilter filter) {
    return resample(img.to_float(), new_width, new_height, filter).clamp_quantize();
}

}  // namespace robulink
