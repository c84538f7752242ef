#include "robulink/analysis/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robulink {

namespace {

// Welford updates: a constant stream yields exactly zero variance.
struct Stats {
    double m = 0.0;
    double m2 = 0.0;
    std::size_t n = 0;
    void add(double v) {
        ++n;
        const double d = v - m;
        m += d / static_cast<double>(n);
        m2 += d * (v - m);
    }
    double mean() const { return m; }
    double variance() const { return n ? std::max(0.0, m2 / static_cast<double>(n)) : 0.0; }
};

}  // namespace

std::string_view to_string(Feature f) {
    switch (f) {
        case Feature::Light: return "light";
        case Feature::Contrast: return "contrast";
        case Feature::Color: return "color";
        case Feature::Blur: return "blur";
        case Feature::Si: return "si";
    }
    return "?";
}

double feature_value(const FeatureVector& v, Feature f) {
    switch (f) {
        case Feature::Light: return v.light;
        case Feature::Contrast: return v.contrast;
        case Feature::Color: return v.color;
        case Feature::Blur: return v.blur;
        case Feature::Si: return v.si;
    }
    return 0.0;
}

std::pair<double, double> feature_range(Feature f) {
    switch (f) {
        case Feature::Light: return {0.0, 1.0};
        case Feature::Contrast: return {0.0, 0.5};
        case Feature::Color: return {0.0, 1.0};
        case Feature::Blur: return {0.0, 0.05};
        case Feature::Si: return {0.0, 0.5};
    }
    return {0.0, 1.0};
}

FeatureVector features(const FloatImage& img) {
    const int w = img.width();
    const int h = img.height();
    std::vector<double> y(static_cast<std::size_t>(w) * h);
    Stats luma, rg, yb;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double R = img.at(c, r, 0), G = img.at(c, r, 1), B = img.at(c, r, 2);
            const double v = 0.299 * R + 0.587 * G + 0.114 * B;
            y[static_cast<std::size_t>(r) * w + c] = v;
            luma.add(v);
            rg.add(R - G);
            yb.add(0.5 * (R + G) - B);
        }
    }
    const auto at = [&](int c, int r) {
        return y[static_cast<std::size_t>(std::clamp(r, 0, h - 1)) * w + std::clamp(c, 0, w - 1)];
    };
    Stats lap, sobel;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            lap.add(at(c - 1, r) + at(c + 1, r) + at(c, r - 1) + at(c, r + 1) - 4.0 * at(c, r));
            const double gx = (at(c + 1, r - 1) + 2 * at(c + 1, r) + at(c + 1, r + 1)) -
                              (at(c - 1, r - 1) + 2 * at(c - 1, r) + at(c - 1, r + 1));
            const double gy = (at(c - 1, r + 1) + 2 * at(c, r + 1) + at(c + 1, r + 1)) -
                              (at(c - 1, r - 1) + 2 * at(c, r - 1) + at(c + 1, r - 1));
            sobel.add(std::sqrt(gx * gx + gy * gy));
        }
    }
    FeatureVector f;
    f.light = luma.mean();
    f.contrast = std::sqrt(luma.variance());
    f.color = std::sqrt(rg.variance() + yb.variance()) +
              0.3 * std::sqrt(rg.mean() * rg.mean() + yb.mean() * yb.mean());
    f.blur = lap.variance();
    f.si = std::sqrt(sobel.variance());
    return f;
}

FeatureVector features(const ImageBuffer& img) { return features(img.to_float()); }

Histogram distribution(std::span<const double> values, double lo, double hi, int bins) {
    if (values.empty()) throw std::invalid_argument("distribution: no values");
    if (bins < 1 || !(hi > lo)) throw std::invalid_argument("distribution: bad range or bin count");
    Histogram h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i) h.edges[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / bins;
    h.density.assign(static_cast<std::size_t>(bins), 0.0);
    for (double v : values) {
        int b = std::isnan(v) ? 0 : static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
        b = std::clamp(b, 0, bins - 1);
        h.density[static_cast<std::size_t>(b)] += 1.0;
    }
    for (double& d : h.density) d /= static_cast<double>(values.size());
    return h;
}

Histogram distribution(std::span<const double> values, Feature f, int bins) {
    const auto [lo, hi] = feature_range(f);
    return distribution(values, lo, hi, bins);
}

}  // namespace robulink
