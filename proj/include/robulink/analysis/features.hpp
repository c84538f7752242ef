/**
 * @file features.hpp
 * @brief Low-level quality attributes of an image and their corpus
 *        histograms.
 *
 * All features work on normalized [0,1] values with Y = BT.601 luma:
 *   light     mean Y
 *   contrast  RMS deviation of Y
 *   color     Hasler-Suesstrunk colorfulness, sigma_rgyb + 0.3 mu_rgyb
 *   blur      variance of the 4-neighbour 3x3 Laplacian of Y
 *   si        standard deviation of the Sobel gradient magnitude of Y
 * Filters use replicate borders.
 */
#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include "robulink/imgcore/image.hpp"

namespace robulink {

struct FeatureVector {
    double light = 0.0;
    double contrast = 0.0;
    double color = 0.0;
    double blur = 0.0;
    double si = 0.0;

    bool operator==(const FeatureVector&) const = default;
};

enum class Feature { Light, Contrast, Color, Blur, Si };
inline constexpr std::array<Feature, 5> kAllFeatures = {Feature::Light, Feature::Contrast, Feature::Color,
                                                       Feature::Blur, Feature::Si};

std::string_view to_string(Feature f);
double feature_value(const FeatureVector& v, Feature f);
/// Fixed histogram range [lo, hi] per feature.
std::pair<double, double> feature_range(Feature f);

FeatureVector features(const FloatImage& img);
FeatureVector features(const ImageBuffer& img);

struct Histogram {
    std::vector<double> edges;    // bins + 1
    std::vector<double> density;  // sums to 1
};

/// Values outside [lo, hi] land in the edge bins. Needs at least one value.
Histogram distribution(std::span<const double> values, double lo, double hi, int bins = 64);
Histogram distribution(std::span<const double> values, Feature f, int bins = 64);

}  // namespace robulink
