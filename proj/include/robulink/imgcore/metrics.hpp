#pragma once

#include <limits>

#include "robulink/imgcore/image.hpp"

namespace robulink {

/// Sentinel returned by psnr for identical images; orders above every finite value.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double mse(const ImageBuffer& a, const ImageBuffer& b);

/// 10 log10(255^2 / MSE) over all channels.
double psnr(const ImageBuffer& a, const ImageBuffer& b);

}  // namespace robulink
