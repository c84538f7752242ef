#include "robulink/imgcore/metrics.hpp"

#include <cmath>
#include <cstdint>
#include <string>

namespace robulink {

double mse(const ImageBuffer& a, const ImageBuffer& b) {
    if (a.width() != b.width() || a.height() != b.height()) {
        throw ImageError("psnr: dimension mismatch " + std::to_string(a.width()) + "x" +
                         std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                         std::to_string(b.height()));
    }
    const auto da = a.data();
    const auto db = b.data();
    std::uint64_t sse = 0;
    for (std::size_t i = 0; i < da.size(); ++i) {
        const int d = static_cast<int>(da[i]) - static_cast<int>(db[i]);
        sse += static_cast<std::uint64_t>(d * d);
    }
    return static_cast<double>(sse) / static_cast<double>(da.size());
}

double psnr(const ImageBuffer& a, const ImageBuffer& b) {
    const double m = mse(a, b);
    if (m == 0.0) {
        return kPsnrIdentical;
    }
    return 10.0 * std::log10(255.0 * 255.0 / m);
}

}  // namespace robulink
