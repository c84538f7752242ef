#include "robulink/imgcore/color.hpp"

#include <algorithm>
#include <cmath>

namespace robulink {

namespace {

// sRGB primaries, D65 white (IEC 61966-2-1).
constexpr double kRgbToXyz[3][3] = {
    {0.4124564, 0.3575761, 0.1804375},
    {0.2126729, 0.7151522, 0.0721750},
    {0.0193339, 0.1191920, 0.9503041},
};
constexpr double kXyzToRgb[3][3] = {
    {3.2404542, -1.5371385, -0.4985314},
    {-0.9692660, 1.8760108, 0.0415560},
    {0.0556434, -0.2040259, 1.0572252},
};
constexpr double kWhite[3] = {0.95047, 1.00000, 1.08883};

constexpr double kLabEpsilon = 216.0 / 24389.0;
constexpr double kLabKappa = 24389.0 / 27.0;

double lab_f(double t) {
    return t > kLabEpsilon ? std::cbrt(t) : (kLabKappa * t + 16.0) / 116.0;
}

double lab_f_inv(double f) {
    const double f3 = f * f * f;
    return f3 > kLabEpsilon ? f3 : (116.0 * f - 16.0) / kLabKappa;
}

}  // namespace

double srgb_to_linear(double v) noexcept {
    return v <= 0.04045 ? v / 12.92 : std::pow((v + 0.055) / 1.055, 2.4);
}

double linear_to_srgb(double v) noexcept {
    if (v <= 0.0031308) {
        return 12.92 * v;
    }
    return 1.055 * std::pow(v, 1.0 / 2.4) - 0.055;
}

Triple rgb_to_ycbcr(const Triple& rgb) noexcept {
    const double y = luma(rgb[0], rgb[1], rgb[2]);
    return {y, 0.5 + (rgb[2] - y) / 1.772, 0.5 + (rgb[0] - y) / 1.402};
}

Triple ycbcr_to_rgb(const Triple& ycc) noexcept {
    const double y = ycc[0];
    const double cb = ycc[1] - 0.5;
    const double cr = ycc[2] - 0.5;
    const double r = y + 1.402 * cr;
    const double b = y + 1.772 * cb;
    const double g = (y - 0.299 * r - 0.114 * b) / 0.587;
    return {r, g, b};
}

Triple rgb_to_hsv(const Triple& rgb) noexcept {
    const double r = rgb[0], g = rgb[1], b = rgb[2];
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = mx - mn;
    double h = 0.0;
    if (delta > 0.0) {
        if (mx == r) {
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        } else if (mx == g) {
            h = 60.0 * ((b - r) / delta + 2.0);
        } else {
            h = 60.0 * ((r - g) / delta + 4.0);
        }
        if (h < 0.0) {
            h += 360.0;
        }
    }
    const double s = mx > 0.0 ? delta / mx : 0.0;
    return {h, s, mx};
}

Triple hsv_to_rgb(const Triple& hsv) noexcept {
    const double v = hsv[2];
    const double s = hsv[1];
    if (s <= 0.0) {
        return {v, v, v};
    }
    double h = std::fmod(hsv[0], 360.0);
    if (h < 0.0) {
        h += 360.0;
    }
    const double hp = h / 60.0;
    const int sector = static_cast<int>(std::floor(hp)) % 6;
    const double frac = hp - std::floor(hp);
    // The dominant channel is exactly v, so max(R,G,B) round-trips bit-exactly.
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * frac);
    const double t = v * (1.0 - s * (1.0 - frac));
    switch (sector) {
        case 0: return {v, t, p};
        case 1: return {q, v, p};
        case 2: return {p, v, t};
        case 3: return {p, q, v};
        case 4: return {t, p, v};
        default: return {v, p, q};
    }
}

Triple rgb_to_lab(const Triple& rgb) noexcept {
    const double lin[3] = {srgb_to_linear(rgb[0]), srgb_to_linear(rgb[1]), srgb_to_linear(rgb[2])};
    double f[3];
    for (int i = 0; i < 3; ++i) {
        const double xyz = kRgbToXyz[i][0] * lin[0] + kRgbToXyz[i][1] * lin[1] + kRgbToXyz[i][2] * lin[2];
        f[i] = lab_f(xyz / kWhite[i]);
    }
    return {116.0 * f[1] - 16.0, 500.0 * (f[0] - f[1]), 200.0 * (f[1] - f[2])};
}

Triple lab_to_rgb(const Triple& lab) noexcept {
    const double fy = (lab[0] + 16.0) / 116.0;
    const double fx = fy + lab[1] / 500.0;
    const double fz = fy - lab[2] / 200.0;
    const double xyz[3] = {lab_f_inv(fx) * kWhite[0], lab_f_inv(fy) * kWhite[1], lab_f_inv(fz) * kWhite[2]};
    Triple out{};
    for (int i = 0; i < 3; ++i) {
        const double lin = kXyzToRgb[i][0] * xyz[0] + kXyzToRgb[i][1] * xyz[1] + kXyzToRgb[i][2] * xyz[2];
        out[i] = linear_to_srgb(lin);
    }
    return out;
}

namespace {

bool inside_unit_cube(const Triple& rgb) {
    constexpr double eps = 1e-9;
    for (double v : rgb) {
        if (v < -eps || v > 1.0 + eps) {
            return false;
        }
    }
    return true;
}

}  // namespace

Triple lab_to_rgb_in_gamut(const Triple& lab) noexcept {
    Triple rgb = lab_to_rgb(lab);
    if (inside_unit_cube(rgb)) {
        return rgb;
    }
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 30; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (inside_unit_cube(lab_to_rgb({lab[0], lab[1] * mid, lab[2] * mid}))) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lab_to_rgb({lab[0], lab[1] * lo, lab[2] * lo});
}

ColorPlanes convert_colorspace(const FloatImage& img, ColorSpace target) {
    ColorPlanes out;
    out.space = target;
    out.width = img.width();
    out.height = img.height();
    for (auto& p : out.plane) {
        p.resize(img.pixel_count());
    }
    const auto src = img.data();
    for (std::size_t i = 0; i < img.pixel_count(); ++i) {
        const Triple rgb{src[3 * i], src[3 * i + 1], src[3 * i + 2]};
        Triple t{};
        switch (target) {
            case ColorSpace::YCbCr: t = rgb_to_ycbcr(rgb); break;
            case ColorSpace::HSV: t = rgb_to_hsv(rgb); break;
            case ColorSpace::CIELAB: t = rgb_to_lab(rgb); break;
        }
        out.plane[0][i] = t[0];
        out.plane[1][i] = t[1];
        out.plane[2][i] = t[2];
    }
    return out;
}

ColorPlanes convert_colorspace(const ImageBuffer& img, ColorSpace target) {
    return convert_colorspace(img.to_float(), target);
}

FloatImage to_rgb(const ColorPlanes& planes) {
    FloatImage out(planes.width, planes.height);
    auto dst = out.data();
    for (std::size_t i = 0; i < out.pixel_count(); ++i) {
        const Triple t{planes.plane[0][i], planes.plane[1][i], planes.plane[2][i]};
        Triple rgb{};
        switch (planes.space) {
            case ColorSpace::YCbCr: rgb = ycbcr_to_rgb(t); break;
            case ColorSpace::HSV: rgb = hsv_to_rgb(t); break;
            case ColorSpace::CIELAB: rgb = lab_to_rgb(t); break;
        }
        dst[3 * i] = rgb[0];
        dst[3 * i + 1] = rgb[1];
        dst[3 * i + 2] = rgb[2];
    }
    return out;
}

}  // namespace robulink
