// Brute-force reference implementations for the test suites. Nothing here
// includes a library header; inputs are plain vectors so the fast paths are
// checked against code that shares none of their structure.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fixture_corpus.hpp"

namespace oracle {

// Interleaved RGB doubles, row-major.
struct Planar {
    int width = 0;
    int height = 0;
    std::vector<double> v;

    double at(int x, int y, int c) const { return v[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
    double& at(int x, int y, int c) { return v[(static_cast<std::size_t>(y) * width + x) * 3 + c]; }
};

Planar to_planar(const RawImage& img);

// Correlation with replicate border, kernel anchored at its center.
Planar naive_convolve(const Planar& img, int kw, int kh, const std::vector<double>& kernel);

enum class Interp { Linear, Cubic };
// Pixel-center aligned, replicate border; cubic is Keys with a = -0.5.
Planar naive_resample(const Planar& img, int new_width, int new_height, Interp interp);

std::vector<double> naive_ranks(const std::vector<double>& v);
std::optional<double> naive_spearman(const std::vector<double>& x, const std::vector<double>& y);

// Cyclic Jacobi on a symmetric matrix; eigenvalues descending with matching
// unit eigenvectors (as columns of the returned vectors, one per eigenvalue).
struct Eigen {
    std::vector<double> values;
    std::vector<std::vector<double>> vectors;
};
Eigen jacobi_eigen(std::vector<std::vector<double>> a);

struct Pca {
    std::vector<std::vector<double>> points;      // [row][k]
    std::vector<std::vector<double>> components;  // [k][column]
    std::vector<double> explained;
};
Pca naive_pca(const std::vector<std::vector<double>>& rows, int k);

double naive_token_f1(const std::string& a, const std::string& b);

// Uniform quantizer: nearest of `levels` evenly spaced levels, ties upward.
std::uint8_t naive_quantize(std::uint8_t v, int levels);

double naive_psnr(const RawImage& a, const RawImage& b);

struct Rect {
    int x = 0, y = 0, w = 0, h = 0;
    bool contains(int px, int py) const { return px >= x && px < x + w && py >= y && py < y + h; }
};
std::size_t changed_pixels(const RawImage& a, const RawImage& b);
std::size_t changed_outside(const RawImage& a, const RawImage& b, const std::vector<Rect>& allowed);

// sRGB (D65) scalar conversions written straight from the standard formulas.
std::vector<double> naive_rgb_to_lab(double r, double g, double b);
std::vector<double> naive_rgb_to_hsv(double r, double g, double b);
std::vector<double> naive_rgb_to_ycbcr(double r, double g, double b);

// Sample mean by plain summation.
double naive_mean(const std::vector<double>& v);

}  // namespace oracle
