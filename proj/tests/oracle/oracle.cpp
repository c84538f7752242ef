#include "oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracle {

namespace {

void cap_image(int w, int h) {
    if (w > 128 || h > 128) throw std::length_error("oracle input above 128x128");
}

int clampi(int v, int lo, int hi) { return v < lo ? lo : (v > hi ? hi : v); }

double keys(double t) {
    const double a = -0.5;
    t = std::fabs(t);
    if (t < 1) return (a + 2) * t * t * t - (a + 3) * t * t + 1;
    if (t < 2) return a * t * t * t - 5 * a * t * t + 8 * a * t - 4 * a;
    return 0;
}

double tent(double t) { return std::max(0.0, 1.0 - std::fabs(t)); }

}  // namespace

Planar to_planar(const RawImage& img) {
    Planar p{img.width, img.height, {}};
    for (auto b : img.rgb) p.v.push_back(b / 255.0);
    return p;
}

Planar naive_convolve(const Planar& img, int kw, int kh, const std::vector<double>& kernel) {
    cap_image(img.width, img.height);
    Planar out{img.width, img.height, std::vector<double>(img.v.size())};
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x)
            for (int c = 0; c < 3; ++c) {
                double s = 0;
                for (int j = 0; j < kh; ++j)
                    for (int i = 0; i < kw; ++i) {
                        const int sx = clampi(x + i - kw / 2, 0, img.width - 1);
                        const int sy = clampi(y + j - kh / 2, 0, img.height - 1);
                        s += kernel[j * kw + i] * img.at(sx, sy, c);
                    }
                out.at(x, y, c) = s;
            }
    return out;
}

Planar naive_resample(const Planar& img, int nw, int nh, Interp interp) {
    cap_image(img.width, img.height);
    cap_image(nw, nh);
    Planar out{nw, nh, std::vector<double>(static_cast<std::size_t>(nw) * nh * 3)};
    const double sx = double(img.width) / nw, sy = double(img.height) / nh;
    for (int y = 0; y < nh; ++y)
        for (int x = 0; x < nw; ++x) {
            const double px = (x + 0.5) * sx - 0.5, py = (y + 0.5) * sy - 0.5;
            for (int c = 0; c < 3; ++c) {
                double s = 0;
                // Sum over a generous window; the kernel is zero outside its support.
                for (int j = int(std::floor(py)) - 3; j <= int(std::floor(py)) + 3; ++j)
                    for (int i = int(std::floor(px)) - 3; i <= int(std::floor(px)) + 3; ++i) {
                        const double w = interp == Interp::Cubic ? keys(px - i) * keys(py - j)
                                                                 : tent(px - i) * tent(py - j);
                        if (w == 0) continue;
                        s += w * img.at(clampi(i, 0, img.width - 1), clampi(j, 0, img.height - 1), c);
                    }
                out.at(x, y, c) = s;
            }
        }
    return out;
}

std::vector<double> naive_ranks(const std::vector<double>& v) {
    if (v.size() > 50) throw std::length_error("oracle vector above 50 elements");
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, equal = 0;
        for (double w : v) {
            if (w < v[i]) ++less;
            if (w == v[i]) ++equal;
        }
        r[i] = less + (equal + 1) / 2.0;
    }
    return r;
}

std::optional<double> naive_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = naive_ranks(x), ry = naive_ranks(y);
    const double n = double(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += rx[i], my += ry[i];
    mx /= n, my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0 || syy == 0) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

Eigen jacobi_eigen(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    if (n > 8) throw std::length_error("oracle matrix above 8x8");
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) v[i][i] = 1;
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
                const double t = (theta >= 0 ? 1 : -1) / (std::fabs(theta) + std::sqrt(theta * theta + 1));
                const double c = 1 / std::sqrt(t * t + 1), s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto l, auto r) { return a[l][l] > a[r][r]; });
    Eigen e;
    for (auto i : order) {
        e.values.push_back(a[i][i]);
        std::vector<double> col(n);
        for (std::size_t k = 0; k < n; ++k) col[k] = v[k][i];
        e.vectors.push_back(col);
    }
    return e;
}

Pca naive_pca(const std::vector<std::vector<double>>& rows, int k) {
    const std::size_t n = rows.size(), m = rows.at(0).size();
    std::vector<double> mu(m, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < m; ++j) mu[j] += r[j] / double(n);
    std::vector<std::vector<double>> cov(m, std::vector<double>(m, 0.0));
    for (const auto& r : rows)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) cov[i][j] += (r[i] - mu[i]) * (r[j] - mu[j]) / double(n - 1);
    const Eigen e = jacobi_eigen(cov);
    double total = 0;
    for (double l : e.values) total += std::max(0.0, l);
    Pca p;
    for (int c = 0; c < k; ++c) {
        p.components.push_back(e.vectors[c]);
        p.explained.push_back(total > 0 ? std::max(0.0, e.values[c]) / total : 0.0);
    }
    for (const auto& r : rows) {
        std::vector<double> pt;
        for (int c = 0; c < k; ++c) {
            double s = 0;
            for (std::size_t j = 0; j < m; ++j) s += (r[j] - mu[j]) * e.vectors[c][j];
            pt.push_back(s);
        }
        p.points.push_back(pt);
    }
    return p;
}

double naive_token_f1(const std::string& a, const std::string& b) {
    auto words = [](const std::string& s) {
        std::string t;
        for (unsigned char ch : s) t += std::isalnum(ch) ? char(std::tolower(ch)) : ' ';
        std::set<std::string> out;
        std::istringstream in(t);
        for (std::string w; in >> w;) out.insert(w);
        return out;
    };
    const auto wa = words(a), wb = words(b);
    if (wa.empty() || wb.empty()) return 0.0;
    double common = 0;
    for (const auto& w : wa) common += wb.count(w);
    if (common == 0) return 0.0;
    const double p = common / wb.size(), r = common / wa.size();
    return 2 * p * r / (p + r);
}

std::uint8_t naive_quantize(std::uint8_t v, int levels) {
    int best = 0;
    double best_d = 1e9;
    for (int k = 0; k < levels; ++k) {
        const double level = k * 255.0 / (levels - 1);
        const double d = std::fabs(v - level);
        if (d <= best_d + 1e-12) best = k, best_d = std::min(best_d, d);
    }
    return static_cast<std::uint8_t>(std::lround(best * 255.0 / (levels - 1)));
}

double naive_psnr(const RawImage& a, const RawImage& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.rgb.size(); ++i) s += (double(a.rgb[i]) - b.rgb[i]) * (double(a.rgb[i]) - b.rgb[i]);
    if (s == 0) return INFINITY;
    return 10 * std::log10(255.0 * 255.0 * a.rgb.size() / s);
}

std::size_t changed_pixels(const RawImage& a, const RawImage& b) { return changed_outside(a, b, {}); }

std::size_t changed_outside(const RawImage& a, const RawImage& b, const std::vector<Rect>& allowed) {
    std::size_t n = 0;
    for (int y = 0; y < a.height; ++y)
        for (int x = 0; x < a.width; ++x) {
            bool inside = false;
            for (const auto& r : allowed) inside = inside || r.contains(x, y);
            if (inside) continue;
            for (int c = 0; c < 3; ++c)
                if (a.at(x, y, c) != b.at(x, y, c)) {
                    ++n;
                    break;
                }
        }
    return n;
}

std::vector<double> naive_rgb_to_lab(double r, double g, double b) {
    auto lin = [](double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); };
    const double R = lin(r), G = lin(g), B = lin(b);
    const double X = 0.4124564 * R + 0.3575761 * G + 0.1804375 * B;
    const double Y = 0.2126729 * R + 0.7151522 * G + 0.0721750 * B;
    const double Z = 0.0193339 * R + 0.1191920 * G + 0.9503041 * B;
    auto f = [](double t) {
        const double d = 6.0 / 29.0;
        return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
    };
    const double fx = f(X / 0.95047), fy = f(Y / 1.0), fz = f(Z / 1.08883);
    return {116 * fy - 16, 500 * (fx - fy), 200 * (fy - fz)};
}

std::vector<double> naive_rgb_to_hsv(double r, double g, double b) {
    const double mx = std::max({r, g, b}), mn = std::min({r, g, b}), d = mx - mn;
    double h = 0;
    if (d > 0) {
        if (mx == r) h = std::fmod(60 * (g - b) / d + 360, 360);
        else if (mx == g) h = 60 * (b - r) / d + 120;
        else h = 60 * (r - g) / d + 240;
    }
    return {h, mx > 0 ? d / mx : 0, mx};
}

std::vector<double> naive_rgb_to_ycbcr(double r, double g, double b) {
    const double y = 0.299 * r + 0.587 * g + 0.114 * b;
    return {y, -0.168736 * r - 0.331264 * g + 0.5 * b + 0.5, 0.5 * r - 0.418688 * g - 0.081312 * b + 0.5};
}

double naive_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

}  // namespace oracle
