#include "robulink/analysis/pca.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robulink {

namespace {

using Matrix = std::vector<std::vector<double>>;

std::vector<double> multiply(const Matrix& a, const std::vector<double>& v) {
    std::vector<double> out(a.size(), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

void orient(std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (std::abs(v[i]) > std::abs(v[best]) + 1e-12) best = i;
    if (v[best] < 0)
        for (double& x : v) x = -x;
}

}  // namespace

std::pair<double, std::vector<double>> dominant_eigenpair(const Matrix& sym, const PcaOptions& options) {
    const std::size_t n = sym.size();
    if (n == 0) throw std::invalid_argument("empty matrix");
    // Start from the column with the largest diagonal plus a small uniform
    // component, so the start is never orthogonal to every dominant vector
    // of a non-zero matrix.
    std::size_t pivot = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (sym[i][i] > sym[pivot][pivot]) pivot = i;
    std::vector<double> v(n, 1.0 / std::sqrt(static_cast<double>(n)));
    v[pivot] += 1.0;
    double nv = norm(v);
    for (double& x : v) x /= nv;

    double lambda = 0.0;
    for (int it = 0; it < options.max_iterations; ++it) {
        std::vector<double> w = multiply(sym, v);
        const double nw = norm(w);
        if (nw == 0.0) return {0.0, v};
        for (double& x : w) x /= nw;
        // Align signs before measuring the step so a negative eigenvalue's
        // flip-flop does not look like non-convergence.
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += w[i] * v[i];
        if (dot < 0)
            for (double& x : w) x = -x;
        double diff = 0.0;
        for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(w[i] - v[i]));
        v = std::move(w);
        if (diff < options.tolerance) break;
    }
    const std::vector<double> av = multiply(sym, v);
    lambda = 0.0;
    for (std::size_t i = 0; i < n; ++i) lambda += v[i] * av[i];
    return {lambda, v};
}

PcaResult pca_project(const Matrix& rows, int k, const PcaOptions& options) {
    if (k < 1) throw std::invalid_argument("pca: k must be positive");
    const std::size_t n = rows.size();
    if (n < static_cast<std::size_t>(k) + 1) throw std::invalid_argument("pca: need at least k+1 rows");
    const std::size_t d = rows[0].size();
    if (d < 2) throw std::invalid_argument("pca: need at least 2 columns");
    for (const auto& r : rows)
        if (r.size() != d) throw std::invalid_argument("pca: ragged rows");

    std::vector<double> centroid(d, 0.0);
    for (const auto& r : rows)
        for (std::size_t j = 0; j < d; ++j) centroid[j] += r[j];
    for (double& c : centroid) c /= static_cast<double>(n);
    Matrix x(n, std::vector<double>(d));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) x[i][j] = rows[i][j] - centroid[j];

    Matrix cov(d, std::vector<double>(d, 0.0));
    for (const auto& r : x)
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) cov[a][b] += r[a] * r[b];
    double trace = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
        for (std::size_t b = 0; b < d; ++b) cov[a][b] /= static_cast<double>(n - 1);
        trace += cov[a][a];
    }

    PcaResult res;
    res.explained.assign(static_cast<std::size_t>(k), 0.0);
    res.points.assign(n, std::vector<double>(static_cast<std::size_t>(k), 0.0));
    const int wanted = std::min<int>(k, static_cast<int>(d));
    Matrix work = cov;
    for (int c = 0; c < wanted && trace > 0.0; ++c) {
        auto [lambda, v] = dominant_eigenpair(work, options);
        if (lambda <= 1e-12 * trace) break;
        orient(v);
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) work[a][b] -= lambda * v[a] * v[b];
        res.explained[static_cast<std::size_t>(c)] = lambda / trace;
        for (std::size_t i = 0; i < n; ++i) {
            double p = 0.0;
            for (std::size_t j = 0; j < d; ++j) p += x[i][j] * v[j];
            res.points[i][static_cast<std::size_t>(c)] = p;
        }
        res.eigenvalues.push_back(lambda);
        res.components.push_back(std::move(v));
    }
    res.rank_deficient = res.components.size() < static_cast<std::size_t>(k);
    return res;
}

PcaResult pca_project(const PerfMatrix& perf, int k, const PcaOptions& options) {
    Matrix rows;
    for (std::size_t r = 0; r < perf.row_count(); ++r) rows.push_back(perf.row(r));
    return pca_project(rows, k, options);
}

}  // namespace robulink
