/**
 * @file pca.hpp
 * @brief Principal-component projection of corruption units described by
 *        their per-model robustness.
 */
#pragma once

#include <vector>

#include "robulink/analysis/correlation.hpp"

namespace robulink {

struct PcaResult {
    /// [row][component], k columns; components that do not exist are 0.
    std::vector<std::vector<double>> points;
    /// Unit eigenvectors over the columns, one per component found.
    std::vector<std::vector<double>> components;
    std::vector<double> eigenvalues;
    /// Length k, non-increasing; 0 for components that do not exist.
    std::vector<double> explained;
    /// Fewer than k components carry variance.
    bool rank_deficient = false;
};

struct PcaOptions {
    double tolerance = 1e-10;
    int max_iterations = 10000;
};

/// Centers each column, builds the column covariance and extracts the top
/// `k` eigenpairs by power iteration with deflation. Each component is
/// signed so its largest-magnitude loading is positive. Needs complete
/// rows, at least k+1 rows and at least 2 columns.
PcaResult pca_project(const std::vector<std::vector<double>>& rows, int k = 2, const PcaOptions& options = {});
PcaResult pca_project(const PerfMatrix& perf, int k = 2, const PcaOptions& options = {});

/// Symmetric power iteration for the dominant eigenpair.
std::pair<double, std::vector<double>> dominant_eigenpair(const std::vector<std::vector<double>>& sym,
                                                          const PcaOptions& options = {});

}  // namespace robulink
