/**
 * @file evaluate.hpp
 * @brief Turns exchange logs into scored EvalRecords.
 */
#pragma once

#include <vector>

#include "robulink/dataset/distorted_set.hpp"
#include "robulink/modelclient/exchange.hpp"
#include "robulink/robustness/robustness.hpp"

namespace robulink {

struct ScoringRun {
    /// One record per (model, distorted record), models sorted by name.
    std::vector<EvalRecord> records;
    /// Records whose reference or distorted exchange was absent.
    std::size_t missing_reference = 0;
    std::size_t missing_distorted = 0;
};

/// Scores every model found in `exchanges`. A missing exchange leaves the
/// affected scores empty; it is never imputed. When a key occurs more than
/// once the last exchange wins.
ScoringRun score_exchanges(const std::vector<Sample>& samples, const std::vector<DistortedRecord>& records,
                           const std::vector<Exchange>& exchanges, Judge* judge, const ScoreOptions& options = {});

}  // namespace robulink
