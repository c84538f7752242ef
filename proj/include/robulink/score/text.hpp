/**
 * @file text.hpp
 * @brief Text normalization, option-label parsing and token-level F1.
 */
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace robulink {

/// Lowercase, ASCII punctuation replaced by spaces, whitespace collapsed.
std::string normalize_text(std::string_view text);

std::vector<std::string> tokenize(std::string_view text);

/// F1 between the sets of normalized tokens. Symmetric; 1 for identical
/// non-empty inputs; 0 when either side has no tokens (unless both texts
/// normalize to the same string).
double token_f1(std::string_view a, std::string_view b);

/// Extracts a choice label from a model answer. Recognized forms: a leading
/// label ("B", "(B)", "B.", "B)", "B:"), a stated answer ("the answer is (c)",
/// "Answer: C", "option b"), or a single distinct parenthesized label anywhere.
/// Only labels in `labels` are accepted (case-insensitive); the result is in
/// the case given in `labels`. A lowercase leading "a" followed by a space is
/// read as the article, not a label.
std::optional<std::string> parse_option_label(std::string_view output, const std::vector<std::string>& labels);

/// Index of the choice body found in `output` under normalization. The
/// longest matching body wins; a tie between different bodies yields nullopt.
std::optional<std::size_t> match_choice_text(std::string_view output, const std::vector<std::string>& bodies);

}  // namespace robulink
