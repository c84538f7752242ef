#include "robulink/score/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace robulink {

namespace {

bool same_label(std::string_view a, std::string_view b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
               return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
           });
}

std::optional<std::string> lookup(std::string_view candidate, const std::vector<std::string>& labels) {
    for (const auto& l : labels) {
        if (same_label(candidate, l)) {
            return l;
        }
    }
    return std::nullopt;
}

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n\"'*`");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n\"'*`");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool space = true;
    for (unsigned char c : text) {
        if (std::ispunct(c) || std::isspace(c)) {
            if (!space) {
                out += ' ';
                space = true;
            }
        } else {
            out += static_cast<char>(std::tolower(c));
            space = false;
        }
    }
    if (!out.empty() && out.back() == ' ') {
        out.pop_back();
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::istringstream in(normalize_text(text));
    std::vector<std::string> out;
    for (std::string w; in >> w;) {
        out.push_back(std::move(w));
    }
    return out;
}

double token_f1(std::string_view a, std::string_view b) {
    const auto ta = tokenize(a);
    const auto tb = tokenize(b);
    const std::set<std::string> sa(ta.begin(), ta.end());
    const std::set<std::string> sb(tb.begin(), tb.end());
    if (sa.empty() || sb.empty()) {
        return sa.empty() && sb.empty() && normalize_text(a) == normalize_text(b) && !trim(a).empty() ? 1.0 : 0.0;
    }
    std::size_t common = 0;
    for (const auto& t : sa) {
        common += sb.count(t);
    }
    if (common == 0) {
        return 0.0;
    }
    const double p = static_cast<double>(common) / static_cast<double>(sa.size());
    const double r = static_cast<double>(common) / static_cast<double>(sb.size());
    return 2.0 * p * r / (p + r);
}

std::optional<std::string> parse_option_label(std::string_view output, const std::vector<std::string>& labels) {
    const std::string text = trim(output);
    if (text.empty()) {
        return std::nullopt;
    }

    // Leading label: "B", "(B)", "[B]", "B.", "B)", "B:" followed by end or a separator.
    static const std::regex leading(R"(^[\(\[]?([A-Za-z])(?:[\)\]\.:,]|\s|$))");
    std::smatch m;
    if (std::regex_search(text, m, leading)) {
        const std::string cand = m[1].str();
        const bool bracketed = text[0] == '(' || text[0] == '[';
        const bool bare_word = !bracketed && text.size() > 1 && std::isspace(static_cast<unsigned char>(text[1]));
        // "a dog" is an article, "I think" a pronoun; only uppercase bare letters count.
        const bool article = bare_word && std::islower(static_cast<unsigned char>(cand[0]));
        if (!article) {
            if (auto l = lookup(cand, labels)) {
                return l;
            }
        }
    }

    static const std::regex stated(R"((?:answer|option|choice)\s*(?:is|would be|:|-)?\s*[\(\[]?([A-Za-z])(?![A-Za-z]))",
                                   std::regex::icase);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), stated); it != std::sregex_iterator(); ++it) {
        if (auto l = lookup((*it)[1].str(), labels)) {
            return l;
        }
    }

    static const std::regex paren(R"(\(([A-Za-z])\))");
    std::optional<std::string> found;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), paren); it != std::sregex_iterator(); ++it) {
        if (auto l = lookup((*it)[1].str(), labels)) {
            if (found && *found != *l) {
                return std::nullopt;
            }
            found = l;
        }
    }
    return found;
}

std::optional<std::size_t> match_choice_text(std::string_view output, const std::vector<std::string>& bodies) {
    const std::string hay = " " + normalize_text(output) + " ";
    std::optional<std::size_t> best;
    std::size_t best_len = 0;
    bool tie = false;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        const std::string needle = normalize_text(bodies[i]);
        if (needle.empty() || hay.find(" " + needle + " ") == std::string::npos) {
            continue;
        }
        if (needle.size() > best_len) {
            best = i;
            best_len = needle.size();
            tie = false;
        } else if (needle.size() == best_len && normalize_text(bodies[*best]) != needle) {
            tie = true;
        }
    }
    return tie ? std::nullopt : best;
}

}  // namespace robulink
