#include "robulink/dataset/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "robulink/imgcore/image_io.hpp"

namespace robulink {

using nlohmann::json;

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::toupper(c); });
    return out;
}

std::string message_for(std::size_t line, const std::string& field, const std::string& what) {
    std::string msg = "manifest";
    if (line > 0) {
        msg += " line " + std::to_string(line);
    }
    if (!field.empty()) {
        msg += ", field '" + field + "'";
    }
    return msg + ": " + what;
}

std::string require_string(const json& obj, const char* field, std::size_t line, bool allow_empty = false) {
    const auto it = obj.find(field);
    if (it == obj.end()) {
        throw ManifestError(line, field, "missing");
    }
    if (!it->is_string()) {
        throw ManifestError(line, field, "expected a string");
    }
    std::string v = it->get<std::string>();
    if (!allow_empty && v.empty()) {
        throw ManifestError(line, field, "empty");
    }
    return v;
}

Sample sample_from_json(const json& obj, std::size_t line) {
    if (!obj.is_object()) {
        throw ManifestError(line, "", "expected a JSON object");
    }
    Sample s;
    s.id = require_string(obj, "id", line);
    const std::string task = require_string(obj, "task", line);
    const auto t = parse_task(task);
    if (!t) {
        throw ManifestError(line, "task", "unknown task '" + task + "' (expected MCQ, VQA or CAP)");
    }
    s.task = *t;
    s.image_path = require_string(obj, "image_path", line);
    s.question = require_string(obj, "question", line);
    s.gt_answer = require_string(obj, "gt_answer", line);
    s.source = obj.contains("source") ? require_string(obj, "source", line, true) : std::string();
    if (const auto it = obj.find("choices"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) {
            throw ManifestError(line, "choices", "expected a list");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const json& c = (*it)[i];
            if (c.is_string()) {
                if (i >= 26) {
                    throw ManifestError(line, "choices", "too many unlabeled choices");
                }
                s.choices.push_back({std::string(1, static_cast<char>('A' + i)), c.get<std::string>()});
            } else if (c.is_object()) {
                s.choices.push_back({require_string(c, "label", line), require_string(c, "text", line, true)});
            } else {
                throw ManifestError(line, "choices", "entries must be strings or {label, text} objects");
            }
        }
    }
    if (const auto it = obj.find("score_points"); it != obj.end() && !it->is_null()) {
        if (!it->is_array()) {
            throw ManifestError(line, "score_points", "expected a list of strings");
        }
        for (const auto& p : *it) {
            if (!p.is_string()) {
                throw ManifestError(line, "score_points", "expected a list of strings");
            }
            s.score_points.push_back(p.get<std::string>());
        }
    }
    try {
        validate_sample(s);
    } catch (const ManifestError& e) {
        throw ManifestError(line, e.field(), e.detail());
    }
    return s;
}

}  // namespace

ManifestError::ManifestError(std::size_t line, std::string field, const std::string& what)
    : std::runtime_error(message_for(line, field, what)), line_(line), field_(std::move(field)), detail_(what) {}

std::string_view to_string(Task t) {
    switch (t) {
        case Task::MCQ: return "MCQ";
        case Task::VQA: return "VQA";
        case Task::CAP: return "CAP";
    }
    return "?";
}

std::optional<Task> parse_task(std::string_view text) {
    const std::string u = upper(text);
    if (u == "MCQ") return Task::MCQ;
    if (u == "VQA") return Task::VQA;
    if (u == "CAP" || u == "CAPTION") return Task::CAP;
    return std::nullopt;
}

std::size_t word_count(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::size_t n = 0;
    for (std::string w; in >> w;) {
        ++n;
    }
    return n;
}

std::optional<std::size_t> find_choice(const Sample& s, std::string_view label) {
    const std::string want = upper(label);
    for (std::size_t i = 0; i < s.choices.size(); ++i) {
        if (upper(s.choices[i].label) == want) {
            return i;
        }
    }
    return std::nullopt;
}

void validate_sample(const Sample& s) {
    if (s.id.empty()) {
        throw ManifestError(0, "id", "empty");
    }
    switch (s.task) {
        case Task::MCQ: {
            if (s.choices.size() < 2) {
                throw ManifestError(0, "choices", "MCQ needs at least 2 choices");
            }
            std::set<std::string> labels;
            for (const auto& c : s.choices) {
                if (!labels.insert(upper(c.label)).second) {
                    throw ManifestError(0, "choices", "duplicate label '" + c.label + "'");
                }
            }
            if (!find_choice(s, s.gt_answer)) {
                throw ManifestError(0, "gt_answer", "'" + s.gt_answer + "' matches no choice label");
            }
            break;
        }
        case Task::VQA:
            if (word_count(s.gt_answer) > 10) {
                throw ManifestError(0, "gt_answer", "VQA answers are limited to 10 words");
            }
            if (!s.choices.empty()) {
                throw ManifestError(0, "choices", "only MCQ samples carry choices");
            }
            break;
        case Task::CAP:
            if (!s.choices.empty()) {
                throw ManifestError(0, "choices", "only MCQ samples carry choices");
            }
            break;
    }
    if (!s.score_points.empty() && s.task != Task::CAP) {
        throw ManifestError(0, "score_points", "only CAP samples carry score points");
    }
}

std::vector<Sample> parse_manifest(std::string_view text, const std::filesystem::path& base_dir) {
    std::vector<Sample> out;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
            if (end == text.size()) break;
            continue;
        }
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ManifestError(line_no, "", std::string("invalid JSON: ") + e.what());
        }
        Sample s = sample_from_json(obj, line_no);
        if (!seen.insert(s.id).second) {
            throw ManifestError(line_no, "id", "duplicate sample id '" + s.id + "'");
        }
        s.image_file = base_dir / s.image_path;
        out.push_back(std::move(s));
        if (end == text.size()) break;
    }
    return out;
}

std::vector<Sample> load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ManifestError(0, "", "cannot open " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return parse_manifest(buf.str(), path.parent_path());
    } catch (const ManifestError& e) {
        throw ManifestError(e.line(), e.field(), e.detail() + " (" + path.string() + ")");
    }
}

std::string sample_to_json_line(const Sample& s) {
    json obj = {{"id", s.id},
                {"task", std::string(to_string(s.task))},
                {"image_path", s.image_path},
                {"question", s.question}};
    if (!s.choices.empty()) {
        json choices = json::array();
        for (const auto& c : s.choices) {
            choices.push_back({{"label", c.label}, {"text", c.text}});
        }
        obj["choices"] = choices;
    }
    obj["gt_answer"] = s.gt_answer;
    obj["source"] = s.source;
    if (!s.score_points.empty()) {
        obj["score_points"] = s.score_points;
    }
    return obj.dump();
}

void save_manifest(const std::vector<Sample>& samples, const std::filesystem::path& path) {
    std::string text;
    for (const auto& s : samples) {
        text += sample_to_json_line(s);
        text += '\n';
    }
    write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

TaskBalance task_balance(const std::vector<Sample>& samples) {
    TaskBalance b;
    for (const auto& s : samples) {
        ++b.counts[static_cast<std::size_t>(s.task)];
    }
    b.total = samples.size();
    const auto [lo, hi] = std::minmax_element(b.counts.begin(), b.counts.end());
    b.unbalanced = *hi - *lo > 1;
    return b;
}

}  // namespace robulink
