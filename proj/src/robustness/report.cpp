#include "robulink/robustness/report.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "robulink/imgcore/image_io.hpp"

namespace robulink {

using nlohmann::json;

std::string format_value(const std::optional<double>& v) {
    if (!v) {
        return "-";
    }
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", *v);
    return buf;
}

namespace {

using Table = std::vector<std::vector<std::string>>;

std::string to_text(const Table& t) {
    std::vector<std::size_t> width;
    for (const auto& row : t) {
        width.resize(std::max(width.size(), row.size()));
        for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    std::string out;
    for (std::size_t r = 0; r < t.size(); ++r) {
        std::string line;
        for (std::size_t i = 0; i < t[r].size(); ++i) {
            const std::string& cell = t[r][i];
            if (i == 0) {
                line += cell + std::string(width[i] - cell.size(), ' ');
            } else {
                line += "  " + std::string(width[i] - cell.size(), ' ') + cell;
            }
        }
        out += line + "\n";
        if (r == 0) {
            std::size_t total = 0;
            for (std::size_t i = 0; i < width.size(); ++i) total += width[i] + (i ? 2 : 0);
            out += std::string(total, '-') + "\n";
        }
    }
    return out;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
    return out + "\"";
}

std::string to_csv(const Table& t) {
    std::string out;
    for (const auto& row : t) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_escape(row[i] == "-" ? "" : row[i]);
        }
        out += '\n';
    }
    return out;
}

std::vector<const ModelReport*> ranked_models(const RobustnessReport& report) {
    std::vector<const ModelReport*> out;
    for (const auto& e : report.ranking) {
        if (const auto* m = report.find(e.model)) out.push_back(m);
    }
    return out;
}

Table task_table(const RobustnessReport& report, Measure measure) {
    Table t;
    std::vector<std::string> header = {"Model"};
    for (Task task : kAllTasks) {
        for (Strength s : kCalibratedStrengths) {
            header.push_back(std::string(to_string(task)) + "-" + std::string(to_string(s)));
        }
    }
    header.push_back("Overall");
    t.push_back(header);
    for (const auto* m : ranked_models(report)) {
        const MeasureCells& c = m->cells(measure);
        std::vector<std::string> row = {m->model};
        for (Task task : kAllTasks) {
            for (Strength s : kCalibratedStrengths) row.push_back(format_value(c.at(task, s).value));
        }
        row.push_back(format_value(c.overall.value));
        t.push_back(row);
    }
    return t;
}

Table axis_table(const RobustnessReport& report, Measure measure, Axis axis) {
    Table t;
    std::vector<std::string> header = {"Model"};
    if (axis == Axis::Step) {
        for (Step s : kAllSteps) header.emplace_back(to_string(s));
    } else if (axis == Axis::Group) {
        for (Group g : kAllGroups) header.emplace_back(to_string(g));
    } else {
        for (const auto& d : all_dimensions()) header.push_back(std::to_string(d.id) + "-" + std::string(d.slug));
    }
    t.push_back(header);
    for (const auto* m : ranked_models(report)) {
        const MeasureCells& c = m->cells(measure);
        std::vector<std::string> row = {m->model};
        if (axis == Axis::Step) {
            for (const auto& cell : c.step) row.push_back(format_value(cell.value));
        } else if (axis == Axis::Group) {
            for (Group g : kAllGroups) row.push_back(format_value(c.group[static_cast<std::size_t>(g)].value));
        } else {
            for (const auto& cell : c.dimension) row.push_back(format_value(cell.value));
        }
        t.push_back(row);
    }
    return t;
}

json cell_json(const Cell& c) {
    json j = {{"value", c.value ? json(*c.value) : json(nullptr)}, {"count", c.count}};
    j["ci"] = c.ci ? json::array({c.ci->first, c.ci->second}) : json(nullptr);
    return j;
}

json measure_json(const MeasureCells& m) {
    json ts = json::object();
    for (Task task : kAllTasks) {
        json row = json::object();
        for (Strength s : kCalibratedStrengths) row[std::string(to_string(s))] = cell_json(m.at(task, s));
        ts[std::string(to_string(task))] = row;
    }
    json steps = json::object();
    for (Step s : kAllSteps) steps[std::string(to_string(s))] = cell_json(m.step[static_cast<std::size_t>(s)]);
    json groups = json::object();
    for (Group g : kAllGroups) groups[std::string(to_string(g))] = cell_json(m.group[static_cast<std::size_t>(g)]);
    json dims = json::object();
    for (const auto& d : all_dimensions()) dims[std::to_string(d.id)] = cell_json(m.dimension[d.id - 1]);
    return {{"task_strength", ts}, {"step", steps}, {"group", groups}, {"dimension", dims},
            {"overall", cell_json(m.overall)}};
}

}  // namespace

std::string render_task_table_text(const RobustnessReport& r, Measure m) { return to_text(task_table(r, m)); }
std::string render_task_table_csv(const RobustnessReport& r, Measure m) { return to_csv(task_table(r, m)); }
std::string render_axis_table_text(const RobustnessReport& r, Measure m, Axis a) { return to_text(axis_table(r, m, a)); }
std::string render_axis_table_csv(const RobustnessReport& r, Measure m, Axis a) { return to_csv(axis_table(r, m, a)); }

std::string render_ranking_text(const RobustnessReport& report) {
    Table t = {{"Rank", "Model", "R_a", "R_r", "Mean"}};
    for (std::size_t i = 0; i < report.ranking.size(); ++i) {
        const auto& e = report.ranking[i];
        t.push_back({std::to_string(i + 1), e.model, format_value(e.absolute), format_value(e.relative),
                     format_value(e.score)});
    }
    return to_text(t);
}

json report_to_json(const RobustnessReport& report) {
    json models = json::array();
    for (const auto& m : report.models) {
        models.push_back({{"model", m.model},
                          {"records", m.records},
                          {"missing_absolute", m.missing_absolute},
                          {"missing_relative", m.missing_relative},
                          {"absolute", measure_json(m.absolute)},
                          {"relative", measure_json(m.relative)}});
    }
    json ranking = json::array();
    for (const auto& e : report.ranking) {
        const auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        ranking.push_back({{"model", e.model}, {"absolute", opt(e.absolute)}, {"relative", opt(e.relative)},
                           {"score", opt(e.score)}});
    }
    return {{"ci_level", report.ci_level}, {"models", models}, {"ranking", ranking}};
}

json score_to_json(const ScoreValue& s) {
    json j = {{"value", s.value}, {"method", std::string(to_string(s.method))}, {"repeats", s.repeats}};
    if (!s.template_hash.empty()) j["template_hash"] = s.template_hash;
    return j;
}

ScoreValue score_from_json(const json& j) {
    ScoreValue s;
    s.value = j.at("value").get<double>();
    const auto m = parse_score_method(j.at("method").get<std::string>());
    if (!m) throw std::invalid_argument("unknown score method");
    s.method = *m;
    s.repeats = j.value("repeats", 0);
    s.template_hash = j.value("template_hash", "");
    if (s.value < 0.0 || s.value > 1.0) throw std::invalid_argument("score outside [0,1]");
    return s;
}

std::string eval_record_to_json_line(const EvalRecord& r) {
    const auto opt = [](const std::optional<ScoreValue>& s) { return s ? score_to_json(*s) : json(nullptr); };
    return json{{"model", r.model},
                {"sample_id", r.sample_id},
                {"task", std::string(to_string(r.task))},
                {"dimension", r.dimension},
                {"strength", std::string(to_string(r.strength))},
                {"ref_vs_gt", opt(r.ref_vs_gt)},
                {"dist_vs_gt", opt(r.dist_vs_gt)},
                {"ref_vs_dist", opt(r.ref_vs_dist)}}
        .dump();
}

EvalRecord eval_record_from_json_line(std::string_view line) {
    const json j = json::parse(line);
    EvalRecord r;
    r.model = j.at("model").get<std::string>();
    r.sample_id = j.at("sample_id").get<std::string>();
    const auto task = parse_task(j.at("task").get<std::string>());
    const auto strength = parse_strength(j.at("strength").get<std::string>());
    if (!task || !strength) throw std::invalid_argument("bad task or strength");
    r.task = *task;
    r.strength = *strength;
    r.dimension = j.at("dimension").get<int>();
    dimension_info(r.dimension);
    const auto opt = [&](const char* k) -> std::optional<ScoreValue> {
        if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
        return score_from_json(j.at(k));
    };
    r.ref_vs_gt = opt("ref_vs_gt");
    r.dist_vs_gt = opt("dist_vs_gt");
    r.ref_vs_dist = opt("ref_vs_dist");
    return r;
}

void save_eval_records(const std::vector<EvalRecord>& records, const std::filesystem::path& path) {
    std::string text;
    for (const auto& r : records) text += eval_record_to_json_line(r) + "\n";
    write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<EvalRecord> out;
    std::size_t n = 0;
    for (std::string line; std::getline(in, line);) {
        ++n;
        if (line.empty()) continue;
        try {
            out.push_back(eval_record_from_json_line(line));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace robulink
