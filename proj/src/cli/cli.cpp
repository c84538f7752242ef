#include "robulink/cli/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "robulink/analysis/correlation.hpp"
#include "robulink/analysis/features.hpp"
#include "robulink/analysis/pca.hpp"
#include "robulink/corrupt/engine.hpp"
#include "robulink/dataset/gate.hpp"
#include "robulink/imgcore/image_io.hpp"
#include "robulink/modelclient/client.hpp"
#include "robulink/robustness/evaluate.hpp"
#include "robulink/robustness/report.hpp"

namespace robulink {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::ostream& out_of(const CliContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_of(const CliContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

void write_text(const fs::path& path, const std::string& text) {
    write_file_bytes(path, std::vector<std::uint8_t>(text.begin(), text.end()));
}

std::string jsonl(const std::vector<json>& rows) {
    std::string s;
    for (const auto& r : rows) s += r.dump() + "\n";
    return s;
}

std::shared_ptr<Transport> transport_for(const Endpoint& e, const CliContext& ctx) {
    return ctx.transport_factory ? ctx.transport_factory(e) : make_transport(e);
}

int exit_code(std::size_t ok, std::size_t failed) {
    if (failed == 0) return kExitOk;
    return ok > 0 ? kExitPartial : kExitFailure;
}

bool is_image_file(const fs::path& p) {
    std::string ext = p.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext == ".png" || ext == ".ppm" || ext == ".pnm" || ext == ".p6";
}

std::vector<fs::path> expand_inputs(const std::vector<fs::path>& inputs) {
    std::vector<fs::path> out;
    for (const auto& in : inputs) {
        if (fs::is_directory(in)) {
            std::vector<fs::path> found;
            for (const auto& e : fs::directory_iterator(in))
                if (e.is_regular_file() && is_image_file(e.path())) found.push_back(e.path());
            std::sort(found.begin(), found.end());
            out.insert(out.end(), found.begin(), found.end());
        } else {
            out.push_back(in);
        }
    }
    return out;
}

fs::path distorted_dir(const RunConfig& cfg) { return cfg.out / "distorted"; }
fs::path exchanges_dir(const RunConfig& cfg) { return cfg.out / "exchanges"; }

std::vector<Sample> need_manifest(const RunConfig& cfg) {
    if (cfg.manifest.empty()) throw std::runtime_error("no manifest configured (use --manifest or the config file)");
    return load_manifest(cfg.manifest);
}

std::vector<DistortedRecord> need_records(const RunConfig& cfg) {
    const fs::path p = distorted_dir(cfg) / "records.jsonl";
    if (!fs::exists(p)) throw std::runtime_error("no distorted set at " + p.string() + " (run distort-set first)");
    return load_distorted_records(p);
}

std::vector<Exchange> load_exchange_file(const fs::path& p) {
    std::vector<Exchange> out;
    std::ifstream in(p);
    for (std::string line; std::getline(in, line);)
        if (!line.empty()) out.push_back(exchange_from_json_line(line));
    return out;
}

std::vector<EvalRecord> need_scores(const RunConfig& cfg) {
    const fs::path p = cfg.out / "scores.jsonl";
    if (!fs::exists(p)) throw std::runtime_error("no scores at " + p.string() + " (run score first)");
    return load_eval_records(p);
}

}  // namespace

// --- config -----------------------------------------------------------------

std::vector<int> parse_dimension_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        part.erase(std::remove_if(part.begin(), part.end(), ::isspace), part.end());
        if (part.empty()) continue;
        if (part == "all") {
            for (const auto& d : all_dimensions()) out.push_back(d.id);
            continue;
        }
        if (const auto dash = part.find('-'); dash != std::string::npos && dash > 0 &&
                                              std::isdigit(static_cast<unsigned char>(part[0]))) {
            const auto a = parse_dimension(part.substr(0, dash));
            const auto b = parse_dimension(part.substr(dash + 1));
            if (a && b && *a <= *b) {
                for (int d = *a; d <= *b; ++d) out.push_back(d);
                continue;
            }
        }
        const auto d = parse_dimension(part);
        if (!d) throw std::invalid_argument("unknown dimension '" + part + "'");
        out.push_back(*d);
    }
    std::vector<int> uniq;
    for (int d : out)
        if (std::find(uniq.begin(), uniq.end(), d) == uniq.end()) uniq.push_back(d);
    return uniq;
}

std::vector<Strength> parse_strength_list(const std::string& text) {
    std::vector<Strength> out;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ',');) {
        part.erase(std::remove_if(part.begin(), part.end(), ::isspace), part.end());
        if (part.empty()) continue;
        if (part == "all") {
            for (Strength s : kCalibratedStrengths)
                if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
            continue;
        }
        const auto s = parse_strength(part);
        if (!s) throw std::invalid_argument("unknown strength '" + part + "'");
        if (std::find(out.begin(), out.end(), *s) == out.end()) out.push_back(*s);
    }
    return out;
}

std::vector<int> RunConfig::resolved_dims() const {
    if (!dims.empty()) return dims;
    std::vector<int> all;
    for (const auto& d : all_dimensions()) all.push_back(d.id);
    return all;
}

std::vector<Strength> RunConfig::resolved_strengths() const {
    if (!strengths.empty()) return strengths;
    return {kCalibratedStrengths.begin(), kCalibratedStrengths.end()};
}

RunConfig RunConfig::from_json(const json& j, const fs::path& base_dir) {
    RunConfig c;
    const auto path_of = [&](const char* key, const fs::path& fallback) {
        if (!j.contains(key)) return fallback;
        fs::path p = j.at(key).get<std::string>();
        return p.is_absolute() || base_dir.empty() ? p : base_dir / p;
    };
    c.manifest = path_of("manifest", {});
    c.out = path_of("out", c.out);
    if (j.contains("seed")) {
        const auto& s = j.at("seed");
        c.seed = s.is_string() ? std::stoull(s.get<std::string>()) : s.get<std::uint64_t>();
    }
    if (j.contains("dims")) {
        const auto& d = j.at("dims");
        if (d.is_string()) {
            c.dims = parse_dimension_list(d.get<std::string>());
        } else {
            for (const auto& v : d) {
                const auto id = v.is_number() ? std::optional<int>(v.get<int>()) : parse_dimension(v.get<std::string>());
                if (!id) throw std::invalid_argument("config: unknown dimension " + v.dump());
                dimension_info(*id);
                c.dims.push_back(*id);
            }
        }
    }
    if (j.contains("strengths")) {
        const auto& s = j.at("strengths");
        if (s.is_string()) {
            c.strengths = parse_strength_list(s.get<std::string>());
        } else {
            std::string joined;
            for (const auto& v : s) joined += v.get<std::string>() + ",";
            c.strengths = parse_strength_list(joined);
        }
    }
    const std::string plan = j.value("strength_plan", "full");
    if (plan == "full") c.strength_plan = StrengthPlan::Full;
    else if (plan == "round-robin") c.strength_plan = StrengthPlan::RoundRobin;
    else throw std::invalid_argument("config: strength_plan must be 'full' or 'round-robin'");
    if (j.contains("endpoints"))
        for (const auto& e : j.at("endpoints")) c.endpoints.push_back(endpoint_from_json(e));
    if (j.contains("judge") && !j.at("judge").is_null()) c.judge = endpoint_from_json(j.at("judge"));
    c.offline = j.value("offline", false);
    c.repeats = j.value("repeats", 5);
    c.ci_level = j.value("ci_level", 0.90);
    c.resamples = j.value("resamples", 1000);
    c.threads = j.value("threads", 0u);
    c.prompts = prompt_templates_from_json(j.value("prompts", json()));
    c.judge_templates = judge_templates_from_json(j.value("judge_templates", json()));
    c.gates = j.value("gates", json());
    if (c.repeats < 1) throw std::invalid_argument("config: repeats must be at least 1");
    if (!(c.ci_level > 0 && c.ci_level < 1)) throw std::invalid_argument("config: ci_level must lie in (0,1)");
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["manifest"] = manifest.string();
    j["out"] = out.string();
    j["seed"] = std::to_string(seed);
    j["dims"] = resolved_dims();
    json st = json::array();
    for (Strength s : resolved_strengths()) st.push_back(std::string(to_string(s)));
    j["strengths"] = st;
    j["strength_plan"] = strength_plan == StrengthPlan::Full ? "full" : "round-robin";
    json eps = json::array();
    for (const auto& e : endpoints) eps.push_back(endpoint_to_json(e));
    j["endpoints"] = eps;
    j["judge"] = judge ? endpoint_to_json(*judge) : json(nullptr);
    j["offline"] = offline;
    j["repeats"] = repeats;
    j["ci_level"] = ci_level;
    j["resamples"] = resamples;
    j["threads"] = threads;
    j["prompts"] = prompt_templates_to_json(prompts);
    j["judge_templates"] = judge_templates_to_json(judge_templates);
    j["judge_template_hash"] = judge_templates.hash();
    j["gates"] = gates;
    return j;
}

RunConfig load_run_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
    return RunConfig::from_json(j, path.parent_path());
}

void write_resolved_config(const RunConfig& cfg) {
    write_text(cfg.out / "config.resolved.json", cfg.to_json().dump(2) + "\n");
}

// --- commands ---------------------------------------------------------------

int cmd_corrupt(const CorruptRequest& req, const CliContext& ctx) {
    const auto inputs = expand_inputs(req.inputs);
    if (inputs.empty()) {
        err_of(ctx) << "corrupt: no input images\n";
        return kExitFailure;
    }
    json frozen = {{"command", "corrupt"}, {"seed", std::to_string(req.seed)}, {"dims", req.dims}};
    json st = json::array();
    for (Strength s : req.strengths) st.push_back(std::string(to_string(s)));
    frozen["strengths"] = st;
    json ins = json::array();
    for (const auto& p : inputs) ins.push_back(p.string());
    frozen["inputs"] = ins;
    write_text(req.out / "config.resolved.json", frozen.dump(2) + "\n");

    std::vector<json> meta;
    std::vector<json> errors;
    std::size_t ok = 0;
    for (const auto& input : inputs) {
        ImageBuffer img;
        try {
            img = read_image(input);
        } catch (const std::exception& e) {
            errors.push_back({{"input", input.string()}, {"error", e.what()}});
            continue;
        }
        for (int d : req.dims) {
            for (Strength s : req.strengths) {
                const CorruptionSpec spec{d, s, req.seed};
                const auto& info = dimension_info(d);
                char name[96];
                std::snprintf(name, sizeof(name), "%02d-%s_%s.png", d, std::string(info.slug).c_str(),
                              std::string(to_string(s)).c_str());
                const fs::path rel = fs::path(input.stem()) / name;
                try {
                    const OpResult r = apply_detailed(spec, img);
                    write_image(r.image, req.out / rel);
                    json regions = json::array();
                    for (const auto& b : r.meta.regions) regions.push_back({b.x, b.y, b.width, b.height});
                    meta.push_back({{"input", input.string()},
                                    {"output", rel.string()},
                                    {"dimension", d},
                                    {"slug", std::string(info.slug)},
                                    {"strength", std::string(to_string(s))},
                                    {"seed", std::to_string(req.seed)},
                                    {"synthetic_wild", r.meta.synthetic_wild},
                                    {"regions", regions},
                                    {"warnings", r.meta.warnings}});
                    ++ok;
                } catch (const std::exception& e) {
                    errors.push_back({{"input", input.string()},
                                      {"dimension", d},
                                      {"strength", std::string(to_string(s))},
                                      {"error", e.what()}});
                }
            }
        }
    }
    write_text(req.out / "metadata.jsonl", jsonl(meta));
    write_text(req.out / "errors.jsonl", jsonl(errors));
    out_of(ctx) << "corrupt: " << ok << " image(s) written to " << req.out.string() << "\n";
    for (const auto& e : errors) err_of(ctx) << "corrupt: " << e.dump() << "\n";
    return exit_code(ok, errors.size());
}

int cmd_distort_set(const RunConfig& cfg, const CliContext& ctx) {
    write_resolved_config(cfg);
    const auto samples = need_manifest(cfg);
    const TaskBalance bal = task_balance(samples);
    out_of(ctx) << "samples: " << bal.total << " (MCQ " << bal.count(Task::MCQ) << ", VQA " << bal.count(Task::VQA)
                << ", CAP " << bal.count(Task::CAP) << ")\n";
    if (bal.unbalanced) err_of(ctx) << "warning: tasks are not evenly represented\n";
    BuildOptions opts{cfg.strength_plan, cfg.threads};
    const DistortedSet set = build_distorted_set(samples, cfg.resolved_dims(), cfg.resolved_strengths(), cfg.seed,
                                                 distorted_dir(cfg), opts);
    save_distorted_records(set.records, distorted_dir(cfg) / "records.jsonl");
    std::vector<json> failures;
    for (const auto& f : set.failures) {
        failures.push_back({{"sample_id", f.sample_id},
                            {"dimension", f.dimension},
                            {"strength", std::string(to_string(f.strength))},
                            {"error", f.message}});
        err_of(ctx) << "distort-set: " << f.sample_id << " dim " << f.dimension << " " << to_string(f.strength)
                    << ": " << f.message << "\n";
    }
    write_text(distorted_dir(cfg) / "failures.jsonl", jsonl(failures));
    out_of(ctx) << "distort-set: " << set.records.size() << "/" << set.planned << " records written\n";
    return exit_code(set.records.size(), set.failures.size());
}

int cmd_gate(const RunConfig& cfg, const std::vector<fs::path>& inputs, const CliContext& ctx) {
    write_resolved_config(cfg);
    const QualityGateConfig gates = cfg.gates.is_null() ? default_gate_config() : gate_config_from_json(cfg.gates);
    std::vector<std::pair<std::string, fs::path>> items;
    if (!inputs.empty()) {
        for (const auto& p : expand_inputs(inputs)) items.emplace_back(p.string(), p);
    } else {
        for (const auto& s : need_manifest(cfg)) items.emplace_back(s.id, s.image_file);
    }
    std::vector<json> rows;
    std::size_t passed = 0, errors = 0;
    for (const auto& [id, path] : items) {
        json row = {{"item", id}};
        try {
            const GateVerdict v = gate_image(read_image(path), gates);
            row["pass"] = v.pass;
            if (!v.pass) {
                row["failed_gate"] = v.failed_gate;
                row["reason"] = v.reason;
            }
            json scores = json::object();
            for (const auto& s : v.scores) scores[s.gate] = s.error.empty() ? json(s.score) : json(s.error);
            row["scores"] = scores;
            passed += v.pass;
        } catch (const std::exception& e) {
            row["error"] = e.what();
            ++errors;
        }
        rows.push_back(row);
    }
    write_text(cfg.out / "gate.jsonl", jsonl(rows));
    out_of(ctx) << "gate: " << passed << "/" << items.size() << " passed\n";
    return exit_code(items.size() - errors, errors);
}

int cmd_eval(const RunConfig& cfg, const CliContext& ctx) {
    write_resolved_config(cfg);
    if (cfg.endpoints.empty()) throw std::runtime_error("eval: no endpoints configured");
    const auto samples = need_manifest(cfg);
    const auto records = need_records(cfg);
    json coverage = json::object();
    json stats = json::object();
    std::size_t total_ok = 0, total_failed = 0;
    for (const auto& ep : cfg.endpoints) {
        auto transport = transport_for(ep, ctx);
        auto cache = std::make_shared<ExchangeCache>(exchanges_dir(cfg) / (ep.name + ".log"));
        ModelClient client(ep, transport, cache, ClientOptions{cfg.offline, {}});
        const InferenceRun run =
            run_inference(client, samples, records, distorted_dir(cfg), cfg.prompts, {cfg.seed, cfg.threads});
        std::string text;
        for (const auto& e : run.exchanges) text += exchange_to_json_line(e) + "\n";
        write_text(exchanges_dir(cfg) / (ep.name + ".jsonl"), text);
        json failures = json::array();
        for (const auto& f : run.failures) {
            failures.push_back({{"sample_id", f.sample_id}, {"corruption_key", f.corruption_key}, {"error", f.message}});
            err_of(ctx) << "eval: " << ep.name << " " << f.sample_id << " " << f.corruption_key << ": " << f.message
                        << "\n";
        }
        coverage[ep.name] = {{"planned", run.planned}, {"completed", run.exchanges.size()}, {"failures", failures}};
        stats[ep.name] = {{"transport_calls", run.transport_calls}, {"cache_hits", run.cache_hits}};
        out_of(ctx) << "eval: " << ep.name << ": " << run.exchanges.size() << "/" << run.planned << " exchanges, "
                    << run.cache_hits << " cached, " << run.transport_calls << " transport call(s)\n";
        total_ok += run.exchanges.size();
        total_failed += run.failures.size();
    }
    write_text(cfg.out / "coverage.json", coverage.dump(2) + "\n");
    write_text(cfg.out / "eval_stats.json", stats.dump(2) + "\n");
    return exit_code(total_ok, total_failed);
}

int cmd_score(const RunConfig& cfg, const CliContext& ctx) {
    write_resolved_config(cfg);
    const auto samples = need_manifest(cfg);
    const auto records = need_records(cfg);
    std::vector<Exchange> exchanges;
    std::vector<fs::path> files;
    if (!cfg.endpoints.empty()) {
        for (const auto& e : cfg.endpoints) files.push_back(exchanges_dir(cfg) / (e.name + ".jsonl"));
    } else if (fs::is_directory(exchanges_dir(cfg))) {
        for (const auto& e : fs::directory_iterator(exchanges_dir(cfg)))
            if (e.path().extension() == ".jsonl") files.push_back(e.path());
        std::sort(files.begin(), files.end());
    }
    for (const auto& f : files) {
        if (!fs::exists(f)) throw std::runtime_error("score: missing exchanges " + f.string() + " (run eval first)");
        const auto part = load_exchange_file(f);
        exchanges.insert(exchanges.end(), part.begin(), part.end());
    }
    std::unique_ptr<Judge> judge;
    if (cfg.judge) {
        auto transport = transport_for(*cfg.judge, ctx);
        if (cfg.offline && transport->is_network()) {
            err_of(ctx) << "score: judge '" << cfg.judge->name << "' is a network endpoint; offline run uses the "
                        << "fallback scorer where the judge cache has no entry\n";
        }
        auto cache = std::make_shared<ExchangeCache>(exchanges_dir(cfg) / ("judge-" + cfg.judge->name + ".log"));
        judge = std::make_unique<ClientJudge>(
            std::make_shared<ModelClient>(*cfg.judge, transport, cache, ClientOptions{cfg.offline, {}}));
    }
    ScoreOptions opts;
    opts.repeats = cfg.repeats;
    opts.templates = cfg.judge_templates;
    const ScoringRun run = score_exchanges(samples, records, exchanges, judge.get(), opts);
    save_eval_records(run.records, cfg.out / "scores.jsonl");
    out_of(ctx) << "score: " << run.records.size() << " record(s)";
    if (run.missing_reference || run.missing_distorted)
        out_of(ctx) << ", " << run.missing_reference << " missing reference, " << run.missing_distorted
                    << " missing distorted";
    out_of(ctx) << "\n";
    if (run.records.empty()) return kExitFailure;
    return run.missing_reference || run.missing_distorted ? kExitPartial : kExitOk;
}

int cmd_report(const RunConfig& cfg, const CliContext& ctx) {
    write_resolved_config(cfg);
    const auto records = need_scores(cfg);
    if (records.empty()) throw std::runtime_error("report: no scores");
    AggregateOptions opts;
    opts.level = cfg.ci_level;
    opts.resamples = cfg.resamples;
    opts.seed = cfg.seed;
    const RobustnessReport report = aggregate(records, opts);
    const fs::path dir = cfg.out / "report";
    for (Measure m : {Measure::Absolute, Measure::Relative}) {
        const std::string name = m == Measure::Absolute ? "absolute" : "relative";
        write_text(dir / (name + ".txt"), render_task_table_text(report, m));
        write_text(dir / (name + ".csv"), render_task_table_csv(report, m));
        write_text(dir / (name + "_steps.csv"), render_axis_table_csv(report, m, Axis::Step));
        write_text(dir / (name + "_groups.csv"), render_axis_table_csv(report, m, Axis::Group));
        write_text(dir / (name + "_dimensions.csv"), render_axis_table_csv(report, m, Axis::Dimension));
        write_text(dir / (name + "_steps.txt"), render_axis_table_text(report, m, Axis::Step));
        write_text(dir / (name + "_groups.txt"), render_axis_table_text(report, m, Axis::Group));
    }
    write_text(dir / "ranking.txt", render_ranking_text(report));
    write_text(dir / "report.json", report_to_json(report).dump(2) + "\n");
    auto& out = out_of(ctx);
    out << "Absolute robustness\n" << render_task_table_text(report, Measure::Absolute) << "\n";
    out << "Relative robustness\n" << render_task_table_text(report, Measure::Relative) << "\n";
    out << "Ranking\n" << render_ranking_text(report);
    bool partial = false;
    for (const auto& m : report.models) {
        if (m.missing_absolute || m.missing_relative) {
            partial = true;
            err_of(ctx) << "report: " << m.model << ": " << m.missing_absolute << " record(s) without R_a, "
                        << m.missing_relative << " without R_r (excluded)\n";
        }
    }
    return partial ? kExitPartial : kExitOk;
}

int cmd_analyze(const RunConfig& cfg, const CliContext& ctx) {
    write_resolved_config(cfg);
    const fs::path dir = cfg.out / "analysis";
    auto& out = out_of(ctx);
    const fs::path scores = cfg.out / "scores.jsonl";
    if (fs::exists(scores)) {
        AggregateOptions opts;
        opts.with_ci = false;
        const RobustnessReport report = aggregate(load_eval_records(scores), opts);
        for (Measure m : {Measure::Absolute, Measure::Relative}) {
            const std::string name = m == Measure::Absolute ? "absolute" : "relative";
            for (Axis axis : {Axis::Step, Axis::Group}) {
                const std::string an = axis == Axis::Step ? "steps" : "groups";
                const PerfMatrix perf = perf_matrix(report, m, axis);
                write_text(dir / ("perf_" + an + "_" + name + ".csv"), perf_matrix_csv(perf));
                if (perf.column_count() < 3) {
                    out << "analyze: " << perf.column_count() << " model(s); SRoCC " << an << " (" << name
                        << ") skipped, at least 3 are needed\n";
                    continue;
                }
                write_text(dir / ("srocc_" + an + "_" + name + ".csv"), correlation_matrix_csv(correlation_matrix(perf)));
            }
            PerfMatrix dims = perf_matrix(report, m, Axis::Dimension);
            PerfMatrix complete{{}, dims.columns, {}};
            for (std::size_t r = 0; r < dims.row_count(); ++r) {
                if (dims.row_complete(r)) {
                    complete.rows.push_back(dims.rows[r]);
                    complete.values.push_back(dims.values[r]);
                }
            }
            if (complete.column_count() < 2 || complete.row_count() < 3) {
                out << "analyze: PCA (" << name << ") skipped, needs at least 2 models and 3 scored dimensions\n";
                continue;
            }
            const PcaResult pca = pca_project(complete, 2);
            std::string csv = "unit,pc1,pc2\n";
            char buf[128];
            for (std::size_t r = 0; r < complete.row_count(); ++r) {
                std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", pca.points[r][0], pca.points[r][1]);
                csv += complete.rows[r] + buf;
            }
            std::snprintf(buf, sizeof(buf), "explained,%.6f,%.6f\n", pca.explained[0], pca.explained[1]);
            csv += buf;
            write_text(dir / ("pca_" + name + ".csv"), csv);
            if (pca.rank_deficient) out << "analyze: PCA (" << name << ") is rank deficient\n";
        }
    } else {
        out << "analyze: no scores; correlation and PCA skipped\n";
    }

    // Feature distributions for the reference corpus and, if present, the distorted set.
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, fs::path>>>> corpora;
    if (!cfg.manifest.empty()) {
        const auto samples = load_manifest(cfg.manifest);
        std::vector<std::pair<std::string, fs::path>> ref;
        for (const auto& s : samples) ref.emplace_back(s.id, s.image_file);
        corpora.emplace_back("reference", std::move(ref));
        const fs::path rec = distorted_dir(cfg) / "records.jsonl";
        if (fs::exists(rec)) {
            std::vector<std::pair<std::string, fs::path>> dist;
            for (const auto& r : load_distorted_records(rec))
                dist.emplace_back(r.sample_id + "@" + r.corruption_key(), distorted_dir(cfg) / r.image_path);
            corpora.emplace_back("distorted", std::move(dist));
        }
    }
    std::size_t failed = 0;
    for (const auto& [corpus, items] : corpora) {
        std::string csv = "item,light,contrast,color,blur,si\n";
        std::map<Feature, std::vector<double>> values;
        for (const auto& [id, path] : items) {
            try {
                const FeatureVector f = features(read_image(path));
                char buf[160];
                std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f,%.6f,%.6f\n", f.light, f.contrast, f.color, f.blur, f.si);
                csv += id + buf;
                for (Feature k : kAllFeatures) values[k].push_back(feature_value(f, k));
            } catch (const std::exception& e) {
                err_of(ctx) << "analyze: " << id << ": " << e.what() << "\n";
                ++failed;
            }
        }
        write_text(dir / ("features_" + corpus + ".csv"), csv);
        if (values.empty()) continue;
        std::string hist = "feature,bin_lo,bin_hi,density\n";
        for (Feature k : kAllFeatures) {
            const Histogram h = distribution(values[k], k);
            for (std::size_t b = 0; b < h.density.size(); ++b) {
                char buf[128];
                std::snprintf(buf, sizeof(buf), ",%.6f,%.6f,%.6f\n", h.edges[b], h.edges[b + 1], h.density[b]);
                hist += std::string(to_string(k)) + buf;
            }
        }
        write_text(dir / ("histograms_" + corpus + ".csv"), hist);
        out << "analyze: features for " << items.size() << " " << corpus << " image(s)\n";
    }
    return failed ? kExitPartial : kExitOk;
}

// --- command line -------------------------------------------------------------

int run_cli(const std::vector<std::string>& args, const CliContext& ctx) {
    CLI::App app{"robulink: image corruption and model robustness evaluation"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path, out_dir, manifest, dim_text = "all", strength_text = "all", plan;
    std::uint64_t seed = 0;
    bool offline = false;
    int max_in_flight = 0, repeats = 0, resamples = 0;
    double ci_level = 0.0;
    unsigned threads = 0;
    std::vector<std::string> inputs, endpoint_sel;

    app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "Output directory");
    auto* seed_opt = app.add_option("--seed", seed, "Master seed");
    auto* offline_opt = app.add_flag("--offline", offline, "Mock endpoints and cached exchanges only");
    auto* threads_opt = app.add_option("--threads", threads, "Worker threads (0 = automatic)");

    auto* corrupt = app.add_subcommand("corrupt", "Apply corruptions to images");
    corrupt->add_option("--input,-i", inputs, "Image files or directories")->required();
    corrupt->add_option("--dim", dim_text, "Dimensions: all, 16, jpeg, 1-8, 9,10");
    corrupt->add_option("--strength", strength_text, "Strengths: all, none, low, mid, high");

    auto* distort = app.add_subcommand("distort-set", "Build the distorted set for a manifest");
    distort->add_option("--manifest", manifest, "Sample manifest (JSONL)");
    auto* dset_dim = distort->add_option("--dim", dim_text, "Dimensions");
    auto* dset_str = distort->add_option("--strength", strength_text, "Strengths");
    distort->add_option("--plan", plan, "full or round-robin")->check(CLI::IsMember({"full", "round-robin"}));

    auto* gate = app.add_subcommand("gate", "Quality-gate reference images");
    gate->add_option("--manifest", manifest, "Sample manifest (JSONL)");
    gate->add_option("--input,-i", inputs, "Image files or directories instead of the manifest");

    auto* eval = app.add_subcommand("eval", "Query models on reference and distorted images");
    eval->add_option("--manifest", manifest, "Sample manifest (JSONL)");
    eval->add_option("--endpoint", endpoint_sel, "Configured endpoint name, endpoint JSON file, or inline JSON");
    eval->add_option("--max-in-flight", max_in_flight, "Concurrent requests per endpoint")->check(CLI::PositiveNumber);

    auto* score = app.add_subcommand("score", "Score exchanges against ground truth");
    score->add_option("--manifest", manifest, "Sample manifest (JSONL)");
    score->add_option("--repeats", repeats, "Judge repeats per open-ended answer")->check(CLI::PositiveNumber);

    auto* report = app.add_subcommand("report", "Aggregate scores into robustness tables");
    report->add_option("--ci-level", ci_level, "Confidence level")->check(CLI::Range(0.0, 1.0));
    report->add_option("--resamples", resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);

    auto* analyze = app.add_subcommand("analyze", "Correlation, PCA and feature distributions");
    analyze->add_option("--manifest", manifest, "Sample manifest (JSONL)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        std::ostringstream o, er;
        const int rc = app.exit(e, o, er);
        out_of(ctx) << o.str();
        err_of(ctx) << er.str();
        return rc == 0 ? kExitOk : kExitFailure;
    }

    try {
        if (corrupt->parsed()) {
            CorruptRequest req;
            for (const auto& i : inputs) req.inputs.emplace_back(i);
            req.dims = parse_dimension_list(dim_text);
            req.strengths = parse_strength_list(strength_text);
            req.seed = seed;
            req.out = out_dir.empty() ? fs::path("robulink-out") : fs::path(out_dir);
            return cmd_corrupt(req, ctx);
        }

        RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        if (*out_opt) cfg.out = out_dir;
        if (*seed_opt) cfg.seed = seed;
        if (*offline_opt) cfg.offline = offline;
        if (*threads_opt) cfg.threads = threads;
        if (!manifest.empty()) cfg.manifest = manifest;
        if (*dset_dim) cfg.dims = parse_dimension_list(dim_text);
        if (*dset_str) cfg.strengths = parse_strength_list(strength_text);
        if (!plan.empty()) cfg.strength_plan = plan == "full" ? StrengthPlan::Full : StrengthPlan::RoundRobin;
        if (repeats > 0) cfg.repeats = repeats;
        if (resamples > 0) cfg.resamples = resamples;
        if (ci_level > 0.0) cfg.ci_level = ci_level;
        if (!endpoint_sel.empty()) {
            std::vector<Endpoint> chosen;
            for (const auto& sel : endpoint_sel) {
                const auto it = std::find_if(cfg.endpoints.begin(), cfg.endpoints.end(),
                                             [&](const Endpoint& e) { return e.name == sel; });
                if (it != cfg.endpoints.end()) {
                    chosen.push_back(*it);
                } else if (!sel.empty() && sel.front() == '{') {
                    chosen.push_back(endpoint_from_json(json::parse(sel)));
                } else if (fs::exists(sel)) {
                    std::ifstream in(sel);
                    chosen.push_back(endpoint_from_json(json::parse(in)));
                } else {
                    throw std::invalid_argument("unknown endpoint '" + sel + "'");
                }
            }
            cfg.endpoints = std::move(chosen);
        }
        if (max_in_flight > 0)
            for (auto& e : cfg.endpoints) e.max_in_flight = max_in_flight;

        if (distort->parsed()) return cmd_distort_set(cfg, ctx);
        if (gate->parsed()) {
            std::vector<fs::path> paths(inputs.begin(), inputs.end());
            return cmd_gate(cfg, paths, ctx);
        }
        if (eval->parsed()) return cmd_eval(cfg, ctx);
        if (score->parsed()) return cmd_score(cfg, ctx);
        if (report->parsed()) return cmd_report(cfg, ctx);
        if (analyze->parsed()) return cmd_analyze(cfg, ctx);
    } catch (const std::exception& e) {
        err_of(ctx) << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitFailure;
}

}  // namespace robulink
