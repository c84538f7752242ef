#include <doctest.h>

#include <sstream>

#include "pipeline.hpp"
#include "robulink/cli/cli.hpp"
#include "robulink/imgcore/image_io.hpp"
#include "robulink/modelclient/exchange.hpp"
#include "robulink/robustness/report.hpp"
#include "support.hpp"

using namespace robulink;
namespace fs = std::filesystem;

namespace {

int cli(const std::vector<std::string>& args, std::string* out = nullptr, const CliContext& base = {}) {
    std::ostringstream o, e;
    CliContext ctx = base;
    ctx.out = &o;
    ctx.err = &e;
    std::vector<std::string> full = {"robulink"};
    full.insert(full.end(), args.begin(), args.end());
    const int rc = run_cli(full, ctx);
    if (out) *out = o.str() + e.str();
    return rc;
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.path().extension() == ext) ++n;
    return n;
}

std::size_t count_lines(const std::string& text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("dimension and strength lists") {
    CHECK(parse_dimension_list("all").size() == 33);
    CHECK(parse_dimension_list("1-3,16,jpeg") == std::vector<int>{1, 2, 3, 16});
    CHECK_THROWS(parse_dimension_list("40"));
    CHECK_THROWS(parse_dimension_list("nope"));
    CHECK(parse_strength_list("all").size() == 3);
    CHECK(parse_strength_list("low,high") == std::vector<Strength>{Strength::Low, Strength::High});
    CHECK_THROWS(parse_strength_list("extreme"));
}

TEST_CASE("config round trip keeps no credentials") {
    const nlohmann::json j = {{"manifest", "m.jsonl"},
                              {"seed", "12345678901234"},
                              {"dims", "1-4"},
                              {"strengths", {"mid"}},
                              {"endpoints", {{{"name", "gpt"}, {"kind", "openai"}, {"base_url", "https://x"},
                                              {"credential_env", "MY_KEY"}}}}};
    const RunConfig c = RunConfig::from_json(j, "/base");
    CHECK(c.manifest == fs::path("/base/m.jsonl"));
    CHECK(c.seed == 12345678901234ull);
    CHECK(c.resolved_dims() == std::vector<int>{1, 2, 3, 4});
    const std::string dumped = c.to_json().dump();
    CHECK(dumped.find("MY_KEY") != std::string::npos);
    CHECK(RunConfig::from_json(c.to_json()).to_json() == c.to_json());
    CHECK_THROWS(RunConfig::from_json({{"repeats", 0}}));
}

TEST_CASE("corrupt writes one image per dimension and strength") {
    testing::ScratchDir dir("cli-corrupt");
    write_image(testing::corpus()[0], dir / "in.png");
    std::string log;
    REQUIRE(cli({"corrupt", "-i", (dir / "in.png").string(), "--dim", "16", "--strength", "high", "--seed", "1",
                 "--out", (dir / "one").string()},
                &log) == 0);
    CHECK(fs::exists(dir / "one/in/16-jpeg_high.png"));
    CHECK(count_files(dir / "one", ".png") == 1);
    CHECK(count_lines(testing::read_text(dir / "one/metadata.jsonl")) == 1);

    REQUIRE(cli({"corrupt", "-i", (dir / "in.png").string(), "--dim", "all", "--strength", "all", "--seed", "1",
                 "--out", (dir / "all").string()}) == 0);
    CHECK(count_files(dir / "all", ".png") == 99);
    const std::string meta = testing::read_text(dir / "all/metadata.jsonl");
    CHECK(count_lines(meta) == 99);
    REQUIRE(cli({"corrupt", "-i", (dir / "in.png").string(), "--dim", "all", "--strength", "all", "--seed", "1",
                 "--out", (dir / "again").string()}) == 0);
    for (const auto& e : fs::directory_iterator(dir / "all/in"))
        CHECK(read_file_bytes(e.path()) == read_file_bytes(dir / "again/in" / e.path().filename()));
    CHECK(testing::read_text(dir / "again/metadata.jsonl") == meta);

    CHECK(cli({"corrupt", "-i", (dir / "missing.png").string(), "--out", (dir / "bad").string()}, &log) == 1);
}

TEST_CASE("eval, score and report on a mock model") {
    testing::Pipeline p("cli-pipe");
    p.build(3, "16", "low,mid");
    REQUIRE(p.run({"distort-set"}) == 0);
    CHECK(count_lines(testing::read_text(p.out / "distorted/records.jsonl")) == 6);
    REQUIRE(p.run({"eval"}) == 0);
    // 3 references + 6 distorted
    CHECK(count_lines(testing::read_text(p.out / "exchanges/mockA.jsonl")) == 9);
    auto stats = nlohmann::json::parse(testing::read_text(p.out / "eval_stats.json"));
    CHECK(stats["mockA"]["transport_calls"] == 9);
    const std::string first = testing::read_text(p.out / "exchanges/mockA.jsonl");
    const std::string coverage = testing::read_text(p.out / "coverage.json");

    REQUIRE(p.run({"eval"}) == 0);
    stats = nlohmann::json::parse(testing::read_text(p.out / "eval_stats.json"));
    CHECK(stats["mockA"]["transport_calls"] == 0);
    CHECK(stats["mockA"]["cache_hits"] == 9);
    CHECK(testing::read_text(p.out / "exchanges/mockA.jsonl") == first);
    CHECK(testing::read_text(p.out / "coverage.json") == coverage);

    REQUIRE(p.run({"score"}) == 0);
    REQUIRE(p.run({"report"}) == 0);
    CHECK(p.last_out.find("mockA") != std::string::npos);
    const auto report = nlohmann::json::parse(testing::read_text(p.out / "report/report.json"));
    CHECK(fs::exists(p.out / "report/absolute_groups.csv"));
    CHECK(fs::exists(p.out / "report/ranking.txt"));
    CHECK(report.dump().find("mockA") != std::string::npos);
    const auto recs = load_eval_records(p.out / "scores.jsonl");
    REQUIRE(recs.size() == 6);
    for (const auto& r : recs) {
        const bool flipped = r.sample_id == "s1";
        CHECK(*absolute(r) == (flipped ? 0.0 : 1.0));
        CHECK(*relative(r) == (flipped ? 0.0 : 1.0));
    }
}

TEST_CASE("offline network endpoint answers from cache only") {
    testing::Pipeline p("cli-offline");
    p.build(2, "9", "low");
    REQUIRE(p.run({"distort-set"}) == 0);
    auto cfg = nlohmann::json::parse(testing::read_text(p.config));
    cfg["endpoints"] = {{{"name", "remote"}, {"kind", "openai"}, {"base_url", "http://127.0.0.1:9"}}};
    testing::write_text(p.config, cfg.dump());
    CHECK(p.run({"eval"}) == kExitFailure);
    CHECK(p.last_err.find("offline") != std::string::npos);

    // Seed the cache with a mock run under the same name, then go offline.
    std::shared_ptr<MockTransport> mock = std::make_shared<MockTransport>();
    mock->set_default("A");
    CliContext ctx;
    ctx.transport_factory = [&](const Endpoint&) -> std::shared_ptr<Transport> { return mock; };
    cfg["offline"] = false;
    testing::write_text(p.config, cfg.dump());
    REQUIRE(p.run({"eval"}, ctx) == 0);
    CHECK(mock->calls() == 4);
    cfg["offline"] = true;
    testing::write_text(p.config, cfg.dump());
    REQUIRE(p.run({"eval"}) == 0);
    const auto stats = nlohmann::json::parse(testing::read_text(p.out / "eval_stats.json"));
    CHECK(stats["remote"]["transport_calls"] == 0);
}

TEST_CASE("report needs scores and ranks models") {
    testing::Pipeline p("cli-report");
    p.build(2, "9", "low");
    testing::write_text(p.out / "scores.jsonl", "");
    CHECK(p.run({"report"}) == kExitFailure);

    std::vector<EvalRecord> recs;
    for (const std::string model : {"good", "bad"})
        for (Task t : kAllTasks)
            for (Strength s : kCalibratedStrengths) {
                EvalRecord r;
                r.model = model;
                r.sample_id = "x";
                r.task = t;
                r.strength = s;
                const double v = model == "good" ? 1.0 : 0.25;
                r.ref_vs_gt = ScoreValue{1.0, ScoreMethod::OptionParse, 0, ""};
                r.dist_vs_gt = ScoreValue{v, ScoreMethod::OptionParse, 0, ""};
                r.ref_vs_dist = ScoreValue{v, ScoreMethod::OptionParse, 0, ""};
                recs.push_back(r);
            }
    save_eval_records(recs, p.out / "scores.jsonl");
    REQUIRE(p.run({"report"}) == 0);
    CHECK(p.last_out.find("1.0000") != std::string::npos);
    const std::string ranking = testing::read_text(p.out / "report/ranking.txt");
    CHECK(ranking.find("good") < ranking.find("bad"));
}

TEST_CASE("analyze") {
    testing::Pipeline p("cli-analyze");
    p.build(2, "9,16", "low");
    REQUIRE(p.run({"distort-set"}) == 0);
    REQUIRE(p.run({"eval"}) == 0);
    REQUIRE(p.run({"score"}) == 0);
    REQUIRE(p.run({"analyze"}) == 0);
    CHECK(p.last_out.find("skipped, at least 3 are needed") != std::string::npos);
    CHECK_FALSE(fs::exists(p.out / "analysis/srocc_groups_absolute.csv"));
    CHECK(count_lines(testing::read_text(p.out / "analysis/features_reference.csv")) == 3);
    CHECK(count_lines(testing::read_text(p.out / "analysis/features_distorted.csv")) == 5);
    CHECK(fs::exists(p.out / "analysis/histograms_reference.csv"));

    // Three models that are scaled copies of each other: units agree perfectly.
    testing::Pipeline q("cli-analyze3");
    q.build(4, "1-33", "low", {"m1", "m2", "m3"});
    std::vector<EvalRecord> recs;
    for (int d = 1; d <= 33; ++d)
        for (int m = 1; m <= 3; ++m) {
            EvalRecord r;
            r.model = "m" + std::to_string(m);
            r.sample_id = "x";
            r.task = Task::VQA;
            r.strength = Strength::Mid;
            r.dimension = d;
            const double v = (0.3 + 0.015 * d + 0.01 * ((d * 7) % 5)) * (0.7 + 0.1 * m);
            r.ref_vs_gt = ScoreValue{1.0, ScoreMethod::OptionParse, 0, ""};
            r.dist_vs_gt = ScoreValue{v, ScoreMethod::OptionParse, 0, ""};
            r.ref_vs_dist = ScoreValue{v, ScoreMethod::OptionParse, 0, ""};
            recs.push_back(r);
        }
    save_eval_records(recs, q.out / "scores.jsonl");
    REQUIRE(q.run({"analyze"}) == 0);
    const std::string srocc = testing::read_text(q.out / "analysis/srocc_groups_absolute.csv");
    std::istringstream lines(srocc);
    std::string line;
    std::getline(lines, line);
    int cells = 0;
    while (std::getline(lines, line)) {
        std::istringstream cols(line);
        std::string c;
        std::getline(cols, c, ',');
        while (std::getline(cols, c, ',')) {
            CHECK(std::stod(c) == doctest::Approx(1.0));
            ++cells;
        }
    }
    CHECK(cells == 49);
    const std::string pca = testing::read_text(q.out / "analysis/pca_absolute.csv");
    CHECK(pca.rfind("explained,1.000000,0.000000") != std::string::npos);
    CHECK(q.last_out.find("rank deficient") != std::string::npos);
}

}
